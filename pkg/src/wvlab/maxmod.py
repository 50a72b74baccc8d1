"""Maximum modulus of a rotated series on a circle |z| = r.

The rotated series multiplies coefficient n by exp(i * theta_n * t); its
maximum modulus over the circle is the sup over psi of

    |sum_n |a_n| r^n exp(i(arg a_n + theta_n t + n psi))|.

Terms are normalized by the maximal term and restricted to the window
[head_start, trunc_n] certified by the scan; both dropped masses are far
below every tolerance used here and are recorded on the result.  The
window polynomial is sampled on a uniform grid of N_psi points (a power
of two, at least 16x the window width) via FFT, in strided chunks so the
transform size stays bounded, and the top grid candidates are polished by
golden-section refinement.

For wide windows the refinement evaluates a degree-16 Taylor surrogate
in the offset from the candidate grid point: the grid-relative phases
m * psi_j reduce exactly in integer arithmetic (m * j mod N_psi), and the
offset never exceeds one grid step, where the surrogate's remainder is
below 1e-26 of the coefficient mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .accel import cexp_dot, scaled_moments
from .phases import PhaseFraction, PhaseSequence, phase_angles
from .series import (
    DEFAULT_MARGIN_NATS,
    DEFAULT_N_CAP,
    CoefficientSequence,
    Radius,
    _scan,
    log_G,
)

__all__ = ["eval_rotated", "max_modulus", "MaxModResult"]

_TWO_PI = 2.0 * math.pi
_BLOCK = 1 << 20
_DIRECT_W = 1 << 16          # below this window width, refine by direct sums
_DEFAULT_FFT_CHUNK = 1 << 24
_MAX_MOMENT = 16      # expansion orders 0..16
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _reduced_linear_phase(n: np.ndarray, psi: float) -> np.ndarray:
    """n * psi mod 2pi in 80-bit arithmetic; float64 products lose ~1e-8
    rad by n ~ 3e7, extended precision keeps it below 1e-11."""
    prod = n.astype(np.longdouble) * np.longdouble(psi)
    return np.mod(prod, np.longdouble(_TWO_PI)).astype(np.float64)


def eval_rotated(
    seq: CoefficientSequence,
    theta: PhaseSequence,
    u: PhaseFraction,
    radius: Radius,
    psi: float,
    *,
    margin_nats: float = DEFAULT_MARGIN_NATS,
    n_cap: int = DEFAULT_N_CAP,
) -> float:
    """ln |sum_{n <= trunc} |a_n| r^n e^{i(arg a_n + angle(theta_n u) + n psi)}|.

    Reference evaluator: sums every term up to the truncation index with a
    compensated reduction.  The certified tail bound of the scan applies.
    """
    sc = _scan(seq, radius, margin_nats, n_cap)
    theta.check(sc.trunc_n + 1)
    parts_re, parts_im = [], []
    lo = 0
    while lo <= sc.trunc_n:
        hi = min(lo + _BLOCK, sc.trunc_n + 1)
        t = seq.term_logs(radius, lo, hi) - sc.log_mu
        n = np.arange(lo, hi, dtype=np.float64)
        mag = np.exp(t)
        ph = seq.arg(n) + phase_angles(theta, u, lo, hi) + _reduced_linear_phase(n, psi)
        re, im = cexp_dot(mag, ph)
        parts_re.append(re)
        parts_im.append(im)
        lo = hi
    total = math.hypot(math.fsum(parts_re), math.fsum(parts_im))
    return sc.log_mu + (math.log(total) if total > 0.0 else -math.inf)


@dataclass
class MaxModResult:
    """Maximum modulus with its location and accounting.

    ``log_res_bound`` bounds the absolute value that could hide between
    grid points (first-order in the grid step); ``log_head``/``log_tail``
    bound the coefficient mass outside the evaluated window.  All three
    are ln-scale absolute bounds comparable against ``log_M``.
    """

    log_M: float
    psi_star: float
    n_lo: int
    trunc_n: int
    n_psi: int
    fft_size: int
    log_tail: float
    log_head: float
    log_res_bound: float
    aligned: bool
    candidates: tuple


def _next_pow2(x: int) -> int:
    return 1 << max(0, (x - 1).bit_length())


def _assemble_window(seq, theta, u, radius, sc):
    """Window coefficients d_m = (|a_n| r^n / mu) e^{i(arg + rotation)},
    m = n - head_start, plus the derivative-mass sum for the grid bound."""
    n_lo, trunc = sc.head_start, sc.trunc_n
    W = trunc - n_lo + 1
    d = np.empty(W, dtype=np.complex128)
    m_mass_parts = []
    lo = n_lo
    while lo <= trunc:
        hi = min(lo + _BLOCK, trunc + 1)
        t = seq.term_logs(radius, lo, hi) - sc.log_mu
        n = np.arange(lo, hi, dtype=np.float64)
        mag = np.exp(t)
        ph = seq.arg(n) + phase_angles(theta, u, lo, hi)
        blk = d[lo - n_lo : hi - n_lo]
        np.multiply(mag, np.cos(ph), out=blk.real)
        np.multiply(mag, np.sin(ph), out=blk.imag)
        m_mass_parts.append(float(np.dot(n - n_lo, mag)))
        lo = hi
    return d, math.fsum(m_mass_parts)


def _grid_candidates(d, n_psi, fft_size, top_k, workers):
    """Top grid points of |P| over psi_j = 2pi j / n_psi, FFT'd in K
    strided chunks (chunk c holds j = c mod K); deterministic tie-break
    toward smaller j."""
    K = n_psi // fft_size
    W = d.size
    cands = []
    if K == 1:
        tw = None
    else:
        base = np.exp((2j * math.pi / n_psi) * np.arange(W))
        tw = np.ones(W, dtype=np.complex128)
    for c in range(K):
        block = d if tw is None else d * tw
        v = scipy.fft.ifft(block, n=fft_size, norm="forward", workers=workers)
        del block
        val2 = v.real * v.real + v.imag * v.imag
        del v
        k = min(top_k, val2.size)
        idx = np.argpartition(val2, -k)[-k:]
        for i in idx:
            cands.append((float(val2[i]), c + K * int(i)))
        del val2
        if tw is not None and c < K - 1:
            tw *= base
    cands.sort(key=lambda t: (-t[0], t[1]))
    return cands[:top_k]


def _golden_max(f, a, b, tol):
    """Golden-section maximization; returns (best_value, best_x)."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    best_v, best_x = max((f1, x1), (f2, x2), key=lambda p: (p[0], -abs(p[1])))
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        for v, x in ((f1, x1), (f2, x2)):
            if v > best_v:
                best_v, best_x = v, x
    return best_v, best_x


def _refine_direct(d, j, n_psi, tol):
    """Maximize |sum_m d_m e^{im psi}| near psi_j by direct evaluation."""
    m = np.arange(d.size, dtype=np.float64)
    psi_j = _TWO_PI * j / n_psi
    step = _TWO_PI / n_psi

    def val(delta):
        ang = _reduced_linear_phase(m, psi_j + delta)
        e = np.empty(d.size, dtype=np.complex128)
        np.cos(ang, out=e.real)
        np.sin(ang, out=e.imag)
        z = np.dot(d, e)
        return abs(z)

    v, delta = _golden_max(val, -step, step, tol)
    v0 = val(0.0)
    if v0 >= v:
        v, delta = v0, 0.0
    return v, (psi_j + delta) % _TWO_PI


def _refine_moments(d, j, n_psi, tol):
    """Maximize near grid point j through a Taylor surrogate in the
    offset.  Grid-relative phases m*j mod n_psi are exact in int64
    (m, j both < 2^31 here); the offset stays within one grid step, so
    the scaled offset variable is at most pi * W / n_psi <= pi/16 and a
    16-term expansion is exact to ~1e-26 relative.
    """
    W = d.size
    m = np.arange(W, dtype=np.int64)
    ang = (m * j % n_psi) * (_TWO_PI / n_psi)
    rot = np.empty(W, dtype=np.complex128)
    np.cos(ang, out=rot.real)
    np.sin(ang, out=rot.imag)
    rot *= d
    half = max(1.0, (W - 1) / 2.0)
    xi = (m.astype(np.float64) - (W - 1) / 2.0) / half
    mo_re, mo_im = scaled_moments(rot.real.copy(), rot.imag.copy(), xi, _MAX_MOMENT)
    mo = mo_re + 1j * mo_im
    step = _TWO_PI / n_psi
    psi_j = step * j
    coeff = np.empty(_MAX_MOMENT + 1, dtype=np.complex128)

    def val(delta):
        iu = 1j * (delta * half)
        p = 1.0 + 0j
        for k in range(_MAX_MOMENT + 1):
            coeff[k] = p
            p = p * iu / (k + 1)
        return abs(np.dot(coeff, mo))

    v, delta = _golden_max(val, -step, step, tol)
    v0 = val(0.0)
    if v0 >= v:
        v, delta = v0, 0.0
    return v, (psi_j + delta) % _TWO_PI


def max_modulus(
    seq: CoefficientSequence,
    theta: PhaseSequence,
    u: PhaseFraction,
    radius: Radius,
    *,
    margin_nats: float = DEFAULT_MARGIN_NATS,
    n_cap: int = DEFAULT_N_CAP,
    top_k: int = 5,
    bracket_tol: float = 1e-12,
    fft_chunk: int = _DEFAULT_FFT_CHUNK,
    workers: int = 1,
) -> MaxModResult:
    """Maximum of ln |f_t| over the circle of the given radius.

    Grid of N_psi = smallest power of two >= 16x the certified window
    width, then golden-section refinement around the top_k grid values
    down to a bracket of ``bracket_tol`` radians.  The returned value is
    never below the best grid sample; the first-order resolution bound,
    window truncation bounds and all refined candidates are reported.

    A rotation parameter of exactly 0 on a nonnegative-coefficient series
    short-circuits: all terms align at psi = 0 and the maximum is G(r).
    """
    sc = _scan(seq, radius, margin_nats, n_cap)
    theta.check(sc.trunc_n + 1)

    if u.num == 0 and seq.nonnegative:
        lg = log_G(seq, radius, margin_nats=margin_nats, n_cap=n_cap)
        return MaxModResult(
            log_M=lg, psi_star=0.0, n_lo=0, trunc_n=sc.trunc_n, n_psi=0,
            fft_size=0, log_tail=sc.log_tail, log_head=-math.inf,
            log_res_bound=-math.inf, aligned=True,
            candidates=((lg, 0.0),),
        )

    d, m_mass = _assemble_window(seq, theta, u, radius, sc)
    W = d.size
    n_psi = _next_pow2(16 * (W + 1))
    fft_size = n_psi
    floor = _next_pow2(W)
    while fft_size > max(fft_chunk, floor) and fft_size // 2 >= floor:
        fft_size //= 2

    cands = _grid_candidates(d, n_psi, fft_size, top_k, workers)

    refine = _refine_direct if W <= _DIRECT_W else _refine_moments
    best_v2, best_j = cands[0]
    results = []
    # wide windows pay ~O(17 W) per refinement; skip grid points that
    # cannot plausibly beat the leader
    cutoff = best_v2 * (1.0 - 1e-3) if W > _DIRECT_W else -1.0
    for v2, j in cands:
        if v2 >= cutoff:
            results.append(refine(d, j, n_psi, bracket_tol))
        else:
            results.append((math.sqrt(v2), _TWO_PI * j / n_psi))
    results.sort(key=lambda p: (-p[0], p[1]))
    best_val, psi_star = results[0]
    best_val = max(best_val, math.sqrt(best_v2))

    log_res = (
        sc.log_mu + math.log(math.pi / n_psi) + math.log(m_mass)
        if m_mass > 0.0
        else -math.inf
    )
    return MaxModResult(
        log_M=sc.log_mu + math.log(best_val),
        psi_star=psi_star,
        n_lo=sc.head_start,
        trunc_n=sc.trunc_n,
        n_psi=n_psi,
        fft_size=fft_size,
        log_tail=sc.log_tail,
        log_head=sc.log_head,
        log_res_bound=log_res,
        aligned=False,
        candidates=tuple((sc.log_mu + math.log(v) if v > 0 else -math.inf, p)
                         for v, p in results),
    )
