"""Power-series growth primitives on the unit disk.

A series is described by the log-magnitudes of its Taylor coefficients,
``n -> ln|a_n|`` (``-inf`` for a vanishing coefficient).  Radii close to 1 are
kept as ``s = 1 - r`` so that ``ln r = log1p(-s)`` stays accurate at
``s = 1e-15``.  Everything downstream works on the term logs

    t_n = ln|a_n| + n ln r

and never exponentiates without first subtracting the running maximum.

The scan over ``n`` is shared: one pass locates the maximal term and the
truncation index, after which partial sums (G, S, weighted index moments) are
accumulated over ``n <= trunc_n`` with a compensated kernel, and the dropped
tail carries a certified geometric-ratio bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .accel import kahan_exp_moments, kahan_exp_sum
from .errors import BadParamError, NonAnalyticError, NumericError

__all__ = [
    "Radius",
    "CoefficientSequence",
    "GrowthProfile",
    "geometric",
    "sqrt_exp",
    "power_exp",
    "table",
    "max_term",
    "truncation_index",
    "log_G",
    "log_S",
    "moments_AB",
    "growth_profile",
    "analytic_check",
    "DEFAULT_MARGIN_NATS",
    "DEFAULT_N_CAP",
]

DEFAULT_MARGIN_NATS = 46.0
DEFAULT_N_CAP = 10**7

_BLOCK = 1 << 20


@dataclass(frozen=True, slots=True)
class Radius:
    """A radius in (0, 1), stored as its distance to the boundary.

    Parameters
    ----------
    s : float
        ``1 - r``, must lie in (0, 1).
    """

    s: float

    def __post_init__(self):
        if not (0.0 < self.s < 1.0):
            raise BadParamError(f"s = {self.s!r} outside (0, 1)")

    @property
    def r(self) -> float:
        return 1.0 - self.s

    @property
    def log_r(self) -> float:
        return math.log1p(-self.s)

    @classmethod
    def from_r(cls, r: float) -> "Radius":
        return cls(1.0 - r)

    @classmethod
    def from_log_r(cls, log_r: float) -> "Radius":
        if log_r >= 0.0:
            raise BadParamError("log r must be negative")
        return cls(-math.expm1(log_r))

    @classmethod
    def from_decade(cls, j: int, m: int) -> "Radius":
        """Grid point r = 1 - 10^(-j/m)."""
        return cls(10.0 ** (-j / m))


@dataclass(eq=False)
class CoefficientSequence:
    """Coefficient log-magnitudes ``n -> ln|a_n|`` plus optional arguments.

    ``log_abs_fn`` receives a float64 index array and must return the log
    magnitudes vectorized; ``length`` marks finite tables (``-inf`` beyond).
    ``arg_fn`` supplies per-term arguments in radians (None means all zero).
    Instances hash by identity so scan results can be memoized.
    """

    label: str
    log_abs_fn: Callable[[np.ndarray], np.ndarray]
    arg_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    length: Optional[int] = None
    params: dict = field(default_factory=dict)

    def log_abs(self, n: np.ndarray) -> np.ndarray:
        n = np.asarray(n, dtype=np.float64)
        out = np.asarray(self.log_abs_fn(n), dtype=np.float64)
        if self.length is not None:
            out = np.where(n < self.length, out, -np.inf)
        return out

    def arg(self, n: np.ndarray) -> np.ndarray:
        n = np.asarray(n, dtype=np.float64)
        if self.arg_fn is None:
            return np.zeros_like(n)
        return np.asarray(self.arg_fn(n), dtype=np.float64)

    @property
    def nonnegative(self) -> bool:
        return self.arg_fn is None

    def term_logs(self, radius: Radius, lo: int, hi: int) -> np.ndarray:
        """t_n = ln|a_n| + n ln r for n in [lo, hi)."""
        n = np.arange(lo, hi, dtype=np.float64)
        return self.log_abs(n) + n * radius.log_r

    def __repr__(self) -> str:  # params keep builtin reprs reproducible
        return f"CoefficientSequence({self.label!r}, params={self.params!r})"


def geometric() -> CoefficientSequence:
    """All coefficients equal to 1 (the Cauchy kernel 1/(1-z))."""
    return CoefficientSequence("GEOMETRIC", lambda n: np.zeros_like(n))


def sqrt_exp() -> CoefficientSequence:
    """ln|a_n| = sqrt(n)."""
    return CoefficientSequence("SQRT_EXP", np.sqrt)


def power_exp(eps: float) -> CoefficientSequence:
    """ln|a_n| = n**eps for eps in (0, 1)."""
    if not (0.0 < eps < 1.0):
        raise BadParamError(f"eps = {eps!r} outside (0, 1)")
    return CoefficientSequence(
        "POWER_EXP", lambda n, e=eps: np.power(n, e), params={"eps": eps}
    )


def table(
    coeffs: Sequence[float], args: Optional[Sequence[float]] = None
) -> CoefficientSequence:
    """Finite coefficient table; entries are magnitudes |a_n| (0 allowed).

    ``args`` optionally carries per-term arguments in radians, defaulting
    to 0, and must match ``coeffs`` in length.
    """
    mags = np.asarray(coeffs, dtype=np.float64)
    if mags.ndim != 1 or mags.size == 0:
        raise BadParamError("coefficient table must be a nonempty 1-d list")
    if np.any(mags < 0.0) or not np.all(np.isfinite(mags)):
        raise BadParamError("table entries are magnitudes: finite and >= 0")
    with np.errstate(divide="ignore"):
        logs = np.log(mags)
    arg_fn = None
    if args is not None:
        av = np.asarray(args, dtype=np.float64)
        if av.shape != mags.shape:
            raise BadParamError("args must match coeffs in length")
        if not np.all(np.isfinite(av)):
            raise BadParamError("args must be finite")

        def arg_fn(n, av=av):
            idx = np.clip(n.astype(np.int64), 0, av.size - 1)
            return np.where(n < av.size, av[idx], 0.0)

    def log_fn(n, logs=logs):
        idx = np.clip(n.astype(np.int64), 0, logs.size - 1)
        return np.where(n < logs.size, logs[idx], -np.inf)

    return CoefficientSequence(
        "TABLE", log_fn, arg_fn=arg_fn, length=int(mags.size),
        params={"len": int(mags.size)},
    )


class ScanResult(NamedTuple):
    log_mu: float
    nu: int
    trunc_n: int
    log_tail: float   # ln of a certified bound on sum_{n > trunc} |a_n| r^n
    head_start: int   # first index kept by the tight window used in maxmod
    log_head: float   # ln bound on the mass below head_start


def _scan_blocks(n_cap: int):
    lo, size = 0, 4096
    while lo < n_cap:
        hi = min(lo + size, n_cap)
        yield lo, hi
        lo, size = hi, min(2 * size, _BLOCK)


@lru_cache(maxsize=512)
def _scan(seq: CoefficientSequence, radius: Radius, margin: float, n_cap: int) -> ScanResult:
    if seq.length is not None:
        t = seq.term_logs(radius, 0, seq.length)
        if not np.any(np.isfinite(t)):
            raise BadParamError("table has no nonzero coefficient")
        nu = int(np.argmax(t))
        log_mu = float(t[nu])
        trunc = int(np.max(np.nonzero(np.isfinite(t))[0]))
        head_start, log_head = _head_cut(t, log_mu, margin, trunc)
        return ScanResult(log_mu, nu, trunc, -math.inf, head_start, log_head)

    log_mu, nu = -math.inf, 0
    horizon = None
    for lo, hi in _scan_blocks(n_cap):
        t = seq.term_logs(radius, lo, hi)
        bi = int(np.argmax(t))
        if t[bi] > log_mu:
            log_mu, nu = float(t[bi]), lo + bi
        if nu < lo and t[bi] < log_mu - margin:
            step_down = (t[-1] < t[-2]) if np.isfinite(t[-1]) else True
            if step_down:
                horizon = hi
                break
    if horizon is None:
        raise NonAnalyticError(
            f"{seq.label}: terms not decayed below the margin by n = {n_cap} "
            f"at r = {radius.r!r}; raise n_cap or check analyticity",
            n_cap=n_cap,
        )

    # Last index at or above log_mu - margin; the truncation index is the
    # sample right after it, which is the first point inside the certified
    # decay regime.
    thr = log_mu - margin
    last_big = nu
    lo = nu
    while lo < horizon:
        hi = min(lo + _BLOCK, horizon)
        t = seq.term_logs(radius, lo, hi)
        big = np.nonzero(t >= thr)[0]
        if big.size:
            last_big = max(last_big, lo + int(big[-1]))
        lo = hi
    trunc = last_big + 1
    t2 = seq.term_logs(radius, trunc, trunc + 2)
    while not (t2[0] < thr and t2[1] < t2[0]):
        trunc += 1          # pathological plateau; walk forward
        if trunc >= n_cap:
            raise NonAnalyticError(
                f"{seq.label}: no certified decay step below n = {n_cap}",
                n_cap=n_cap,
            )
        t2 = seq.term_logs(radius, trunc, trunc + 2)

    step = float(t2[1] - t2[0])
    log_tail = float(t2[1]) - math.log1p(-math.exp(step)) if step < 0 else math.inf

    head_start, log_head = _head_scan(seq, radius, log_mu, margin, trunc)
    return ScanResult(log_mu, nu, trunc, log_tail, head_start, log_head)


def _head_margin(margin: float, trunc: int) -> float:
    # Deep enough that even trunc+1 dropped head terms stay far below the
    # tail certificate.
    return margin + math.log(trunc + 1.0) + 5.0


def _head_cut(t: np.ndarray, log_mu: float, margin: float, trunc: int):
    thr = log_mu - _head_margin(margin, trunc)
    above = np.nonzero(t[: trunc + 1] >= thr)[0]
    head_start = int(above[0]) if above.size else 0
    if head_start == 0:
        return 0, -math.inf
    return head_start, float(thr + math.log(head_start))


def _head_scan(seq, radius, log_mu, margin, trunc):
    thr = log_mu - _head_margin(margin, trunc)
    lo = 0
    while lo <= trunc:
        hi = min(lo + _BLOCK, trunc + 1)
        t = seq.term_logs(radius, lo, hi)
        above = np.nonzero(t >= thr)[0]
        if above.size:
            head_start = lo + int(above[0])
            if head_start == 0:
                return 0, -math.inf
            return head_start, float(thr + math.log(head_start))
        lo = hi
    return 0, -math.inf


def max_term(
    seq: CoefficientSequence,
    radius: Radius,
    *,
    margin_nats: float = DEFAULT_MARGIN_NATS,
    n_cap: int = DEFAULT_N_CAP,
) -> tuple[float, int]:
    """Maximal term and central index.

    Returns
    -------
    (log_mu, nu)
        ``log_mu = max_n ln(|a_n| r^n)`` and the smallest n attaining it.
        The argmax is exact over all n up to the truncation index; beyond
        it every term is certified below ``log_mu - margin_nats``.
    """
    sc = _scan(seq, radius, margin_nats, n_cap)
    return sc.log_mu, sc.nu


def truncation_index(
    seq: CoefficientSequence,
    radius: Radius,
    *,
    margin_nats: float = DEFAULT_MARGIN_NATS,
    n_cap: int = DEFAULT_N_CAP,
) -> int:
    """Smallest index after which all sampled terms sit below the maximal
    term by the margin and the per-step term ratio has dropped under 1.

    Finite tables return their last nonzero index regardless of the margin.
    Raises ``NonAnalyticError`` when no such index exists below ``n_cap``.
    """
    return _scan(seq, radius, margin_nats, n_cap).trunc_n


def _sum_shifted(seq, radius, shift: float, scale: float, trunc: int) -> float:
    """Compensated sum of exp(scale * t_n - shift) over n <= trunc."""
    parts = []
    lo = 0
    while lo <= trunc:
        hi = min(lo + _BLOCK, trunc + 1)
        t = scale * seq.term_logs(radius, lo, hi) - shift
        parts.append(kahan_exp_sum(t[np.isfinite(t)]))
        lo = hi
    return math.fsum(parts)


def log_G(
    seq: CoefficientSequence,
    radius: Radius,
    *,
    margin_nats: float = DEFAULT_MARGIN_NATS,
    n_cap: int = DEFAULT_N_CAP,
) -> float:
    """ln of G(r) = sum_n |a_n| r^n, accumulated over n <= trunc_n.

    The dropped tail is certified below exp(log_tail) from the scan's
    geometric-ratio estimate, itself below exp(log_mu - margin).
    """
    sc = _scan(seq, radius, margin_nats, n_cap)
    return sc.log_mu + math.log(_sum_shifted(seq, radius, sc.log_mu, 1.0, sc.trunc_n))


def log_S(
    seq: CoefficientSequence,
    radius: Radius,
    *,
    margin_nats: float = DEFAULT_MARGIN_NATS,
    n_cap: int = DEFAULT_N_CAP,
) -> float:
    """ln of S(r) = (sum_n |a_n|^2 r^(2n))^(1/2)."""
    sc = _scan(seq, radius, margin_nats, n_cap)
    return sc.log_mu + 0.5 * math.log(
        _sum_shifted(seq, radius, 2.0 * sc.log_mu, 2.0, sc.trunc_n)
    )


def moments_AB(
    seq: CoefficientSequence,
    radius: Radius,
    *,
    margin_nats: float = DEFAULT_MARGIN_NATS,
    n_cap: int = DEFAULT_N_CAP,
) -> tuple[float, float]:
    """First moment A and variance B^2 of the index under the weights
    w_n = |a_n| r^n / G(r).

    A equals d(ln G)/d(ln r); B^2 is its second logarithmic derivative.
    A tiny negative B^2 (within 1e-12 of 0) from rounding is clamped to 0;
    anything more negative raises ``NumericError``.
    """
    sc = _scan(seq, radius, margin_nats, n_cap)
    s0 = s1 = s2 = 0.0
    parts0, parts1, parts2 = [], [], []
    lo = 0
    while lo <= sc.trunc_n:
        hi = min(lo + _BLOCK, sc.trunc_n + 1)
        t = seq.term_logs(radius, lo, hi) - sc.log_mu
        keep = np.isfinite(t)
        if not np.all(keep):
            # compact so the kernel's n0 + i indexing stays aligned
            idx = np.nonzero(keep)[0]
            for j in idx:
                w = math.exp(t[j])
                n = float(lo + j)
                parts0.append(w)
                parts1.append(n * w)
                parts2.append(n * n * w)
        else:
            b0, b1, b2 = kahan_exp_moments(t, float(lo))
            parts0.append(b0)
            parts1.append(b1)
            parts2.append(b2)
        lo = hi
    s0, s1, s2 = math.fsum(parts0), math.fsum(parts1), math.fsum(parts2)
    A = s1 / s0
    B2 = s2 / s0 - A * A
    if B2 < 0.0:
        if B2 > -1e-12:
            B2 = 0.0
        else:
            raise NumericError(f"B^2 = {B2!r} below the rounding clamp")
    return A, B2


@dataclass
class GrowthProfile:
    """All per-radius growth statistics of one series.

    ``log_M`` and ``delta_h`` stay None until a maximum-modulus evaluation
    (or the aligned t=0 shortcut) fills them in.
    """

    radius: Radius
    log_mu: float
    nu: int
    log_G: float
    log_S: float
    A: float
    B2: float
    trunc_n: int
    log_tail: float
    log_M: Optional[float] = None
    delta_h: Optional[float] = None

    @property
    def r(self) -> float:
        return self.radius.r

    @property
    def s(self) -> float:
        return self.radius.s


def growth_profile(
    seq: CoefficientSequence,
    radius: Radius,
    *,
    margin_nats: float = DEFAULT_MARGIN_NATS,
    n_cap: int = DEFAULT_N_CAP,
) -> GrowthProfile:
    """Scan once and assemble log_mu, nu, log_G, log_S, A, B^2, trunc_n."""
    sc = _scan(seq, radius, margin_nats, n_cap)
    a, b2 = moments_AB(seq, radius, margin_nats=margin_nats, n_cap=n_cap)
    return GrowthProfile(
        radius=radius,
        log_mu=sc.log_mu,
        nu=sc.nu,
        log_G=log_G(seq, radius, margin_nats=margin_nats, n_cap=n_cap),
        log_S=log_S(seq, radius, margin_nats=margin_nats, n_cap=n_cap),
        A=a,
        B2=b2,
        trunc_n=sc.trunc_n,
        log_tail=sc.log_tail,
    )


def analytic_check(
    seq: CoefficientSequence, radius: Radius, n_cap: int = DEFAULT_N_CAP, samples: int = 64
) -> bool:
    """Cheap sampled test that t_n decays toward -inf before n_cap."""
    if seq.length is not None:
        return True
    n = np.unique(np.geomspace(1, n_cap, samples).astype(np.int64))
    t = seq.log_abs(n.astype(np.float64)) + n * radius.log_r
    m = np.maximum.accumulate(t)
    tail = t[-max(4, samples // 8):]
    return bool(t[-1] < m[-1] - 1.0 and np.all(np.diff(tail) < 0.0))
