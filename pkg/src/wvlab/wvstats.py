"""Growth statistics on the radius axis: weight functions, the normalized
log-gap Delta_h, exceptional sets and their h-measure, the slowly-growing
radius ladder, and the closed-form comparison bounds.

Weight functions are evaluated through s = 1 - r so nothing cancels near
the boundary; the builtin LOG_MEASURE weight h(r) = 1/(1-r) turns
h-measure into logarithmic measure with the exact antiderivative -ln(1-r).

Delta_h compares ln M - ln mu against 2 ln h + ln ln(h mu): values stay
at or below 1/2 outside a finite-h-measure set, drop toward 1/4 for
almost every rotation under geometric frequency gaps, and toward
(1+3d)/(4+2d) or (1+2d)/(4+2d) under the weaker gap conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np
import scipy.integrate

from .errors import (
    BadParamError,
    DomainError,
    ExhaustedError,
    NumericError,
)
from .series import GrowthProfile, Radius

__all__ = [
    "WeightFunction",
    "log_measure",
    "power_weight",
    "ExceptionalSet",
    "h_measure",
    "delta_h",
    "exceptional_flag",
    "lemma2_sequence",
    "rhs_theorem1",
    "rhs_theorem2",
    "corollary_bounds",
    "CorollaryBounds",
    "corollary_validity",
    "abstract_exponent",
    "lemma4_A_log",
    "lemma4_B2_statement_log",
    "lemma4_B2_proof_log",
    "eq6_logG_bound",
]

_S_FLOOR = 1e-15


@dataclass(frozen=True)
class WeightFunction:
    """Positive continuous increasing weight h on (0,1).

    All callables take s = 1 - r.  ``H_s``, when present, is the
    antiderivative of h with respect to r expressed in s, used for
    closed-form h-measures.  ``in_class_H`` records whether the integral
    of h up to 1 diverges (certified analytically for builtins).
    """

    label: str
    eval_s: Callable[[float], float]
    log_eval_s: Callable[[float], float]
    H_s: Optional[Callable[[float], float]] = None
    in_class_H: bool = True

    def eval(self, r: Union[Radius, float]) -> float:
        return self.eval_s(r.s if isinstance(r, Radius) else 1.0 - r)

    def log_eval(self, r: Union[Radius, float]) -> float:
        return self.log_eval_s(r.s if isinstance(r, Radius) else 1.0 - r)

    def check_monotone(self, n_samples: int = 64) -> None:
        s = np.geomspace(1e-12, 0.999, n_samples)[::-1]
        vals = np.array([self.eval_s(si) for si in s])
        if np.any(vals <= 0.0) or np.any(np.diff(vals) < 0.0):
            raise BadParamError(f"{self.label}: not positive increasing on sample")


def log_measure() -> WeightFunction:
    """h(r) = 1/(1-r); its measure of (a,b) is ln((1-a)/(1-b))."""
    return WeightFunction(
        label="LOG_MEASURE",
        eval_s=lambda s: 1.0 / s,
        log_eval_s=lambda s: -math.log(s),
        H_s=lambda s: -math.log(s),
    )


def power_weight(p: float) -> WeightFunction:
    """h(r) = (1-r)^(-p) for p > 0, p != 1.

    For p < 1 the integral to 1 converges, so the weight fails the
    divergence requirement of class H; it is still usable for measuring.
    """
    if p <= 0.0 or p == 1.0:
        raise BadParamError("power weight needs p > 0, p != 1 (p = 1 is LOG_MEASURE)")
    return WeightFunction(
        label=f"POWER_{p}",
        eval_s=lambda s: s**-p,
        log_eval_s=lambda s: -p * math.log(s),
        H_s=lambda s: s ** (1.0 - p) / (p - 1.0),
        in_class_H=p > 1.0,
    )


def _merge(intervals: Iterable[tuple]) -> tuple:
    out = []
    for a, b in sorted((float(a), float(b)) for a, b in intervals):
        a = max(a, 0.0)
        b = min(b, 1.0 - _S_FLOOR)
        if b <= a:
            continue
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


@dataclass(frozen=True)
class ExceptionalSet:
    """Disjoint open intervals of (0,1) with their accumulated h-measure.

    ``h_mass`` is nan until a weight is supplied at construction.
    """

    intervals: tuple = ()
    h_mass: float = math.nan

    @classmethod
    def empty(cls) -> "ExceptionalSet":
        return cls(intervals=(), h_mass=0.0)

    @classmethod
    def from_intervals(
        cls, intervals: Iterable[tuple], h: Optional[WeightFunction] = None
    ) -> "ExceptionalSet":
        merged = _merge(intervals)
        mass = math.nan
        if h is not None:
            mass = h_measure(merged, h)
        return cls(intervals=merged, h_mass=mass)

    @classmethod
    def from_grid_flags(
        cls,
        flagged_j: Sequence[int],
        m: int,
        h: Optional[WeightFunction] = None,
    ) -> "ExceptionalSet":
        """Grid-cell resolution: flagged grid point r_j = 1 - 10^(-j/m)
        contributes the cell (1 - 10^(-(j-1/2)/m), 1 - 10^(-(j+1/2)/m)).
        Runs of adjacent j merge exactly by index before any float work.
        """
        if m < 1:
            raise BadParamError("grid density m must be >= 1")
        js = sorted(set(int(j) for j in flagged_j))
        if any(j < 1 for j in js):
            raise BadParamError("grid indices start at 1")
        runs = []
        for j in js:
            if runs and j == runs[-1][1] + 1:
                runs[-1][1] = j
            else:
                runs.append([j, j])
        ivals = [
            (1.0 - 10.0 ** (-(j0 - 0.5) / m), 1.0 - 10.0 ** (-(j1 + 0.5) / m))
            for j0, j1 in runs
        ]
        return cls.from_intervals(ivals, h)

    def contains(self, r: Union[Radius, float]) -> bool:
        x = r.r if isinstance(r, Radius) else float(r)
        return any(a < x < b for a, b in self.intervals)

    def covering_interval(self, r: float) -> Optional[tuple]:
        for a, b in self.intervals:
            if a < r < b:
                return (a, b)
        return None

    def with_mass(self, h: WeightFunction) -> "ExceptionalSet":
        return replace(self, h_mass=h_measure(self.intervals, h))


def _measure_one(a: float, b: float, h: WeightFunction) -> float:
    if h.H_s is not None:
        return h.H_s(1.0 - b) - h.H_s(1.0 - a)
    # substitute x = -ln(1-r): integrand h * dr/dx = h(s) * s, s = e^-x
    xa = -math.log1p(-a)
    xb = -math.log1p(-b)
    val, err = scipy.integrate.quad(
        lambda x: h.eval_s(math.exp(-x)) * math.exp(-x), xa, xb,
        epsrel=1e-8, limit=200,
    )
    if not math.isfinite(val) or err > max(1e-8 * abs(val), 1e-12):
        raise NumericError(f"h-measure quadrature on ({a}, {b}): err {err}")
    return val


def h_measure(
    obj: Union[ExceptionalSet, tuple, Iterable[tuple]], h: WeightFunction
) -> float:
    """h-measure: the integral of h over the set.

    Closed form through the antiderivative when the weight carries one,
    else adaptive quadrature at relative tolerance 1e-8.
    """
    if isinstance(obj, ExceptionalSet):
        ivals = obj.intervals
    elif isinstance(obj, tuple) and len(obj) == 2 and np.isscalar(obj[0]):
        ivals = (obj,)
    else:
        ivals = tuple(obj)
    ivals = _merge(ivals)
    return math.fsum(_measure_one(a, b, h) for a, b in ivals)


def _gap_terms(log_mu: float, radius: Radius, h: WeightFunction):
    lh = h.log_eval_s(radius.s)
    L = lh + log_mu
    if not L > 0.0:
        raise DomainError(
            f"ln(h mu) = {L!r} <= 0 at r = {radius.r!r}: radius too small "
            "for the normalized gap"
        )
    den = 2.0 * lh + math.log(L)
    if not den > 0.0:
        raise DomainError(f"nonpositive denominator {den!r} at r = {radius.r!r}")
    return lh, L, den


def delta_h(
    log_M: float, log_mu: float, radius: Radius, h: WeightFunction
) -> float:
    """(ln M - ln mu) / (2 ln h + ln ln(h mu)).

    Outside a finite-h-measure exceptional set the limsup of this
    statistic is at most 1/2; the denominator must be positive, which
    means the radius must be close enough to 1 for the weight in use.
    """
    _, _, den = _gap_terms(log_mu, radius, h)
    return (log_M - log_mu) / den


def exceptional_flag(
    profile: GrowthProfile, eta: float, h: WeightFunction
) -> bool:
    """True iff M > mu * (h^2 ln(h mu))^eta, i.e. Delta_h > eta."""
    if profile.log_M is None:
        raise BadParamError("profile carries no maximum modulus")
    return delta_h(profile.log_M, profile.log_mu, profile.radius, h) > eta


def _bisect_logk(
    logk_s: Callable[[float], float], target: float, s_hi: float, s_lo: float
) -> float:
    """Smallest s-side crossing: returns s with logk(s) >= target and
    |bracket| <= 1e-15 absolute in s (logk decreasing in s)."""
    a, b = s_lo, s_hi            # logk(a) >= target >= logk(b)
    while b - a > 1e-15 * max(1.0, b):
        mid = 0.5 * (a + b)
        if logk_s(mid) >= target:
            a = mid
        else:
            b = mid
    return a


def lemma2_sequence(
    k: Callable[[float], float],
    E: ExceptionalSet,
    n_max: int,
    *,
    s_min: float = _S_FLOOR,
    r_start: float = 1e-9,
) -> list:
    """Radii r_1 <= ... <= r_{n_max} outside E with ln k(r_n) >= n/2 and,
    whenever the gap (r_n, r_{n+1}) is not entirely exceptional,
    k(r_{n+1}) <= e k(r_n).

    For each level the candidate is the larger of (a) the first
    admissible point at or past the n/2 crossing of ln k and (b) the last
    admissible point not above the (n+1)/2 crossing; taking the max keeps
    consecutive ratios within e except across gaps swallowed by E.  All
    three properties are re-verified on the output.
    """
    if n_max < 1:
        raise BadParamError("n_max must be >= 1")

    def logk_s(s: float) -> float:
        v = k(1.0 - s)
        if not v > 0.0:
            raise BadParamError(f"k not positive at r = {1.0 - s!r}")
        return math.log(v)

    s_hi = 1.0 - r_start
    top = logk_s(s_min)

    def crossing(target: float) -> float:
        """r at which ln k first reaches target (clamped to the working range)."""
        if logk_s(s_hi) >= target:
            return 1.0 - s_hi
        if top < target:
            raise ExhaustedError(
                f"k never reaches e^{target:.3g} before r = 1 - {s_min:g}"
            )
        return 1.0 - _bisect_logk(logk_s, target, s_hi, s_min)

    out = []
    prev = 0.0
    for n in range(1, n_max + 1):
        c1 = crossing(n / 2.0)
        cover = E.covering_interval(c1)
        if cover is not None:
            c1 = cover[1]
            if c1 >= 1.0 - s_min:
                raise ExhaustedError(
                    f"exceptional set reaches the working boundary past r = {cover[0]!r}"
                )
        c2 = crossing((n + 1) / 2.0)
        cover = E.covering_interval(c2)
        if cover is not None:
            c2 = cover[0]
        prev = max(c1, c2, prev)
        out.append(Radius.from_r(prev))

    _verify_lemma2(out, logk_s, E)
    return out


def _verify_lemma2(radii, logk_s, E) -> None:
    for i, rad in enumerate(radii):
        n = i + 1
        if E.contains(rad):
            raise NumericError(f"r_{n} = {rad.r!r} landed inside the excluded set")
        if logk_s(rad.s) < n / 2.0:
            raise NumericError(f"ln k(r_{n}) below {n}/2")
    for i in range(len(radii) - 1):
        a, b = radii[i].r, radii[i + 1].r
        if b <= a:
            continue
        covered = any(
            ia <= a + 1e-12 and b - 1e-12 <= ib for ia, ib in E.intervals
        )
        if covered:
            continue
        if logk_s(radii[i + 1].s) > logk_s(radii[i].s) + 1.0 + 1e-9:
            raise NumericError(f"ratio k(r_{i + 2})/k(r_{i + 1}) above e")


def rhs_theorem1(profile: GrowthProfile, h: WeightFunction, delta: float) -> float:
    """ln of mu sqrt(h) ln^{1/4}(h mu) ln^{3/4+d}(h) (ln ln(h mu))^{1+d}.

    The comparison target for the almost-sure 1/4 regime under geometric
    frequency gaps.
    """
    if not delta > 0.0:
        raise BadParamError("delta must be positive")
    lh, L, _ = _gap_terms(profile.log_mu, profile.radius, h)
    if not (lh > 1.0 and L > 1.0):
        raise DomainError(f"need ln h > 1 and ln(h mu) > 1, have {lh!r}, {L!r}")
    return (
        profile.log_mu
        + 0.5 * lh
        + 0.25 * math.log(L)
        + (0.75 + delta) * math.log(lh)
        + (1.0 + delta) * math.log(math.log(L))
    )


def rhs_theorem2(
    profile: GrowthProfile,
    h: WeightFunction,
    v_alpha: float,
    phi_delta: float,
    eps: float,
) -> float:
    """ln of the weak-gap bound with power-law choices v(x) = x^a, a <= 1/4,
    and phi(x) = x^d:

        sqrt(h ln h) mu ln^{1/4}(h mu) [ln(ln h ln(h mu))]^{1+e}
          * [ v(8 h^2 L) + phi^{1/2}(h^{3/2} L^{5/4} (ln L)^{1+e} / v(h L)) ]

    with L = ln(h mu).
    """
    if v_alpha < 0.0 or v_alpha > 0.25:
        raise BadParamError("v exponent must lie in [0, 1/4]")
    if phi_delta < 0.0 or eps < 0.0:
        raise BadParamError("phi exponent and eps must be >= 0")
    lh, L, _ = _gap_terms(profile.log_mu, profile.radius, h)
    if not (lh > 1.0 and L > 1.0):
        raise DomainError(f"need ln h > 1 and ln(h mu) > 1, have {lh!r}, {L!r}")
    lnL = math.log(L)
    if not lh * L > 1.0:
        raise DomainError("ln h * ln(h mu) must exceed 1")
    v_term = v_alpha * (math.log(8.0) + 2.0 * lh + lnL)
    phi_term = 0.5 * phi_delta * (
        1.5 * lh + 1.25 * lnL + (1.0 + eps) * math.log(lnL)
        - v_alpha * (lh + lnL)
    )
    return (
        0.5 * (lh + math.log(lh))
        + profile.log_mu
        + 0.25 * lnL
        + (1.0 + eps) * math.log(math.log(lh * L))
        + float(np.logaddexp(v_term, phi_term))
    )


class CorollaryBounds(NamedTuple):
    c2_bound: float
    c3_bound: float
    c2_alpha: float
    c3_alpha: float


def corollary_bounds(delta: float) -> CorollaryBounds:
    """Limsup exponents under the weak gap condition with gap order delta:
    (1+3d)/(4+2d) in general, (1+2d)/(4+2d) when ln ln mu = o(ln h), with
    the power exponents 5d/(4(2+d)) and 3d/(4(2+d)) used in the proofs.

    Both bounds equal 1/4 at d = 0 and degrade to the deterministic 1/2
    at d = 1/2 and d = 1 respectively.
    """
    if delta < 0.0:
        raise BadParamError("delta must be >= 0")
    return CorollaryBounds(
        c2_bound=(1.0 + 3.0 * delta) / (4.0 + 2.0 * delta),
        c3_bound=(1.0 + 2.0 * delta) / (4.0 + 2.0 * delta),
        c2_alpha=5.0 * delta / (4.0 * (2.0 + delta)),
        c3_alpha=3.0 * delta / (4.0 * (2.0 + delta)),
    )


def corollary_validity(delta: float) -> tuple:
    """(general-form valid, small-mu-form valid): the improvements are
    genuine only below 1/2 resp. 1."""
    return (delta < 0.5, delta < 1.0)


def abstract_exponent(delta: float) -> float:
    """The alternative exponent (1+2d)/(4+3d) stated alongside the
    general bound; reported side by side, not arbitrated."""
    if delta < 0.0:
        raise BadParamError("delta must be >= 0")
    return (1.0 + 2.0 * delta) / (4.0 + 3.0 * delta)


def _audit_terms(lh: float, L: float) -> float:
    if not L > 1.0:
        raise DomainError(f"ln(h mu) = {L!r} must exceed 1")
    return math.log(L)


def lemma4_A_log(lh: float, L: float, eps: float) -> float:
    """ln of h * ln(h mu) * (ln ln(h mu))^(1+eps): the A(r) ceiling."""
    lnL = _audit_terms(lh, L)
    return lh + lnL + (1.0 + eps) * math.log(lnL)


def lemma4_B2_statement_log(lh: float, L: float, eps: float) -> float:
    """ln of h^(2+eps) * ln(h mu) * (ln ln(h mu))^(2+eps)."""
    lnL = _audit_terms(lh, L)
    return (2.0 + eps) * lh + lnL + (2.0 + eps) * math.log(lnL)


def lemma4_B2_proof_log(lh: float, L: float, eps: float) -> float:
    """ln of h^(2+eps) * ln^(1+eps)(h mu): the form the proof closes with."""
    lnL = _audit_terms(lh, L)
    return (2.0 + eps) * lh + (1.0 + eps) * lnL


def eq6_logG_bound(log_mu: float, lh: float, L: float, delta: float) -> float:
    """ln of mu h ln^{1/2}(h mu) ln^{1/2+d}(h) (ln ln(h mu))^{1+d}: the
    deterministic ceiling on G (hence on M)."""
    if not (lh > 0.0 and L > 1.0):
        raise DomainError(f"need ln h > 0 and ln(h mu) > 1, have {lh!r}, {L!r}")
    lnL = math.log(L)
    return (
        log_mu + lh + 0.5 * lnL + (0.5 + delta) * math.log(lh)
        + (1.0 + delta) * math.log(lnL)
    )
