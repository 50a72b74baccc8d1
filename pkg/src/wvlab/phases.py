"""Integer frequency sequences and exact angle reduction.

A rotation of the series multiplies coefficient n by exp(i * theta_n * t).
The frequencies theta_n are exact integers (they reach 2^n for geometric
gaps, far past float range) and t is carried as u = t/(2pi) in fixed point
with at least 128 fractional bits, so theta_n * t mod 2pi reduces without
cancellation: the product and fractional part stay in integer arithmetic
and only the final angle is rounded to a float.

Geometric sequences with an integer ratio are kept lazily as powers; a
ratio-2 sequence of thirty million terms is a perfectly usable object, and
its angles come from 64-bit windows of u's bit string rather than from
big-integer products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, NamedTuple

import numpy as np

from .errors import BadParamError, PhasesTooShortError, WvlabError

__all__ = [
    "PhaseSequence",
    "ExplicitPhaseSequence",
    "GeometricPowerPhaseSequence",
    "PhaseFraction",
    "gen_geometric",
    "gen_phi",
    "gamma_stat",
    "GammaStat",
    "phase_angle",
    "phase_angles",
    "sample_u",
    "suggest_bits",
    "write_phase_sequence",
    "read_phase_sequence",
]

_TWO_PI = 2.0 * math.pi
_GEN_CAP = 200_000          # explicit generation guard (values stored one by one)
_SERIALIZE_DIGIT_CAP = 50_000_000


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


class PhaseSequence:
    """Strictly increasing positive integers theta_0 < theta_1 < ...

    Concrete subclasses provide ``__len__`` and integer ``__getitem__``;
    values are immutable after construction.
    """

    label: str = "PHASES"

    def __len__(self) -> int:
        raise NotImplementedError

    def __getitem__(self, k: int) -> int:
        raise NotImplementedError

    def __iter__(self) -> Iterator[int]:
        for k in range(len(self)):
            yield self[k]

    def check(self, n_terms: int) -> None:
        if len(self) < n_terms:
            raise PhasesTooShortError(
                f"{self.label}: {len(self)} phases, {n_terms} needed",
                required_length=n_terms,
            )


class ExplicitPhaseSequence(PhaseSequence):
    def __init__(self, values: Iterable[int], label: str = "PHASES"):
        vals = tuple(int(v) for v in values)
        if not vals or vals[0] < 1:
            raise BadParamError("phase sequence must start at theta_0 >= 1")
        for a, b in zip(vals, vals[1:]):
            if b <= a:
                raise BadParamError(f"phases not strictly increasing at {a} >= {b}")
        self._values = vals
        self.label = label

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, k: int) -> int:
        return self._values[k]

    def __iter__(self) -> Iterator[int]:
        return iter(self._values)


class GeometricPowerPhaseSequence(PhaseSequence):
    """theta_k = q**k for an integer ratio q >= 2, stored lazily."""

    def __init__(self, q: int, length: int, label: str = "GEOMETRIC_PHASES"):
        if q < 2:
            raise BadParamError("integer ratio must be >= 2")
        if length < 1:
            raise BadParamError("length must be >= 1")
        self.q = int(q)
        self._length = int(length)
        self.label = label
        # power-of-two ratios admit direct bit addressing into u
        bl = self.q.bit_length()
        self.log2_q = bl - 1 if self.q == (1 << (bl - 1)) else None

    def __len__(self) -> int:
        return self._length

    def __getitem__(self, k: int) -> int:
        if not 0 <= k < self._length:
            raise IndexError(k)
        return self.q**k

    def __iter__(self) -> Iterator[int]:
        v = 1
        for _ in range(self._length):
            yield v
            v *= self.q

    def max_bit_length(self) -> int:
        if self.log2_q is not None:
            return (self._length - 1) * self.log2_q + 1
        return (self.q ** (self._length - 1)).bit_length()


def gen_geometric(q: float, n_max: int) -> PhaseSequence:
    """Frequencies with ratio at least q > 1: theta_0 = 1, then exact
    rational ceilings theta_{n+1} = ceil(q * theta_n), indices 0..n_max.

    Integer q yields the lazy power representation q**k, usable at tens of
    millions of terms; other ratios materialize the list (n_max capped).
    """
    if not q > 1:
        raise BadParamError(f"ratio q = {q!r} must exceed 1")
    if n_max < 0:
        raise BadParamError("n_max must be >= 0")
    qi = int(q)
    if qi == q and qi >= 2:
        return GeometricPowerPhaseSequence(qi, n_max + 1)
    if n_max > _GEN_CAP:
        raise BadParamError(f"non-integer ratio caps at n_max = {_GEN_CAP}")
    qf = Fraction(q)
    vals = [1]
    for _ in range(n_max):
        nxt = _ceil_fraction(qf * vals[-1])
        assert Fraction(nxt, vals[-1]) >= qf
        vals.append(nxt)
    return ExplicitPhaseSequence(vals, label=f"GEOMETRIC_q={q}")


def gen_phi(phi: Callable[[int], float], n_max: int) -> PhaseSequence:
    """Weak-gap frequencies theta_{n+1} = ceil(theta_n * (1 + 1/phi(n+1))).

    The gap function is evaluated at the index being generated, so
    phi(n) = n**0.25 and friends never see n = 0.  phi must be positive
    and nondecreasing where sampled.
    """
    if n_max < 0:
        raise BadParamError("n_max must be >= 0")
    if n_max > _GEN_CAP:
        raise BadParamError(f"gen_phi caps at n_max = {_GEN_CAP}")
    vals = [1]
    prev = None
    for n in range(1, n_max + 1):
        p = float(phi(n))
        if not p > 0.0:
            raise BadParamError(f"phi({n}) = {p!r} not positive")
        if prev is not None and p < prev:
            raise BadParamError(f"phi decreasing at n = {n}")
        prev = p
        ratio = 1 + 1 / Fraction(p)
        nxt = _ceil_fraction(vals[-1] * ratio)
        assert Fraction(nxt, vals[-1]) >= ratio
        vals.append(nxt)
    return ExplicitPhaseSequence(vals, label="PHI_GAP")


class GammaStat(NamedTuple):
    value: float   # max of the window statistic
    tail: float    # statistic at the last index, for convergence diagnostics


def gamma_stat(theta: PhaseSequence, n_min: int) -> GammaStat:
    """Empirical gap-growth order: max over n in [n_min, N-1] of
    ln(theta_n / (theta_{n+1} - theta_n)) / ln n, with theta_1 the first
    element.  Consecutive integers give exactly 1, powers of q give 0.
    """
    if n_min < 2:
        raise BadParamError("n_min must be >= 2")
    L = len(theta)
    if L < n_min + 2:
        raise BadParamError(f"need at least {n_min + 2} phases, have {L}")
    best = -math.inf
    tail = math.nan
    for n in range(n_min, L):
        a, b = theta[n - 1], theta[n]
        d = b - a
        if d == 0:
            raise BadParamError(f"zero gap at n = {n}")
        if a == d:
            tail = 0.0
        else:
            try:
                # big-int division rounds correctly when the quotient fits
                tail = math.log(a / d) / math.log(n)
            except (OverflowError, ValueError):
                # quotient over- or underflowed the float range
                tail = (math.log(a) - math.log(d)) / math.log(n)
        if tail > best:
            best = tail
    return GammaStat(value=best, tail=tail)


@dataclass(frozen=True)
class PhaseFraction:
    """u = num / 2**bits in [0, 1), the rotation parameter t/(2pi)."""

    num: int
    bits: int = 128

    def __post_init__(self):
        if self.bits < 128:
            raise BadParamError("fixed point resolution must be >= 128 bits")
        if not 0 <= self.num < (1 << self.bits):
            raise BadParamError("numerator outside [0, 2**bits)")

    @property
    def value(self) -> float:
        return self.num / (1 << self.bits)

    @property
    def u_hex(self) -> str:
        """Hex rendering for reports; very wide fractions keep the top
        256 digits and record the full width."""
        width = -(-self.bits // 4)
        if self.bits <= 1024:
            return f"{self.num:0{width}x}"
        top = self.num >> (self.bits - 1024)
        return f"{top:0256x}...{self.bits}b"

    def complement(self) -> "PhaseFraction":
        return PhaseFraction((-self.num) % (1 << self.bits), self.bits)

    @classmethod
    def zero(cls, bits: int = 128) -> "PhaseFraction":
        return cls(0, bits)

    @classmethod
    def half(cls, bits: int = 128) -> "PhaseFraction":
        return cls(1 << (bits - 1), bits)

    @classmethod
    def from_fraction(cls, fr: Fraction, bits: int = 128) -> "PhaseFraction":
        num = (fr.numerator << bits) // fr.denominator % (1 << bits)
        return cls(num, bits)


def phase_angle(theta_n: int, u: PhaseFraction) -> float:
    """2pi * frac(theta_n * u), reduced exactly in integer arithmetic.

    The one rounding step is the final conversion of the residue to a
    float; a residue that rounds up to 1 folds to 0 to keep the result in
    [0, 2pi).
    """
    if theta_n < 0:
        raise BadParamError("theta must be nonnegative")
    tb = theta_n.bit_length()
    if theta_n == (1 << tb) >> 1 and tb:
        prod = u.num << (tb - 1)      # power of two: shift, not multiply
    else:
        prod = theta_n * u.num
    res = prod & ((1 << u.bits) - 1)
    frac = res / (1 << u.bits)
    if frac >= 1.0:
        frac = 0.0
    return _TWO_PI * frac


def sample_u(rng, bits: int = 128) -> PhaseFraction:
    """Uniform dyadic fraction on [0, 1) at full bit resolution."""
    return PhaseFraction(rng.getrandbits(bits), bits)


def suggest_bits(theta: PhaseSequence, n_terms: int) -> int:
    """Fixed-point width leaving 128 significant fractional bits in
    frac(theta_n * u) for every frequency in use.

    Below this width the deepest frequencies see a degenerate (eventually
    zero) rotation angle.
    """
    theta.check(n_terms)
    if isinstance(theta, GeometricPowerPhaseSequence) and theta.log2_q is not None:
        top = (n_terms - 1) * theta.log2_q + 1
    else:
        top = theta[n_terms - 1].bit_length()
    return max(128, top + 128)


def _angles_pow2(seq: GeometricPowerPhaseSequence, u: PhaseFraction, lo: int, hi: int):
    """Angles for theta_k = 2**(j*k) read as 64-bit windows of u.

    frac(2**e * u) has the bits of u below position bits-e; its top 64
    bits are u's bits [bits-e-64, bits-e), extracted from a word view.
    """
    j = seq.log2_q
    e = j * np.arange(lo, hi, dtype=np.int64)
    p = u.bits - e - 64
    if p[-1] < 0:
        raise BadParamError("fixed point too narrow for the deepest frequency")
    n_words = -(-u.bits // 64) + 1
    words = np.frombuffer(
        u.num.to_bytes(n_words * 8, "little"), dtype="<u8"
    ).astype(np.uint64)
    qw = (p // 64).astype(np.int64)
    rb = (p % 64).astype(np.uint64)
    lowpart = words[qw] >> rb
    highpart = np.where(rb == 0, 0, words[qw + 1] << ((64 - rb) & np.uint64(63)))
    w = lowpart | highpart
    return w.astype(np.float64) * (_TWO_PI / 2.0**64)


def phase_angles(
    theta: PhaseSequence, u: PhaseFraction, lo: int, hi: int
) -> np.ndarray:
    """Vector of phase_angle(theta_k, u) for k in [lo, hi)."""
    theta.check(hi)
    if lo >= hi:
        return np.empty(0, dtype=np.float64)
    if isinstance(theta, GeometricPowerPhaseSequence):
        if theta.log2_q is not None and u.bits >= theta.log2_q * (hi - 1) + 64:
            return _angles_pow2(theta, u, lo, hi)
        # generic integer ratio: walk the residue theta_k * num mod 2**bits
        mask = (1 << u.bits) - 1
        res = (theta.q**lo * u.num) & mask
        shift = u.bits - 64
        out = np.empty(hi - lo, dtype=np.float64)
        for i in range(hi - lo):
            out[i] = (res >> shift) * (_TWO_PI / 2.0**64)
            res = (res * theta.q) & mask
        return out
    out = np.empty(hi - lo, dtype=np.float64)
    for i in range(hi - lo):
        out[i] = phase_angle(theta[lo + i], u)
    return out


def write_phase_sequence(theta: PhaseSequence, path) -> None:
    """One decimal integer per line."""
    est_digits = 0
    if isinstance(theta, GeometricPowerPhaseSequence):
        n = len(theta)
        est_digits = n * (n - 1) // 2 * math.log10(theta.q)
    if est_digits > _SERIALIZE_DIGIT_CAP:
        raise WvlabError(
            f"{theta.label}: ~{est_digits:.2g} digits; refusing to serialize"
        )
    with open(path, "w") as fh:
        for v in theta:
            fh.write(f"{v}\n")


def read_phase_sequence(path, label: str = "PHASES") -> ExplicitPhaseSequence:
    with open(path) as fh:
        vals = [int(line) for line in fh if line.strip()]
    return ExplicitPhaseSequence(vals, label=label)
