"""Experiment drivers: radius sweeps, Monte Carlo rotation ensembles,
bound audits, and the cosine-sum alignment search, with CSV/JSON output.

Every run is a pure function of (config, seed): rows are emitted in
(trial, radius) order, aggregation folds in that order, and JSON is
serialized with sorted keys, so re-runs are byte-identical.  Wall-clock
timings, which cannot be deterministic, go to a separate timing file.

Radius grids are geometric in s = 1 - r (r_j = 1 - 10^(-j/m)), matching
the ln(1/s) scale on which all the growth statistics live.
"""

from __future__ import annotations

import json
import math
import os
import random
import statistics
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import series as _series
from .errors import BadParamError, DomainError, WvlabError
from .maxmod import max_modulus
from .phases import (
    ExplicitPhaseSequence,
    PhaseFraction,
    PhaseSequence,
    gen_geometric,
    gen_phi,
    sample_u,
    suggest_bits,
)
from .series import CoefficientSequence, GrowthProfile, Radius, growth_profile
from .wvstats import (
    ExceptionalSet,
    WeightFunction,
    abstract_exponent,
    corollary_bounds,
    corollary_validity,
    delta_h,
    eq6_logG_bound,
    lemma4_A_log,
    lemma4_B2_proof_log,
    lemma4_B2_statement_log,
    log_measure,
    power_weight,
)

__all__ = [
    "ExperimentConfig",
    "run_profile",
    "run_sharpness",
    "run_ensemble",
    "run_bound_audit",
    "run_baire_example",
    "run_kahane_search",
    "KahaneResult",
]

_CSV_BASE = ["r", "s", "log_mu", "nu", "log_G", "log_S", "A", "B2", "log_M", "delta_h"]


# ---------------------------------------------------------------- config


@dataclass
class ExperimentConfig:
    """Everything a run needs; built from a plain dict (YAML-friendly).

    The raw dict is kept and echoed verbatim into every JSON summary.
    """

    sequence: dict = field(default_factory=lambda: {"label": "SQRT_EXP"})
    phases: dict = field(default_factory=lambda: {"kind": "geometric", "q": 2})
    weight: dict = field(default_factory=lambda: {"label": "LOG_MEASURE"})
    grid: dict = field(default_factory=lambda: {"m": 8, "k_max": 3})
    trials: int = 1
    seed: int = 0
    eta: list = field(default_factory=lambda: [0.25, 0.5])
    delta: float = 0.25
    n_cap: int = 10**8
    margin_nats: float = _series.DEFAULT_MARGIN_NATS
    out: Optional[str] = None
    thresholds: dict = field(
        default_factory=lambda: {
            "median_ceiling": 0.45,
            "tail_ceiling": 0.55,
            "exc_budget": 1.0,
        }
    )
    fft: dict = field(default_factory=lambda: {"chunk": 1 << 24, "workers": 1})
    audit: dict = field(default_factory=lambda: {"eps": 0.5})
    kahane: dict = field(default_factory=dict)
    u_override: Optional[str] = None
    raw: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise BadParamError("trials must be >= 1")
        if int(self.grid.get("m", 8)) < 1 or int(self.grid.get("k_max", 1)) < 1:
            raise BadParamError("grid needs m >= 1 and k_max >= 1")
        if not self.raw:
            self.raw = self.to_dict()

    def to_dict(self) -> dict:
        return {
            "sequence": self.sequence,
            "phases": self.phases,
            "weight": self.weight,
            "grid": self.grid,
            "trials": self.trials,
            "seed": self.seed,
            "eta": self.eta,
            "delta": self.delta,
            "n_cap": self.n_cap,
            "margin_nats": self.margin_nats,
            "out": self.out,
            "thresholds": self.thresholds,
            "fft": self.fft,
            "audit": self.audit,
            "kahane": self.kahane,
            "u_override": self.u_override,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {
            k: d[k]
            for k in (
                "sequence", "phases", "weight", "grid", "trials", "seed",
                "eta", "delta", "n_cap", "margin_nats", "out", "thresholds",
                "fft", "audit", "kahane", "u_override",
            )
            if k in d
        }
        cfg = cls(**known)
        cfg.raw = d
        return cfg

    @classmethod
    def from_yaml(cls, path: str) -> "ExperimentConfig":
        import yaml

        with open(path) as fh:
            return cls.from_dict(yaml.safe_load(fh) or {})


def build_sequence(cfg: ExperimentConfig) -> CoefficientSequence:
    block = cfg.sequence
    label = block.get("label", "SQRT_EXP").upper()
    if label == "GEOMETRIC":
        return _series.geometric()
    if label == "SQRT_EXP":
        return _series.sqrt_exp()
    if label == "POWER_EXP":
        return _series.power_exp(float(block.get("eps", 0.5)))
    if label == "TABLE":
        return _series.table(block["coeffs"], block.get("args"))
    raise BadParamError(f"unknown sequence label {label!r}")


def build_weight(cfg: ExperimentConfig) -> WeightFunction:
    block = cfg.weight
    label = block.get("label", "LOG_MEASURE").upper()
    if label == "LOG_MEASURE":
        return log_measure()
    if label == "POWER":
        return power_weight(float(block["p"]))
    raise BadParamError(f"unknown weight label {label!r}")


def build_phases(cfg: ExperimentConfig, n_terms: int) -> PhaseSequence:
    block = cfg.phases
    kind = block.get("kind", "geometric")
    if kind == "geometric":
        return gen_geometric(float(block.get("q", 2)), n_terms - 1)
    if kind == "phi_power":
        d = float(block.get("delta", cfg.delta))
        if not 0.0 < d:
            raise BadParamError("phi_power needs a positive exponent")
        return gen_phi(lambda n: float(n) ** d, n_terms - 1)
    if kind == "explicit":
        return ExplicitPhaseSequence([int(v) for v in block["values"]])
    raise BadParamError(f"unknown phases kind {kind!r}")


def radius_grid(cfg: ExperimentConfig) -> list:
    g = cfg.grid
    if "explicit_s" in g:
        return [Radius(float(s)) for s in g["explicit_s"]]
    m, k_max = int(g.get("m", 8)), int(g.get("k_max", 3))
    return [Radius.from_decade(j, m) for j in range(1, m * k_max + 1)]


# ---------------------------------------------------------------- output


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _write_csv(path: str, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path: str, obj: dict) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


class _OutDir:
    def __init__(self, cfg: ExperimentConfig, name: str):
        self.dir = cfg.out
        self.name = name
        self.t0 = time.perf_counter()
        if self.dir:
            os.makedirs(self.dir, exist_ok=True)

    def path(self, fname: str) -> Optional[str]:
        return os.path.join(self.dir, fname) if self.dir else None

    def csv(self, fname: str, header, rows) -> None:
        p = self.path(fname)
        if p:
            _write_csv(p, header, rows)

    def json(self, fname: str, obj: dict) -> None:
        p = self.path(fname)
        if p:
            _write_json(p, obj)

    def done(self) -> None:
        # wall time is inherently unstable; keep it out of the summaries
        p = self.path(f"timing_{self.name}.json")
        if p:
            _write_json(p, {self.name + "_seconds": time.perf_counter() - self.t0})


def _profile_with_M(
    seq: CoefficientSequence,
    theta: PhaseSequence,
    u: PhaseFraction,
    rad: Radius,
    cfg: ExperimentConfig,
) -> tuple:
    prof = growth_profile(
        seq, rad, margin_nats=cfg.margin_nats, n_cap=cfg.n_cap
    )
    res = max_modulus(
        seq, theta, u, rad,
        margin_nats=cfg.margin_nats, n_cap=cfg.n_cap,
        fft_chunk=int(cfg.fft.get("chunk", 1 << 24)),
        workers=int(cfg.fft.get("workers", 1)),
    )
    prof.log_M = res.log_M
    return prof, res


def _maybe_delta(prof: GrowthProfile, h: WeightFunction) -> Optional[float]:
    try:
        return delta_h(prof.log_M, prof.log_mu, prof.radius, h)
    except DomainError:
        return None


def _base_row(prof: GrowthProfile) -> list:
    return [
        prof.r, prof.s, prof.log_mu, prof.nu, prof.log_G, prof.log_S,
        prof.A, prof.B2, prof.log_M, prof.delta_h,
    ]


# ---------------------------------------------------------------- runners


def run_profile(cfg: ExperimentConfig) -> dict:
    """Deterministic (t = 0) radius sweep of every growth statistic."""
    out = _OutDir(cfg, "profile")
    seq = build_sequence(cfg)
    h = build_weight(cfg)
    radii = radius_grid(cfg)
    u0 = PhaseFraction.zero()

    rows, deltas, errors = [], [], []
    for rad in radii:
        try:
            trunc = _series.truncation_index(
                seq, rad, margin_nats=cfg.margin_nats, n_cap=cfg.n_cap
            )
            theta = gen_geometric(2, trunc)
            prof, _ = _profile_with_M(seq, theta, u0, rad, cfg)
        except WvlabError as exc:
            head = exc.args[0] if exc.args else str(exc)
            exc.args = (f"at r = {rad.r!r}: {head}",) + exc.args[1:]
            raise
        prof.delta_h = _maybe_delta(prof, h)
        deltas.append(prof.delta_h)
        rows.append(_base_row(prof))

    out.csv("profile.csv", _CSV_BASE, rows)
    out.csv(
        "plotdata_profile.csv",
        ["x_ln_inv_s", "delta_h"],
        [(math.log(1.0 / rad.s), d) for rad, d in zip(radii, deltas) if d is not None],
    )
    summary = {
        "config": cfg.raw,
        "seed": cfg.seed,
        "rows": len(rows),
        "delta_h": deltas,
        "radii_s": [rad.s for rad in radii],
        "rotation": "t=0",
        "errors": errors,
    }
    out.json("profile.json", summary)
    out.done()
    return summary


def _running_min_report(xs, ratios, m: int) -> dict:
    """Running minimum of a positive ratio along the grid plus its
    relative drift over the final decade of s."""
    runmin, cur = [], math.inf
    for v in ratios:
        cur = min(cur, v)
        runmin.append(cur)
    n_dec = min(m, len(ratios))
    first, last = runmin[-n_dec], runmin[-1]
    drift = abs(last - first) / last if last > 0 else math.inf
    return {
        "ratio_min": min(ratios),
        "ratio_max": max(ratios),
        "running_min": runmin,
        "final_running_min": last,
        "final_decade_rel_drift": drift,
    }


def run_sharpness(cfg: ExperimentConfig) -> dict:
    """Ratio M / (h mu ln^{1/2}(h mu)) along the grid at t = 0.

    A positive, stabilizing running minimum witnesses that the 1/2
    exponent in the deterministic bound cannot be lowered; the square
    root coefficient sequence is the witness family.
    """
    out = _OutDir(cfg, "sharpness")
    seq = build_sequence(cfg)
    if seq.arg_fn is not None:
        raise BadParamError("sharpness ratio needs nonnegative coefficients")
    h = build_weight(cfg)
    radii = radius_grid(cfg)

    xs, ratios, skipped = [], [], []
    for rad in radii:
        prof = growth_profile(seq, rad, margin_nats=cfg.margin_nats, n_cap=cfg.n_cap)
        log_M = prof.log_G          # nonnegative coefficients at t = 0
        lh = h.log_eval_s(rad.s)
        L = lh + prof.log_mu
        if not L > 0.0:
            skipped.append(rad.s)
            continue
        log_ratio = log_M - lh - prof.log_mu - 0.5 * math.log(L)
        xs.append(math.log(1.0 / rad.s))
        ratios.append(math.exp(log_ratio))
    if not ratios:
        raise DomainError("no radius reached the valid range of the ratio")

    rep = _running_min_report(xs, ratios, int(cfg.grid.get("m", 8)))
    out.csv("plotdata_sharpness.csv", ["x_ln_inv_s", "ratio"], zip(xs, ratios))
    summary = {
        "config": cfg.raw,
        "seed": cfg.seed,
        "ratio": "M / (h mu ln^{1/2}(h mu))",
        "rotation": "t=0",
        "skipped_s": skipped,
        **rep,
    }
    out.json("sharpness.json", summary)
    out.done()
    return summary


def run_baire_example(cfg: ExperimentConfig) -> dict:
    """Lower-bound ratio M (1-r) / (mu ln^{1/2}(mu/(1-r))) for the
    stretched-exponential coefficient family, t = 0 only.

    Its running minimum estimates the constant in the two-sided sandwich
    mu/(1-r) ~ M up to the half-power log factor; the running maximum
    witnesses the upper side.
    """
    out = _OutDir(cfg, "baire")
    seq = build_sequence(cfg)
    if seq.label != "POWER_EXP":
        raise BadParamError("this check is for the POWER_EXP family")
    radii = radius_grid(cfg)

    xs, ratios = [], []
    for rad in radii:
        prof = growth_profile(seq, rad, margin_nats=cfg.margin_nats, n_cap=cfg.n_cap)
        log_M = prof.log_G
        inner = prof.log_mu + math.log(1.0 / rad.s)
        log_ratio = log_M + math.log(rad.s) - prof.log_mu - 0.5 * math.log(inner)
        xs.append(math.log(1.0 / rad.s))
        ratios.append(math.exp(log_ratio))

    rep = _running_min_report(xs, ratios, int(cfg.grid.get("m", 8)))
    runmax, cur = [], 0.0
    for v in ratios:
        cur = max(cur, v)
        runmax.append(cur)
    out.csv("plotdata_baire.csv", ["x_ln_inv_s", "ratio"], zip(xs, ratios))
    summary = {
        "config": cfg.raw,
        "seed": cfg.seed,
        "ratio": "M (1-r) / (mu ln^{1/2}(mu/(1-r)))",
        "rotation": "t=0 (generic-rotation search out of scope)",
        "C0_estimate": rep["final_running_min"],
        "running_max": runmax,
        "upper_side_bounded": runmax[-1],
        **rep,
    }
    out.json("baire.json", summary)
    out.done()
    return summary


def _percentile_sorted(vals: list, frac: float) -> float:
    idx = max(0, math.ceil(frac * len(vals)) - 1)
    return vals[idx]


def run_ensemble(cfg: ExperimentConfig) -> dict:
    """Monte Carlo over the rotation parameter: T draws of u, the full
    grid of radii, per-trial gap statistics and exceptional sets, and
    per-radius quantiles for comparison against the candidate exponents
    (deterministic 1/2, geometric-gap 1/4, and the weak-gap family).

    Trial i draws its rotation from a generator seeded by (seed, i), so
    enlarging T never changes earlier trials.  Rows are emitted in
    (trial, radius) order.
    """
    out = _OutDir(cfg, "ensemble")
    seq = build_sequence(cfg)
    h = build_weight(cfg)
    radii = radius_grid(cfg)
    m = int(cfg.grid.get("m", 8))
    etas = [float(e) for e in cfg.eta]
    T = cfg.trials

    truncs = [
        _series.truncation_index(seq, rad, margin_nats=cfg.margin_nats, n_cap=cfg.n_cap)
        for rad in radii
    ]
    n_terms = max(truncs) + 1
    theta = build_phases(cfg, n_terms)
    theta.check(n_terms)
    bits = suggest_bits(theta, n_terms)

    if cfg.u_override == "zero":
        us = [PhaseFraction.zero(bits) for _ in range(T)]
    elif cfg.u_override is None:
        us = [sample_u(random.Random(f"{cfg.seed}:{i}"), bits) for i in range(T)]
    else:
        raise BadParamError(f"unknown u_override {cfg.u_override!r}")

    # deterministic per-radius part once, rotated part per (radius, trial)
    profiles = [
        growth_profile(seq, rad, margin_nats=cfg.margin_nats, n_cap=cfg.n_cap)
        for rad in radii
    ]
    cell = {}        # (trial, radius_j) -> (log_M, delta or None)
    for j, rad in enumerate(radii):
        for i in range(T):
            res = max_modulus(
                seq, theta, us[i], rad,
                margin_nats=cfg.margin_nats, n_cap=cfg.n_cap,
                fft_chunk=int(cfg.fft.get("chunk", 1 << 24)),
                workers=int(cfg.fft.get("workers", 1)),
            )
            try:
                d = delta_h(res.log_M, profiles[j].log_mu, rad, h)
            except DomainError:
                d = None
            cell[(i, j)] = (res.log_M, d)

    flag_hdr = [f"flag_eta_{format(e, 'g')}" for e in etas]
    rows = []
    per_trial = []
    eta_star = max(etas)
    budget = float(cfg.thresholds.get("exc_budget", 1.0))
    for i in range(T):
        flagged = {e: [] for e in etas}
        valid = []
        for j, rad in enumerate(radii):
            log_M, d = cell[(i, j)]
            fl = [None if d is None else int(d > e) for e in etas]
            for e, f in zip(etas, fl):
                if f:
                    flagged[e].append(j + 1)      # grid index is 1-based
            if d is not None:
                valid.append((j, d))
            p = profiles[j]
            rows.append(
                [rad.r, rad.s, p.log_mu, p.nu, p.log_G, p.log_S, p.A, p.B2,
                 log_M, d, i, us[i].u_hex] + fl
            )
        exc = {
            format(e, "g"): ExceptionalSet.from_grid_flags(flagged[e], m, h)
            for e in etas
        }
        star = exc[format(eta_star, "g")]
        outside = [d for j, d in valid if j + 1 not in flagged[eta_star]]
        per_trial.append(
            {
                "trial": i,
                "u_hex": us[i].u_hex,
                "exceptional": {
                    k: {"intervals": [list(iv) for iv in s.intervals],
                        "h_mass": s.h_mass}
                    for k, s in exc.items()
                },
                "tail_sup_outside": max(outside) if outside else None,
                "tail_eta": eta_star,
                "within_budget": star.h_mass <= budget,
            }
        )

    aggregates = []
    for j, rad in enumerate(radii):
        ds = sorted(d for i in range(T) if (d := cell[(i, j)][1]) is not None)
        aggregates.append(
            {
                "s": rad.s,
                "x_ln_inv_s": math.log(1.0 / rad.s),
                "n_valid": len(ds),
                "min": ds[0] if ds else None,
                "median": statistics.median(ds) if ds else None,
                "p90": _percentile_sorted(ds, 0.9) if ds else None,
                "max": ds[-1] if ds else None,
            }
        )

    cb = corollary_bounds(cfg.delta)
    cv = corollary_validity(cfg.delta)
    medians = [a["median"] for a in aggregates if a["median"] is not None]
    summary = {
        "config": cfg.raw,
        "seed": cfg.seed,
        "fixed_point_bits": bits,
        "trials": T,
        "n_terms": n_terms,
        "per_radius": aggregates,
        "per_trial": per_trial,
        "bounds": {
            "deterministic": 0.5,
            "geometric_gap": 0.25,
            "weak_gap_general": cb.c2_bound,
            "weak_gap_small_mu": cb.c3_bound,
            "weak_gap_general_alpha": cb.c2_alpha,
            "weak_gap_small_mu_alpha": cb.c3_alpha,
            "weak_gap_general_valid": cv[0],
            "weak_gap_small_mu_valid": cv[1],
            "alternative_general_form": abstract_exponent(cfg.delta),
            "delta": cfg.delta,
        },
        "thresholds": cfg.thresholds,
        "median_first": medians[0] if medians else None,
        "median_last": medians[-1] if medians else None,
    }

    out.csv("ensemble.csv", _CSV_BASE + ["trial", "u_hex"] + flag_hdr, rows)
    out.csv(
        "plotdata_ensemble.csv",
        ["x_ln_inv_s", "median_delta_h"],
        [(a["x_ln_inv_s"], a["median"]) for a in aggregates if a["median"] is not None],
    )
    out.json("ensemble.json", summary)
    out.done()
    return summary


def run_bound_audit(cfg: ExperimentConfig) -> dict:
    """Checks the index-moment and G ceilings along the grid: A against
    h L (ln L)^{1+eps}, B^2 against both recorded variants, and ln G
    against the deterministic ceiling, with L = ln(h mu).  Violating
    radii become grid-cell sets whose h-measure is reported (a finite
    h-mass of violations is what the statements permit).
    """
    out = _OutDir(cfg, "bound_audit")
    eps = float(cfg.audit.get("eps", 0.5))
    if not eps > 0.0:
        raise BadParamError("audit eps must be positive")
    seq = build_sequence(cfg)
    h = build_weight(cfg)
    radii = radius_grid(cfg)
    m = int(cfg.grid.get("m", 8))

    kinds = ("A", "B2_statement", "B2_proof", "G_eq6")
    viol = {k: [] for k in kinds}
    skipped = []
    per_radius = []
    for j, rad in enumerate(radii, start=1):
        p = growth_profile(seq, rad, margin_nats=cfg.margin_nats, n_cap=cfg.n_cap)
        lh = h.log_eval_s(rad.s)
        L = lh + p.log_mu
        if not L > math.e:          # the ceilings are asymptotic statements
            skipped.append(rad.s)
            continue
        log_A = math.log(p.A) if p.A > 0 else -math.inf
        log_B2 = math.log(p.B2) if p.B2 > 0 else -math.inf
        checks = {
            "A": (log_A, lemma4_A_log(lh, L, eps)),
            "B2_statement": (log_B2, lemma4_B2_statement_log(lh, L, eps)),
            "B2_proof": (log_B2, lemma4_B2_proof_log(lh, L, eps)),
            "G_eq6": (p.log_G, eq6_logG_bound(p.log_mu, lh, L, eps)),
        }
        rec = {"s": rad.s}
        for k, (lhs, rhs) in checks.items():
            rec[k + "_margin"] = rhs - lhs
            if lhs > rhs:
                viol[k].append(j)
        per_radius.append(rec)

    sets = {k: ExceptionalSet.from_grid_flags(v, m, h) for k, v in viol.items()}
    summary = {
        "config": cfg.raw,
        "seed": cfg.seed,
        "eps": eps,
        "eq6_delta": eps,
        "skipped_s": skipped,
        "per_radius": per_radius,
        "violations": {
            k: {
                "grid_indices": viol[k],
                "intervals": [list(iv) for iv in sets[k].intervals],
                "h_mass": sets[k].h_mass,
            }
            for k in kinds
        },
    }
    out.json("bound_audit.json", summary)
    out.done()
    return summary


class KahaneResult(NamedTuple):
    t0: float
    ratio: float


def _unit_powers(z: np.ndarray, n: int) -> np.ndarray:
    """z**n for |z| = 1 with renormalized square-and-multiply, so huge
    integer exponents cannot amplify the tiny modulus error of z."""
    result = np.ones_like(z)
    base = z.copy()
    while n:
        if n & 1:
            result *= base
            result /= np.abs(result)
        n >>= 1
        if n:
            base *= base
            base /= np.abs(base)
    return result


def run_kahane_search(
    theta: PhaseSequence,
    coeffs: Sequence[float],
    interval: tuple,
    grid_n: int,
) -> KahaneResult:
    """Search t in the interval maximizing Re sum c_n e^{i theta_n t};
    the achieved ratio against sum c_n is an empirical alignment
    constant for the frequency set.

    Uniform grid of grid_n points, then golden-section refinement around
    the best point.  Frequencies are applied as renormalized integer
    powers of e^{it}, accurate to ~bits(theta) rounding steps even for
    hundred-digit frequencies.
    """
    t_lo, t_hi = float(interval[0]), float(interval[1])
    if not t_hi > t_lo:
        raise BadParamError("empty search interval")
    if grid_n < 2:
        raise BadParamError("grid_n must be >= 2")
    c = [float(v) for v in coeffs]
    if any(v < 0 for v in c) or not any(v > 0 for v in c):
        raise BadParamError("coefficients must be nonnegative with positive sum")
    theta.check(len(c))
    total = math.fsum(c)

    ts = np.linspace(t_lo, t_hi, grid_n)
    z = np.exp(1j * ts)
    re_q = np.zeros(grid_n)
    prev_theta = 0
    w = np.ones_like(z)
    for cn, th in zip(c, theta):
        w = w * _unit_powers(z, th - prev_theta)
        prev_theta = th
        re_q += cn * w.real

    k = int(np.argmax(re_q))      # first occurrence: smaller t on ties

    def val(t: float) -> float:
        zz = np.array([complex(math.cos(t), math.sin(t))])
        acc, prev, ww = 0.0, 0, np.ones(1, dtype=complex)
        for cn, th in zip(c, theta):
            ww = ww * _unit_powers(zz, th - prev)
            prev = th
            acc += cn * ww[0].real
        return acc

    from .maxmod import _golden_max

    a = ts[max(0, k - 1)]
    b = ts[min(grid_n - 1, k + 1)]
    best, t0 = _golden_max(val, a, b, 1e-12)
    if re_q[k] >= best:
        best, t0 = float(re_q[k]), float(ts[k])
    return KahaneResult(t0=float(t0), ratio=float(best / total))


def run_kahane_from_config(cfg: ExperimentConfig) -> dict:
    """CLI wrapper: build the pieces from config, report the search."""
    out = _OutDir(cfg, "kahane")
    block = cfg.kahane
    coeffs = [float(v) for v in block.get("coeffs", [1.0] * 21)]
    theta = build_phases(cfg, len(coeffs))
    interval = block.get("interval")
    if interval is None:
        b_prime = float(block.get("b_prime", 1.0))
        t_lo = float(block.get("t_lo", 0.1))
        interval = (t_lo, t_lo + 2.0 * math.pi * b_prime / theta[0])
    grid_n = int(block.get("grid_n", 1 << 16))
    res = run_kahane_search(theta, coeffs, tuple(interval), grid_n)
    length = interval[1] - interval[0]
    summary = {
        "config": cfg.raw,
        "seed": cfg.seed,
        "t0": res.t0,
        "ratio": res.ratio,
        "interval": [interval[0], interval[1]],
        "interval_periods_of_theta0": length * theta[0] / (2.0 * math.pi),
        "grid_n": grid_n,
    }
    out.csv(
        "plotdata_kahane.csv",
        ["t", "ratio"],
        [(res.t0, res.ratio)],
    )
    out.json("kahane.json", summary)
    out.done()
    return summary
