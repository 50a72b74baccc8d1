"""Thirteen end-to-end checks, one test each, against independent slow
references and the documented quantitative targets.

The asymptotic statements behind the library (boundary limits, almost
sure limsups) are not reproducible exactly at desk scale; these checks
pin the reachable finite-grid consequences instead.  The Monte Carlo
ensemble shared by checks 6 and 7 is the expensive part and runs once
per session.
"""

import math
import random
import time

import numpy as np
import pytest

import oracles
from wvlab import (
    ExceptionalSet,
    ExplicitPhaseSequence,
    PhaseFraction,
    Radius,
    corollary_bounds,
    gamma_stat,
    gen_geometric,
    gen_phi,
    geometric,
    lemma2_sequence,
    log_G,
    log_S,
    max_modulus,
    max_term,
    moments_AB,
    phase_angle,
    power_exp,
    sample_u,
    sqrt_exp,
    suggest_bits,
    table,
)
from wvlab.experiments import (
    ExperimentConfig,
    run_baire_example,
    run_ensemble,
    run_sharpness,
)

ENSEMBLE_GRID_M = 8
ENSEMBLE_K_MAX = 4
ENSEMBLE_TRIALS = 50
ENSEMBLE_SEED = 20250825


@pytest.fixture(scope="session")
def ensemble_summary(tmp_path_factory):
    """The T = 50 rotation ensemble on the full grid down to s = 1e-4.

    Deterministic in (config, seed); the dominant cost of the suite.
    """
    out = tmp_path_factory.mktemp("ensemble")
    cfg = ExperimentConfig.from_dict({
        "sequence": {"label": "SQRT_EXP"},
        "phases": {"kind": "geometric", "q": 2},
        "grid": {"m": ENSEMBLE_GRID_M, "k_max": ENSEMBLE_K_MAX},
        "trials": ENSEMBLE_TRIALS,
        "seed": ENSEMBLE_SEED,
        "eta": [0.25, 0.5],
        "out": str(out),
    })
    return run_ensemble(cfg)


def test_criterion_01_max_term_matches_brute_force():
    """100 random tables x 20 radii: nu exact, log_mu to 1e-12, under 5 s."""
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    for _ in range(100):
        n = int(rng.integers(1, 1001))
        coeffs = rng.uniform(0.0, 4.0, size=n)
        coeffs[rng.uniform(size=n) < 0.05] = 0.0
        if not coeffs.any():
            coeffs[0] = 1.0
        seq = table(coeffs, None)
        for r in rng.uniform(0.02, 0.999, size=20):
            want_nu, want_mu = oracles.brute_max_term(
                oracles.table_log_terms(coeffs, float(r)))
            got_mu, got_nu = max_term(seq, Radius.from_r(float(r)))
            assert got_nu == want_nu
            assert abs(got_mu - want_mu) <= 1e-12
    assert time.perf_counter() - t0 < 5.0


def test_criterion_02_geometric_closed_forms():
    """G, S, A, B^2 of the geometric series at three radii, rel 1e-8, under 1 s."""
    g = geometric()
    t0 = time.perf_counter()
    for r in (0.5, 0.9, 0.99):
        rad = Radius.from_r(r)
        want = oracles.geometric_closed_forms(r)
        assert log_G(g, rad) == pytest.approx(want["log_G"], rel=1e-8)
        assert log_S(g, rad) == pytest.approx(want["log_S"], rel=1e-8)
        A, B2 = moments_AB(g, rad)
        assert A == pytest.approx(want["A"], rel=1e-8)
        assert B2 == pytest.approx(want["B2"], rel=1e-8)
    assert time.perf_counter() - t0 < 1.0


def test_criterion_03_moments_match_log_derivatives():
    """A and B^2 against central differences of ln G in ln r, steps 1e-5."""
    step = 1e-5
    for seq in (geometric(), sqrt_exp()):
        for r in (0.5, 0.9, 0.99):
            x = math.log(r)

            def lg(xx):
                return log_G(seq, Radius.from_log_r(xx))

            a_fd = (lg(x + step) - lg(x - step)) / (2.0 * step)
            b2_fd = (lg(x + step) - 2.0 * lg(x) + lg(x - step)) / step**2
            A, B2 = moments_AB(seq, Radius.from_log_r(x))
            assert A == pytest.approx(a_fd, rel=1e-5)
            assert B2 == pytest.approx(b2_fd, rel=1e-3)


def test_criterion_04_parseval_sandwich():
    """log_S - 1e-9 <= log_M <= log_G + 1e-9 over builtins x 20 radii x 20 u."""
    pyrng = random.Random(4)
    radii = [Radius.from_decade(j, 8) for j in range(1, 21)]
    for seq in (geometric(), sqrt_exp(), power_exp(0.3)):
        theta = gen_geometric(2, 1)      # resized per radius below
        for rad in radii:
            from wvlab import truncation_index
            trunc = truncation_index(seq, rad)
            theta = gen_geometric(2, trunc)
            bits = suggest_bits(theta, trunc + 1)
            lo = log_S(seq, rad) - 1e-9
            hi = log_G(seq, rad) + 1e-9
            for _ in range(20):
                u = sample_u(pyrng, bits)
                res = max_modulus(seq, theta, u, rad)
                assert lo <= res.log_M <= hi


def test_criterion_05_sharpness_ratio_stabilizes():
    """Running min of M/(h mu ln^{1/2}(h mu)) positive and drifting < 10%
    over the final decade, under 2 minutes."""
    t0 = time.perf_counter()
    s = run_sharpness(ExperimentConfig.from_dict({
        "sequence": {"label": "SQRT_EXP"},
        "weight": {"label": "LOG_MEASURE"},
        "grid": {"m": 8, "k_max": 4},
    }))
    assert s["final_running_min"] > 0.01
    assert s["final_decade_rel_drift"] < 0.10
    assert time.perf_counter() - t0 < 120.0


def test_criterion_06_ensemble_median_declines(ensemble_summary):
    """Medians over 50 rotations: <= 0.45 at the three largest radii and
    lower at the largest radius than at the start of the final decade."""
    per_radius = ensemble_summary["per_radius"]
    last3 = per_radius[-3:]
    for a in last3:
        assert a["median"] is not None
        assert a["median"] <= 0.45
    final_decade = per_radius[-ENSEMBLE_GRID_M:]
    assert final_decade[-1]["median"] < final_decade[0]["median"]


def test_criterion_07_tail_sup_below_ceiling(ensemble_summary):
    """Outside its own flagged set no trial's sup of the gap statistic
    exceeds 0.55; the flagged sets leave most of the final decade alone."""
    m = ENSEMBLE_GRID_M
    n_grid = m * ENSEMBLE_K_MAX
    for rec in ensemble_summary["per_trial"]:
        assert rec["tail_sup_outside"] is not None
        assert rec["tail_sup_outside"] <= 0.55
        flagged = ExceptionalSet(
            intervals=tuple(tuple(iv) for iv in
                            rec["exceptional"]["0.5"]["intervals"]),
            h_mass=rec["exceptional"]["0.5"]["h_mass"])
        outside_final_decade = sum(
            1 for j in range(n_grid - m + 1, n_grid + 1)
            if not flagged.contains(Radius.from_decade(j, m)))
        assert outside_final_decade >= m // 2


def test_criterion_08_slow_growth_ladder():
    """k(r) = 1/(1-r): the ladder passes all three properties for the
    empty, half-line, and three-interval excluded sets."""
    def k(r):
        return 1.0 / (1.0 - r)

    sets = (
        ExceptionalSet.empty(),
        ExceptionalSet.from_intervals([(1e-12, 0.5)]),
        ExceptionalSet.from_intervals([(0.3, 0.5), (0.8, 0.9), (0.95, 0.96)]),
    )
    for E in sets:
        rs = [rad.r for rad in lemma2_sequence(k, E, n_max=20)]
        for a, b in zip(rs, rs[1:]):
            assert b >= a
        for i, r in enumerate(rs):
            assert not E.contains(r)
            assert math.log(k(r)) >= 0.5 * (i + 1) - 1e-12
        for i in range(len(rs) - 1):
            a, b = rs[i], rs[i + 1]
            if b <= a:
                continue
            covered = any(ia <= a + 1e-12 and b - 1e-12 <= ib
                          for ia, ib in E.intervals)
            if not covered:
                assert k(b) <= math.e * k(a) * (1.0 + 1e-9)


def test_criterion_09_corollary_constants():
    """Endpoint values 1/4, 1/2 and monotone growth in the gap order."""
    b0 = corollary_bounds(0.0)
    assert b0.c2_bound == pytest.approx(0.25, abs=1e-15)
    assert b0.c3_bound == pytest.approx(0.25, abs=1e-15)
    assert corollary_bounds(0.5).c2_bound == pytest.approx(0.5, abs=1e-15)
    assert corollary_bounds(1.0).c3_bound == pytest.approx(0.5, abs=1e-15)
    deltas = np.linspace(0.0, 2.0, 100)
    c2 = [corollary_bounds(d).c2_bound for d in deltas]
    c3 = [corollary_bounds(d).c3_bound for d in deltas]
    assert all(y > x for x, y in zip(c2, c2[1:]))
    assert all(y > x for x, y in zip(c3, c3[1:]))


def test_criterion_10_gap_growth_statistic():
    """0 for powers of two, 0.25 +- 0.05 for the quarter-power family,
    1 +- 0.05 for consecutive integers."""
    assert gamma_stat(gen_geometric(2, 10_000), n_min=2).value == 0.0
    v = gamma_stat(gen_phi(lambda n: float(n) ** 0.25, 10_000), n_min=100)
    assert abs(v.value - 0.25) <= 0.05
    w = gamma_stat(ExplicitPhaseSequence(list(range(1, 10_002))), n_min=100)
    assert abs(w.value - 1.0) <= 0.05


def test_criterion_11_lower_ratio_stabilizes():
    """Stretched-exponential family: the lower-bound ratio has a positive
    running min with < 10% drift over the final decade."""
    s = run_baire_example(ExperimentConfig.from_dict({
        "sequence": {"label": "POWER_EXP", "eps": 0.5},
        "grid": {"m": 8, "k_max": 4},
    }))
    assert s["C0_estimate"] > 0.0
    assert s["final_decade_rel_drift"] < 0.10


def test_criterion_12_exact_phase_reduction():
    """Odd theta times u = 1/2 gives exactly pi; 512-bit frequencies match
    big-rational reduction to 1e-12."""
    assert phase_angle(2**200 + 1, PhaseFraction.half()) == math.pi
    pyrng = random.Random(12)
    for _ in range(20):
        th = pyrng.getrandbits(512) | (1 << 511) | 1
        u = sample_u(pyrng, 128)
        want = oracles.fraction_angle(th, u.num, u.bits)
        assert abs(phase_angle(th, u) - want) <= 1e-12


def test_criterion_13_ensemble_is_byte_deterministic(tmp_path):
    """Identical config and seed, identical bytes (CSV and JSON)."""
    import hashlib

    cfg_d = {
        "sequence": {"label": "SQRT_EXP"},
        "phases": {"kind": "geometric", "q": 2},
        "grid": {"m": 4, "k_max": 2},
        "trials": 3,
        "seed": 77,
        "eta": [0.25, 0.5],
        "out": str(tmp_path),
    }
    run_ensemble(ExperimentConfig.from_dict(dict(cfg_d)))
    files = ("ensemble.csv", "ensemble.json", "plotdata_ensemble.csv")
    before = {f: hashlib.sha256((tmp_path / f).read_bytes()).hexdigest()
              for f in files}
    run_ensemble(ExperimentConfig.from_dict(dict(cfg_d)))
    after = {f: hashlib.sha256((tmp_path / f).read_bytes()).hexdigest()
             for f in files}
    assert before == after
