"""Experiment drivers: artifact formats, determinism, and the contract
that rotation u = 0 reproduces the deterministic sweep."""

import csv
import hashlib
import json
import math

import pytest

from wvlab import BadParamError, ExplicitPhaseSequence, gen_geometric
from wvlab.experiments import (
    ExperimentConfig,
    run_baire_example,
    run_bound_audit,
    run_ensemble,
    run_kahane_search,
    run_profile,
    run_sharpness,
)

BASE = {
    "sequence": {"label": "SQRT_EXP"},
    "phases": {"kind": "geometric", "q": 2},
    "grid": {"m": 4, "k_max": 2},
    "trials": 2,
    "seed": 11,
    "eta": [0.25, 0.5],
}


def _cfg(**over):
    d = dict(BASE)
    d.update(over)
    return ExperimentConfig.from_dict(d)


def _sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


class TestConfig:
    def test_defaults_and_validation(self):
        cfg = ExperimentConfig()
        assert cfg.trials == 1
        with pytest.raises(BadParamError):
            ExperimentConfig(trials=0)
        with pytest.raises(BadParamError):
            ExperimentConfig(grid={"m": 0, "k_max": 2})

    def test_yaml_roundtrip(self, tmp_path):
        p = tmp_path / "c.yaml"
        p.write_text("sequence: {label: GEOMETRIC}\ntrials: 3\nseed: 5\n")
        cfg = ExperimentConfig.from_yaml(str(p))
        assert cfg.trials == 3
        assert cfg.raw["seed"] == 5

    def test_raw_echoed_into_summary(self, tmp_path):
        cfg = _cfg(out=str(tmp_path), grid={"m": 2, "k_max": 1}, trials=1)
        s = run_profile(cfg)
        assert s["config"] == cfg.raw


class TestProfile:
    def test_geometric_row_count_and_logG(self, tmp_path):
        cfg = ExperimentConfig.from_dict({
            "sequence": {"label": "GEOMETRIC"},
            "grid": {"m": 4, "k_max": 3},
            "out": str(tmp_path),
        })
        run_profile(cfg)
        with open(tmp_path / "profile.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 12
        for row in rows:
            s = float(row["s"])
            assert float(row["log_G"]) == pytest.approx(-math.log(s), abs=1e-10)

    def test_header_exact(self, tmp_path):
        cfg = _cfg(out=str(tmp_path), trials=1, grid={"m": 2, "k_max": 1})
        run_profile(cfg)
        head = (tmp_path / "profile.csv").read_text().splitlines()[0]
        assert head == "r,s,log_mu,nu,log_G,log_S,A,B2,log_M,delta_h"

    def test_single_term_table_all_zero_delta(self, tmp_path):
        cfg = ExperimentConfig.from_dict({
            "sequence": {"label": "TABLE", "coeffs": [1.0]},
            "grid": {"m": 4, "k_max": 2},
        })
        s = run_profile(cfg)
        for d in s["delta_h"]:
            if d is not None:
                assert d == pytest.approx(0.0, abs=1e-15)


class TestEnsemble:
    def test_zero_override_matches_profile(self):
        sz = run_ensemble(_cfg(trials=1, u_override="zero"))
        sp = run_profile(_cfg())
        got = [a["median"] for a in sz["per_radius"]]
        for a, b in zip(got, sp["delta_h"]):
            if b is None:
                assert a is None
            else:
                assert a == pytest.approx(b, abs=0.0)

    def test_byte_identical_rerun(self, tmp_path):
        cfg_d = dict(BASE, out=str(tmp_path))
        run_ensemble(ExperimentConfig.from_dict(dict(cfg_d)))
        h1 = {f.name: _sha(f) for f in tmp_path.iterdir() if "timing" not in f.name}
        run_ensemble(ExperimentConfig.from_dict(dict(cfg_d)))
        h2 = {f.name: _sha(f) for f in tmp_path.iterdir() if "timing" not in f.name}
        assert h1 == h2

    def test_doubling_trials_preserves_prefix(self):
        a = run_ensemble(_cfg(trials=2))
        b = run_ensemble(_cfg(trials=4))
        for i in range(2):
            assert a["per_trial"][i]["u_hex"] == b["per_trial"][i]["u_hex"]
            assert a["per_trial"][i]["exceptional"] == b["per_trial"][i]["exceptional"]

    def test_csv_shape_and_flags(self, tmp_path):
        run_ensemble(_cfg(out=str(tmp_path)))
        lines = (tmp_path / "ensemble.csv").read_text().splitlines()
        want = ("r,s,log_mu,nu,log_G,log_S,A,B2,log_M,delta_h,"
                "trial,u_hex,flag_eta_0.25,flag_eta_0.5")
        assert lines[0] == want
        assert len(lines) - 1 == 2 * 8          # trials * radii
        with open(tmp_path / "ensemble.csv") as fh:
            for row in csv.DictReader(fh):
                assert row["flag_eta_0.25"] in ("", "0", "1")
                int(row["trial"])

    def test_bounds_block(self):
        s = run_ensemble(_cfg(trials=1, delta=0.25))
        b = s["bounds"]
        assert b["deterministic"] == 0.5
        assert b["geometric_gap"] == 0.25
        assert b["weak_gap_general"] == pytest.approx(1.75 / 4.5)
        assert b["weak_gap_general_valid"] is True

    def test_phases_too_short_reports_requirement(self):
        from wvlab import PhasesTooShortError
        cfg = _cfg(phases={"kind": "explicit", "values": [1, 2, 4, 8]})
        with pytest.raises(PhasesTooShortError) as ei:
            run_ensemble(cfg)
        assert ei.value.required_length > 4


class TestSharpness:
    def test_sqrt_exp_positive_stable(self):
        s = run_sharpness(_cfg(grid={"m": 4, "k_max": 3}))
        assert s["final_running_min"] > 0.01
        assert s["final_decade_rel_drift"] < 0.10

    def test_geometric_ratio_decays(self):
        s = run_sharpness(ExperimentConfig.from_dict({
            "sequence": {"label": "GEOMETRIC"},
            "grid": {"m": 4, "k_max": 4},
        }))
        # ratio = 1/sqrt(ln(h mu)) for this family: must shrink with r
        assert s["final_running_min"] < s["ratio_max"] / 2.0
        assert s["running_min"][-1] == pytest.approx(
            1.0 / math.sqrt(4.0 * math.log(10.0)), rel=0.05)

    def test_rejects_rotated_tables(self):
        cfg = ExperimentConfig.from_dict({
            "sequence": {"label": "TABLE", "coeffs": [1, 1], "args": [0.0, 3.0]},
        })
        with pytest.raises(BadParamError):
            run_sharpness(cfg)


class TestBaire:
    def test_power_exp_only(self):
        with pytest.raises(BadParamError):
            run_baire_example(_cfg())

    def test_positive_stabilizing(self):
        s = run_baire_example(ExperimentConfig.from_dict({
            "sequence": {"label": "POWER_EXP", "eps": 0.5},
            "grid": {"m": 4, "k_max": 3},
        }))
        assert s["C0_estimate"] > 0.0
        assert s["final_decade_rel_drift"] < 0.10
        assert math.isfinite(s["upper_side_bounded"])


class TestBoundAudit:
    def test_geometric_A_violations_empty(self):
        s = run_bound_audit(ExperimentConfig.from_dict({
            "sequence": {"label": "GEOMETRIC"},
            "grid": {"m": 4, "k_max": 6},
            "audit": {"eps": 0.5},
        }))
        assert s["violations"]["A"]["grid_indices"] == []
        assert s["violations"]["A"]["h_mass"] == 0.0

    def test_larger_eps_never_adds_violations(self):
        base = {
            "sequence": {"label": "SQRT_EXP"},
            "grid": {"m": 4, "k_max": 3},
        }
        small = run_bound_audit(ExperimentConfig.from_dict(
            {**base, "audit": {"eps": 0.25}}))
        large = run_bound_audit(ExperimentConfig.from_dict(
            {**base, "audit": {"eps": 1.0}}))
        for kind in ("A", "B2_statement", "B2_proof", "G_eq6"):
            assert set(large["violations"][kind]["grid_indices"]) <= set(
                small["violations"][kind]["grid_indices"])

    def test_eps_must_be_positive(self):
        with pytest.raises(BadParamError):
            run_bound_audit(_cfg(audit={"eps": 0.0}))


class TestKahane:
    def test_single_term(self):
        r = run_kahane_search(
            ExplicitPhaseSequence([1]), [1.0], (0.0, 2 * math.pi), 4096)
        assert r.t0 == 0.0
        assert r.ratio == 1.0

    def test_two_terms_align_at_zero(self):
        r = run_kahane_search(
            ExplicitPhaseSequence([1, 2]), [1.0, 1.0], (0.0, 2 * math.pi), 4096)
        assert r.t0 == 0.0
        assert r.ratio == pytest.approx(1.0, abs=1e-12)

    def test_geometric_family_positive_ratio(self):
        th = gen_geometric(2, 20)
        r = run_kahane_search(th, [1.0] * 21, (0.1, 0.1 + 2 * math.pi), 1 << 14)
        assert 0.0 < r.ratio <= 1.0
        assert 0.1 <= r.t0 <= 0.1 + 2 * math.pi

    def test_matches_dense_grid_oracle(self):
        th = gen_geometric(2, 20)
        c = [1.0] * 21
        fine = run_kahane_search(th, c, (0.1, 0.1 + 2 * math.pi), 10**6)
        coarse = run_kahane_search(th, c, (0.1, 0.1 + 2 * math.pi), 1 << 15)
        assert coarse.ratio == pytest.approx(fine.ratio, rel=1e-6)

    def test_bad_inputs(self):
        th = ExplicitPhaseSequence([1, 2])
        with pytest.raises(BadParamError):
            run_kahane_search(th, [1.0, 1.0], (1.0, 1.0), 128)
        with pytest.raises(BadParamError):
            run_kahane_search(th, [-1.0, 1.0], (0.0, 1.0), 128)
        with pytest.raises(BadParamError):
            run_kahane_search(th, [0.0, 0.0], (0.0, 1.0), 128)
        with pytest.raises(BadParamError):
            run_kahane_search(th, [1.0, 1.0], (0.0, 1.0), 1)

    def test_huge_frequencies_unit_modulus(self):
        # renormalized powers: |e^{i t theta}| must stay 1 even for
        # frequencies far beyond float precision
        th = ExplicitPhaseSequence([1, 2**200 + 1])
        r = run_kahane_search(th, [1.0, 1.0], (0.05, 0.3), 2048)
        assert 0.0 < r.ratio <= 1.0 + 1e-12


class TestCli:
    def test_profile_subcommand(self, tmp_path, capsys):
        from wvlab.cli import main
        rc = main([
            "profile", "--out", str(tmp_path), "--kmax", "1",
            "--sequence", "GEOMETRIC",
        ])
        assert rc == 0
        out = json.loads(capsys.readouterr().out)
        assert out["rows"] == 8
        assert (tmp_path / "profile.csv").exists()

    def test_eta_comma_list(self, capsys):
        from wvlab.cli import main
        rc = main(["ensemble", "--kmax", "1", "--trials", "1",
                   "--eta", "0.3,0.6", "--seed", "3"])
        assert rc == 0
        out = json.loads(capsys.readouterr().out)
        assert out["config"]["eta"] == [0.3, 0.6]
