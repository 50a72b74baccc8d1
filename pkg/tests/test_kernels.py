"""Both kernel backends against exactly rounded fsum references."""

import math

import pytest

from wvlab import accel


def _paths():
    out = [("numpy", accel._kahan_exp_sum_py, accel._kahan_exp_moments_py,
            accel._cexp_dot_py, accel._scaled_moments_py)]
    if accel.USING_NUMBA:
        out.append(("numba", accel._kahan_exp_sum_nb, accel._kahan_exp_moments_nb,
                    accel._cexp_dot_nb, accel._scaled_moments_nb))
    return out


@pytest.mark.parametrize("name,ksum,kmom,cdot,smom", _paths())
def test_exp_sum_matches_fsum(name, ksum, kmom, cdot, smom, rng):
    shifted = rng.uniform(-700.0, 0.0, size=10_000)
    ref = math.fsum(math.exp(v) for v in shifted)
    assert ksum(shifted) == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize("name,ksum,kmom,cdot,smom", _paths())
def test_exp_moments_match_fsum(name, ksum, kmom, cdot, smom, rng):
    shifted = rng.uniform(-50.0, 0.0, size=5_000)
    n0 = 123456.0
    s0, s1, s2 = kmom(shifted, n0)
    w = [math.exp(v) for v in shifted]
    assert s0 == pytest.approx(math.fsum(w), rel=1e-14)
    assert s1 == pytest.approx(
        math.fsum((n0 + i) * wi for i, wi in enumerate(w)), rel=1e-13)
    assert s2 == pytest.approx(
        math.fsum((n0 + i) ** 2 * wi for i, wi in enumerate(w)), rel=1e-13)


@pytest.mark.parametrize("name,ksum,kmom,cdot,smom", _paths())
def test_cexp_dot_matches_fsum(name, ksum, kmom, cdot, smom, rng):
    mag = rng.uniform(0.0, 1.0, size=4_000)
    phase = rng.uniform(-1e3, 1e3, size=4_000)
    re, im = cdot(mag, phase)
    assert re == pytest.approx(
        math.fsum(m * math.cos(p) for m, p in zip(mag, phase)), abs=1e-11)
    assert im == pytest.approx(
        math.fsum(m * math.sin(p) for m, p in zip(mag, phase)), abs=1e-11)


@pytest.mark.parametrize("name,ksum,kmom,cdot,smom", _paths())
def test_scaled_moments_match_fsum(name, ksum, kmom, cdot, smom, rng):
    n = 2_000
    dre = rng.normal(size=n)
    dim = rng.normal(size=n)
    x = rng.uniform(-1.0, 1.0, size=n)
    mre, mim = smom(dre, dim, x, 6)
    assert mre.shape == (7,)
    for k in range(7):
        assert mre[k] == pytest.approx(
            math.fsum(d * xi ** k for d, xi in zip(dre, x)), abs=1e-10)
        assert mim[k] == pytest.approx(
            math.fsum(d * xi ** k for d, xi in zip(dim, x)), abs=1e-10)


def test_backends_agree(rng):
    if not accel.USING_NUMBA:
        pytest.skip("single backend in this environment")
    shifted = rng.uniform(-100.0, 0.0, size=8_192)
    assert accel._kahan_exp_sum_nb(shifted) == pytest.approx(
        accel._kahan_exp_sum_py(shifted), rel=1e-14)
    a = accel._kahan_exp_moments_nb(shifted, 10.0)
    b = accel._kahan_exp_moments_py(shifted, 10.0)
    assert a == pytest.approx(b, rel=1e-13)


def test_backend_name():
    assert accel.backend_name() in ("numba", "numpy")
    assert (accel.backend_name() == "numba") == accel.USING_NUMBA
