"""Hot numeric kernels: numba-jitted with a pure-numpy fallback.

The jitted path is selected at import time unless disabled through the
environment (``WVLAB_NO_NUMBA=1`` or the standard ``NUMBA_DISABLE_JIT``).
Sequential Kahan compensation cannot be expressed in vectorized numpy, so the
fallback uses numpy's pairwise summation instead; both meet the library's
accuracy contracts, and ``tests/test_kernels.py`` pins the two paths against
an exactly rounded ``math.fsum`` reference.

The psi-grid stage of ``max_modulus`` is *not* here: evaluating a trig
polynomial on a full grid is an FFT, and scipy's FFT beats any explicit loop
on either backend.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = [
    "USING_NUMBA",
    "backend_name",
    "warm_up",
    "kahan_exp_sum",
    "kahan_exp_moments",
    "cexp_dot",
    "scaled_moments",
]


def _numba_disabled() -> bool:
    if os.environ.get("WVLAB_NO_NUMBA", "").strip() not in ("", "0"):
        return True
    return "NUMBA_DISABLE_JIT" in os.environ


# ---------------------------------------------------------------- numpy path

def _kahan_exp_sum_py(shifted: np.ndarray) -> float:
    return float(np.sum(np.exp(shifted)))


def _kahan_exp_moments_py(shifted: np.ndarray, n0: float):
    w = np.exp(shifted)
    n = n0 + np.arange(shifted.shape[0], dtype=np.float64)
    return float(np.sum(w)), float(np.dot(n, w)), float(np.dot(n * n, w))


def _cexp_dot_py(mag: np.ndarray, phase: np.ndarray):
    return float(np.dot(mag, np.cos(phase))), float(np.dot(mag, np.sin(phase)))


def _scaled_moments_py(dre: np.ndarray, dim: np.ndarray, x: np.ndarray, nmom: int):
    mre = np.empty(nmom + 1)
    mim = np.empty(nmom + 1)
    p = np.ones_like(x)
    for k in range(nmom + 1):
        mre[k] = np.sum(dre * p)
        mim[k] = np.sum(dim * p)
        if k < nmom:
            p = p * x
    return mre, mim


# ---------------------------------------------------------------- numba path

USING_NUMBA = False

if not _numba_disabled():
    try:
        from numba import njit

        # fastmath stays off: reassociation would silently delete the Kahan
        # compensation terms.

        @njit(cache=True)
        def _kahan_exp_sum_nb(shifted):
            s = 0.0
            c = 0.0
            for i in range(shifted.shape[0]):
                y = math.exp(shifted[i]) - c
                t = s + y
                c = (t - s) - y
                s = t
            return s

        @njit(cache=True)
        def _kahan_exp_moments_nb(shifted, n0):
            s0 = 0.0
            c0 = 0.0
            s1 = 0.0
            c1 = 0.0
            s2 = 0.0
            c2 = 0.0
            for i in range(shifted.shape[0]):
                w = math.exp(shifted[i])
                n = n0 + i
                y = w - c0
                t = s0 + y
                c0 = (t - s0) - y
                s0 = t
                y = n * w - c1
                t = s1 + y
                c1 = (t - s1) - y
                s1 = t
                y = n * n * w - c2
                t = s2 + y
                c2 = (t - s2) - y
                s2 = t
            return s0, s1, s2

        @njit(cache=True)
        def _cexp_dot_nb(mag, phase):
            sr = 0.0
            cr = 0.0
            si = 0.0
            ci = 0.0
            for i in range(mag.shape[0]):
                m = mag[i]
                p = phase[i]
                y = m * math.cos(p) - cr
                t = sr + y
                cr = (t - sr) - y
                sr = t
                y = m * math.sin(p) - ci
                t = si + y
                ci = (t - si) - y
                si = t
            return sr, si

        @njit(cache=True)
        def _scaled_moments_nb(dre, dim, x, nmom):
            mre = np.zeros(nmom + 1)
            mim = np.zeros(nmom + 1)
            cre = np.zeros(nmom + 1)
            cim = np.zeros(nmom + 1)
            for i in range(dre.shape[0]):
                p = 1.0
                xi = x[i]
                for k in range(nmom + 1):
                    y = dre[i] * p - cre[k]
                    t = mre[k] + y
                    cre[k] = (t - mre[k]) - y
                    mre[k] = t
                    y = dim[i] * p - cim[k]
                    t = mim[k] + y
                    cim[k] = (t - mim[k]) - y
                    mim[k] = t
                    p *= xi
            return mre, mim

        USING_NUMBA = True
    except ImportError:
        pass

if USING_NUMBA:
    kahan_exp_sum = _kahan_exp_sum_nb
    kahan_exp_moments = _kahan_exp_moments_nb
    cexp_dot = _cexp_dot_nb
    scaled_moments = _scaled_moments_nb
else:
    kahan_exp_sum = _kahan_exp_sum_py
    kahan_exp_moments = _kahan_exp_moments_py
    cexp_dot = _cexp_dot_py
    scaled_moments = _scaled_moments_py


def backend_name() -> str:
    return "numba" if USING_NUMBA else "numpy"


def warm_up() -> None:
    """Trigger jit compilation on toy inputs so later timings are clean."""
    z = np.zeros(2)
    kahan_exp_sum(z)
    kahan_exp_moments(z, 0.0)
    cexp_dot(z, z)
    scaled_moments(z, z, z, 2)
