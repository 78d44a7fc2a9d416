"""High-precision reference implementations shared by the tests."""

from __future__ import annotations

from math import lgamma, log

import mpmath as mp
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def wright_ref(a: float, t: float, digits: int = 30, max_log: float = 700.0):
    """M-Wright density by its Taylor series in mpmath.

    The working precision covers the cancellation between the largest term
    and the result; arguments where that would exceed ``max_log`` are refused.
    """
    mx, n = 0.0, 0
    if t > 0:
        while True:
            v = n * log(t) + lgamma(a * (n + 1)) - lgamma(n + 1)
            mx = max(mx, v)
            if mx > max_log:
                raise ValueError("series cancellation too severe for a reference value")
            if n > 5 and v < mx - 120:
                break
            n += 1
    dps = int(digits + mx / 2.302585 + 10)
    with mp.workdps(dps):
        A, T = mp.mpf(a), mp.mpf(t)
        s, k = mp.mpf(0), 0
        tol = mp.mpf(10) ** (-dps)
        while True:
            x = A * (k + 1)
            # 1/Gamma(1 - x) = Gamma(x) sin(pi x) / pi; zero at the poles
            s += (-T) ** k / mp.factorial(k) * mp.gamma(x) * mp.sinpi(x) / mp.pi
            if k > n and abs(T ** k / mp.factorial(k) * mp.gamma(x)) < tol * (abs(s) + tol):
                break
            k += 1
        return +s


def ml_ref(a: float, z: float, digits: int = 30):
    """Mittag-Leffler function by its Taylor series in mpmath."""
    if z == 0:
        return mp.mpf(1)
    w = abs(z) ** (1.0 / a)
    dps = int(digits + w / 2.302585 + 10)
    with mp.workdps(dps):
        A, Z = mp.mpf(a), mp.mpf(z)
        s, n = mp.mpf(0), 0
        tol = mp.mpf(10) ** (-dps)
        while True:
            term = Z ** n * mp.rgamma(A * n + 1)
            s += term
            if n > w / a + 10 and abs(term) < tol * (abs(s) + tol):
                break
            n += 1
        return +s


def stretched_log_ref(a: float, n: int, t: float, sigma: float, beta: float = 1.0):
    """``ln sum_k (n z)^k / k! Gamma(sigma k + 1) / Gamma(sigma alpha k + 1)`` by
    direct summation past the peak."""
    with mp.workdps(30):
        z = beta * mp.mpf(t) ** (sigma * a)
        lnz = mp.log(n * z)
        terms, top, k = [], -mp.inf, 0
        while True:
            v = k * lnz - mp.loggamma(k + 1) + mp.loggamma(sigma * k + 1) - mp.loggamma(sigma * a * k + 1)
            terms.append(v)
            top = max(top, v)
            if k > 10 and v < top - 60 and v < terms[-2]:
                break
            k += 1
        return top + mp.log(mp.fsum(mp.exp(x - top) for x in terms))


@pytest.fixture
def outdir(tmp_path, monkeypatch):
    monkeypatch.delenv("FRACFLOW_OUTDIR", raising=False)
    return tmp_path
