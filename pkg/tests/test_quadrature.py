from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracflow.errors import AccuracyError
from fracflow.quadrature import (
    adaptive_gauss_legendre,
    gauss_legendre,
    logsumexp,
    neumaier_sum,
    panel_nodes,
    pointwise,
)


def test_rule_is_exact_for_polynomials():
    x, w = gauss_legendre(10)
    for k in range(20):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert np.sum(w * x ** k) == pytest.approx(exact, abs=1e-14)


def test_rule_is_read_only():
    x, _ = gauss_legendre(8)
    with pytest.raises(ValueError):
        x[0] = 0.0


def test_panel_nodes_shape_and_mass():
    lo, hi = np.array([0.0, 1.0, 3.0]), np.array([1.0, 3.0, 7.0])
    x, w = panel_nodes(lo, hi, 6)
    assert x.shape == w.shape == (3, 6)
    assert np.allclose(w.sum(axis=1), hi - lo)
    assert np.all((x > lo[:, None]) & (x < hi[:, None]))


def test_neumaier_recovers_cancelled_terms():
    vals = [1e16, 1.0, -1e16, 1.0]
    assert float(neumaier_sum(vals)) == 2.0


@given(st.lists(st.floats(min_value=-1e6, max_value=1e6), min_size=1, max_size=50))
def test_neumaier_matches_fsum(vals):
    assert float(neumaier_sum(vals)) == pytest.approx(math.fsum(vals), abs=1e-9)


def test_logsumexp():
    assert logsumexp([0.0, 0.0]) == pytest.approx(math.log(2.0))
    assert logsumexp([1000.0, 1000.0]) == pytest.approx(1000.0 + math.log(2.0))
    assert logsumexp([-np.inf, -np.inf]) == -np.inf
    out = logsumexp(np.array([[0.0, 1.0], [2.0, -np.inf]]), axis=1)
    assert np.allclose(out, [math.log(1 + math.e), 2.0])


@pytest.mark.parametrize("f, a, b, exact", [
    (np.exp, 0.0, 1.0, math.e - 1.0),
    (np.sqrt, 0.0, 1.0, 2.0 / 3.0),
    (lambda x: 1.0 / (1e-4 + x * x), -1.0, 1.0, 2e2 * math.atan(1e2)),
    (lambda x: np.abs(x - 0.3), 0.0, 1.0, 0.5 * (0.09 + 0.49)),
])
def test_adaptive_accuracy(f, a, b, exact):
    res = adaptive_gauss_legendre(pointwise(f), [a, b], rel_tol=1e-12)
    assert res.value == pytest.approx(exact, rel=1e-11)
    assert res.error <= 1e-12 * abs(res.value) + 1e-14
    assert res.n_panels >= 1


def test_adaptive_reports_failure():
    with pytest.raises(AccuracyError) as info:
        adaptive_gauss_legendre(pointwise(lambda x: 1.0 / np.sqrt(np.abs(x - 0.123456789))),
                                [0.0, 1.0], rel_tol=1e-15, abs_tol=1e-300, max_panels=32)
    assert math.isfinite(info.value.estimate)
    assert info.value.error_estimate > 0
