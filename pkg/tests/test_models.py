from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from conftest import stretched_log_ref
from fracflow import (
    ContactModel,
    DivergenceError,
    DomainError,
    EvaluationOverflowError,
    FrontIndicatorModel,
    PolynomialModel,
    PureBirthModel,
    QuadratureSpec,
    StretchedExpModel,
    subordinate_correlations,
    subordinate_correlations_log,
    subordinate_density,
    wright_median,
)
from fracflow.models import (
    front_position,
    front_position_numeric,
    front_subordinated_density,
    log_positive_sum,
    polynomial_ratio_limit,
    pure_birth_ratio_limit,
    stretched_exp_subordinated_corr_log,
    subordinated_corr,
    subordinated_corr_log,
)

TIGHT = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-300)
CORR_MODELS = (PureBirthModel(1.0, 1.0), PureBirthModel(0.7, 2.0), PureBirthModel(1.3, 0.0),
               ContactModel(1.0, 1.0), ContactModel(0.5, 2.0), StretchedExpModel(1.0, 0.5),
               StretchedExpModel(0.7, 1.5), PolynomialModel(1), PolynomialModel(2))


def test_log_positive_sum():
    assert log_positive_sum([0.0, 0.0]) == pytest.approx(math.log(2.0))
    assert log_positive_sum([1e4, -np.inf]) == 1e4
    assert log_positive_sum([]) == -math.inf


class TestValidation:
    @pytest.mark.parametrize("make", [lambda: PureBirthModel(z=0.0), lambda: PureBirthModel(rho0=-1.0),
                                      lambda: ContactModel(C=0.0), lambda: ContactModel(beta=-1.0),
                                      lambda: FrontIndicatorModel(v=0.0), lambda: StretchedExpModel(sigma=0.0),
                                      lambda: PolynomialModel(p=0), lambda: PolynomialModel(p=1.5)])
    def test_bad_parameters(self, make):
        with pytest.raises(DomainError):
            make()

    @pytest.mark.parametrize("model", CORR_MODELS[::2])
    def test_bad_arguments(self, model):
        with pytest.raises(DomainError):
            subordinated_corr(model, 0.5, -1, 1.0)
        with pytest.raises(DomainError):
            subordinated_corr(model, 0.5, 1, -1.0)
        with pytest.raises(DomainError):
            subordinated_corr(model, 1.5, 1, 1.0)

    def test_front_has_no_correlations(self):
        with pytest.raises(DomainError):
            subordinated_corr(FrontIndicatorModel(), 0.5, 1, 1.0)


class TestOracle:
    """Closed forms against quadrature subordination of the classical correlations."""

    @pytest.mark.parametrize("model", CORR_MODELS, ids=repr)
    @pytest.mark.parametrize("a", (0.3, 0.5, 0.8))
    def test_matches_quadrature(self, model, a):
        seq = model.correlation_sequence()
        if isinstance(model, StretchedExpModel) and model.sigma * (1 - a) >= 1:
            with pytest.raises(DivergenceError):
                subordinated_corr_log(model, a, 1, 1.0)
            with pytest.raises(DivergenceError):
                subordinate_correlations_log(a, seq, 1, 1.0, TIGHT)
            return
        for n in (1, 2, 3):
            for t in (0.5, 2.0):
                closed = subordinated_corr_log(model, a, n, t)
                quad = subordinate_correlations_log(a, seq, n, t, TIGHT)
                assert closed == pytest.approx(quad, abs=1e-9)

    def test_large_arguments_in_log_domain(self):
        m = ContactModel(1.0, 1.0)
        lv = subordinated_corr_log(m, 0.5, 3, 1e4)
        # E_{1/2}(x) ~ 2 exp(x^2)
        assert lv == pytest.approx((3 * 100.0) ** 2 + math.log(2.0), rel=1e-13)
        with pytest.raises(EvaluationOverflowError):
            subordinated_corr(m, 0.5, 3, 1e4)


class TestPureBirth:
    @pytest.mark.parametrize("a", (0.2, 0.5, 0.9))
    def test_first_correlation(self, a):
        m = PureBirthModel(2.0, 0.5)
        t = 3.0
        assert subordinated_corr(m, a, 1, t) == pytest.approx(0.5 + 2.0 * t ** a / math.gamma(1 + a), rel=1e-13)

    def test_second_correlation_zero_initial(self):
        m = PureBirthModel(1.0, 0.0)
        a, t = 0.5, 4.0
        # E[(tau t^a)^2] = 2 t^{2a}/Gamma(2a+1)
        assert subordinated_corr(m, a, 2, t) == pytest.approx(2 * t ** (2 * a) / math.gamma(2 * a + 1), rel=1e-13)

    def test_ratio_limit_at_half(self):
        assert pure_birth_ratio_limit(0.5, 2) == pytest.approx(math.pi / 2, rel=1e-14)
        assert pure_birth_ratio_limit(1.0, 3) == pytest.approx(1.0, rel=1e-14)

    @pytest.mark.parametrize("a", (0.5, 0.8))
    @pytest.mark.parametrize("n", (2, 3, 4))
    def test_ratio_converges(self, a, n):
        m = PureBirthModel()
        r = lambda t: math.exp(subordinated_corr_log(m, a, n, t) - n * subordinated_corr_log(m, a, 1, t))
        lim = pure_birth_ratio_limit(a, n)
        assert abs(r(1e8) - lim) < abs(r(1e2) - lim)
        assert r(1e8) == pytest.approx(lim, rel=5e-3)


class TestContact:
    def test_half_closed_form(self):
        m = ContactModel(1.5, 0.8)
        t, n = 2.0, 2
        x = 0.8 * n * math.sqrt(t)
        assert subordinated_corr(m, 0.5, n, t) == pytest.approx(1.5 ** 2 * special.erfcx(-x), rel=1e-13)

    def test_classical(self):
        m = ContactModel(1.5, 0.8)
        assert subordinated_corr(m, 1.0, 3, 2.0) == float(m.correlation(3, 2.0))

    def test_classical_overflow(self):
        with pytest.raises(EvaluationOverflowError):
            subordinated_corr(ContactModel(), 1.0, 10, 100.0)


class TestStretched:
    # (sigma, alpha, t) with a series peak index small enough for the reference
    @pytest.mark.parametrize("sigma, a, t", [(0.5, 0.5, 0.5), (0.5, 0.5, 10.0), (0.5, 0.5, 1e3),
                                             (1.0, 0.5, 0.5), (1.0, 0.5, 10.0), (1.0, 0.5, 1e3),
                                             (1.5, 0.5, 0.5), (1.5, 0.8, 0.5), (1.5, 0.8, 10.0),
                                             (3.0, 0.8, 0.5)])
    def test_series_against_reference(self, sigma, a, t):
        m = StretchedExpModel(1.0, sigma)
        for n in (1, 3):
            ref = float(stretched_log_ref(a, n, t, sigma))
            assert stretched_exp_subordinated_corr_log(m, a, n, t) == pytest.approx(ref, rel=1e-13, abs=1e-13)

    def test_continuous_index_branch(self):
        # peak index far beyond the direct-sum limit
        m = StretchedExpModel(1.0, 1.0)
        a, n = 0.5, 2
        ref = float(stretched_log_ref(a, n, 1e4, 1.0))
        assert stretched_exp_subordinated_corr_log(m, a, n, 1e4) == pytest.approx(ref, rel=1e-14)
        # sigma = 1 is the contact model with beta = 1
        for t in (1e4, 1e6, 1e8):
            assert stretched_exp_subordinated_corr_log(m, a, n, t) == pytest.approx(
                subordinated_corr_log(ContactModel(1.0, 1.0), a, n, t), rel=1e-13)

    @pytest.mark.parametrize("sigma, a", [(3.0, 0.5), (2.0, 0.5), (5.0, 0.8)])
    def test_divergence(self, sigma, a):
        with pytest.raises(DivergenceError):
            stretched_exp_subordinated_corr_log(StretchedExpModel(1.0, sigma), a, 1, 1.0)

    def test_mu(self):
        assert StretchedExpModel(1.0, 1.5).mu(0.5) == 0.25

    def test_leading_growth(self):
        # ln r^(n) grows like t^(sigma alpha / mu)
        m = StretchedExpModel(1.0, 1.5)
        a = 0.5
        mu = m.mu(a)
        l1, l2 = (stretched_exp_subordinated_corr_log(m, a, 1, t) for t in (1e5, 1e6))
        slope = math.log(l2 / l1) / math.log(10.0)
        assert slope == pytest.approx(m.sigma * a / mu, rel=0.02)


class TestPolynomial:
    def test_first_correlation(self):
        m = PolynomialModel(1)
        a, t = 0.4, 5.0
        assert subordinated_corr(m, a, 1, t) == pytest.approx(1 + t ** a / math.gamma(1 + a), rel=1e-13)

    def test_ratio_limit_relates_to_pure_birth(self):
        # p = 1 has the same t -> inf ratio as pure birth with rho0 = 1, z = 1
        for a in (0.3, 0.7):
            for n in (2, 3):
                assert polynomial_ratio_limit(PolynomialModel(1), a, n) == pytest.approx(
                    pure_birth_ratio_limit(a, n), rel=1e-13)


class TestFront:
    def test_inside_core(self):
        assert front_subordinated_density(FrontIndicatorModel(), 0.5, 3.0, 0.7) == 1.0

    def test_half_explicit(self):
        m = FrontIndicatorModel(2.0)
        t, x = 4.0, 3.5
        s = (x - 1.0) / (2.0 * math.sqrt(t))
        assert front_subordinated_density(m, 0.5, t, x) == pytest.approx(special.erfc(s / 2), rel=1e-14)

    @pytest.mark.parametrize("a", (0.3, 0.5, 0.7))
    @pytest.mark.parametrize("t", (1.0, 10.0))
    def test_front_law_against_quadrature(self, a, t):
        m = FrontIndicatorModel(1.0)
        x = front_position(m, a, t)
        assert abs(subordinate_density(a, m.flow(), t, np.array([x])) - 0.5) <= 1e-6
        assert front_position_numeric(m, a, t) == pytest.approx(x, rel=1e-9)

    def test_median_at_half(self):
        assert wright_median(0.5) == pytest.approx(2 * special.erfcinv(0.5), abs=1e-4)

    @pytest.mark.parametrize("a", (0.3, 0.5, 0.9))
    def test_sublinear(self, a):
        m = FrontIndicatorModel(1.0)
        t = np.logspace(0, 3, 40)
        speed = np.array([front_position(m, a, tk) / tk for tk in t])
        assert np.all(np.diff(speed) < 0)

    def test_classical(self):
        m = FrontIndicatorModel(0.5)
        assert front_position(m, 1.0, 4.0) == 3.0
        assert front_subordinated_density(m, 1.0, 4.0, 2.9) == 1.0
        assert front_subordinated_density(m, 1.0, 4.0, 3.1) == 0.0


class TestProperties:
    @given(st.sampled_from(CORR_MODELS[:-2] + CORR_MODELS[-2:]), st.floats(min_value=0.2, max_value=1.0),
           st.integers(min_value=2, max_value=6), st.floats(min_value=1e-3, max_value=1e3))
    def test_jensen(self, model, a, n, t):
        # r^(n) = E[rho^n] >= (E rho)^n for the Wright mixture
        if isinstance(model, StretchedExpModel) and model.sigma * (1 - a) >= 1:
            return
        lr = subordinated_corr_log(model, a, n, t) - n * subordinated_corr_log(model, a, 1, t)
        assert lr >= -1e-10 * max(1.0, abs(subordinated_corr_log(model, a, n, t)))

    @given(st.sampled_from(CORR_MODELS), st.floats(min_value=0.2, max_value=0.99),
           st.integers(min_value=1, max_value=5), st.floats(min_value=1e-3, max_value=1e3),
           st.floats(min_value=1.01, max_value=10.0))
    def test_increasing_in_time(self, model, a, n, t, f):
        if isinstance(model, StretchedExpModel) and model.sigma * (1 - a) >= 1:
            return
        assert subordinated_corr_log(model, a, n, t * f) > subordinated_corr_log(model, a, n, t)

    @given(st.sampled_from(CORR_MODELS), st.integers(min_value=0, max_value=6),
           st.floats(min_value=0.0, max_value=20.0))
    def test_classical_degeneration_is_exact(self, model, n, t):
        classical = float(model.correlation(n, t)) if n else 1.0
        try:
            assert subordinated_corr(model, 1.0, n, t) == classical
        except EvaluationOverflowError:
            assert not math.isfinite(classical) or classical > 1e300
        assert subordinate_correlations(1.0, model.correlation_sequence(), n, t) == float(model.correlation(n, t))
