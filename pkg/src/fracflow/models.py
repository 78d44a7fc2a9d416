"""Catalog of classical kinetic flows and their subordinated correlations.

Every closed form below is a finite sum or series with positive terms whose
weights involve factorials and Gamma functions; all of them are evaluated in
the log domain (see :func:`log_positive_sum`).  At ``alpha = 1`` each
function returns the classical expression itself, so the classical limit is
reproduced bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .errors import AccuracyError, DivergenceError, DomainError, EvaluationOverflowError
from .quadrature import gauss_legendre
from .specfun import (
    LOG_FLOAT_MAX,
    as_alpha,
    gamma_ln,
    mittag_leffler,
    mittag_leffler_log,
    wright_median,
    wright_tail,
)
from .subordination import CorrelationSequence, DensityFlow, GrowthClass, QuadratureSpec, stretch_diverges


def log_positive_sum(log_terms) -> float:
    """``ln sum exp(log_terms)`` for positive terms, scaled by the largest term
    and summed with correct rounding."""
    lt = np.asarray(log_terms, dtype=float).ravel()
    lt = lt[np.isfinite(lt)]
    if lt.size == 0:
        return -math.inf
    top = float(np.max(lt))
    return top + math.log(math.fsum(np.exp(lt - top)))


def _exp_or_overflow(lv: float, what: str) -> float:
    if lv > LOG_FLOAT_MAX:
        raise EvaluationOverflowError(f"{what} overflows", log_value=lv)
    return math.exp(lv)


def _check_order(n: int, minimum: int = 0) -> int:
    if int(n) != n or n < minimum:
        raise DomainError(f"correlation order must be an integer >= {minimum}, got {n!r}")
    return int(n)


def _check_time(t: float) -> float:
    t = float(t)
    if not (math.isfinite(t) and t >= 0):
        raise DomainError(f"time must be finite and non-negative, got {t!r}")
    return t


# ---------------------------------------------------------------------------
# Surgailis pure birth
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PureBirthModel:
    """Zero-mortality birth with intensity ``z``; ``rho_t = rho0 + z t``."""

    z: float = 1.0
    rho0: float = 1.0

    def __post_init__(self):
        if not self.z > 0:
            raise DomainError("birth intensity z must be positive")
        if not self.rho0 >= 0:
            raise DomainError("initial density rho0 must be non-negative")

    def density(self, t, x=None):
        return self.rho0 + self.z * np.asarray(t, dtype=float)

    def correlation(self, n: int, t):
        return (self.rho0 + self.z * np.asarray(t, dtype=float)) ** n

    def log_correlation(self, n: int, t):
        with np.errstate(divide="ignore"):
            return n * np.log(self.rho0 + self.z * np.asarray(t, dtype=float))

    def correlation_sequence(self) -> CorrelationSequence:
        return CorrelationSequence(self.correlation, self.log_correlation,
                                   lambda n: GrowthClass.polynomial(n))

    def flow(self) -> DensityFlow:
        return DensityFlow(1, lambda t, x: self.density(t), self.correlation_sequence(),
                           GrowthClass.polynomial(1))


def pure_birth_subordinated_corr_log(model: PureBirthModel, alpha, n: int, t: float) -> float:
    a = as_alpha(alpha)
    n = _check_order(n)
    t = _check_time(t)
    if n == 0:
        return 0.0
    if a == 1.0 or t == 0:
        return float(model.log_correlation(n, t))
    # C(n,j) j! = n!/(n-j)!
    j = np.arange(n + 1, dtype=float)
    if model.rho0 > 0:
        lt = (n - j) * math.log(model.rho0)
    else:
        lt = np.where(j == n, 0.0, -np.inf)
    lt = lt + (special.gammaln(n + 1.0) - special.gammaln(n - j + 1.0)
               + j * math.log(model.z * t ** a) - special.gammaln(a * j + 1.0))
    return log_positive_sum(lt)


def pure_birth_subordinated_corr(model: PureBirthModel, alpha, n: int, t: float) -> float:
    """``r^(n)_{t,alpha} = sum_j C(n,j) rho0^(n-j) (z t^alpha)^j j! / Gamma(alpha j + 1)``."""
    a = as_alpha(alpha)
    n = _check_order(n)
    t = _check_time(t)
    if n == 0:
        return 1.0
    if a == 1.0:
        return float(model.correlation(n, t))
    return _exp_or_overflow(pure_birth_subordinated_corr_log(model, a, n, t), "pure-birth correlation")


def pure_birth_ratio_limit(alpha, n: int) -> float:
    """``lim_t r^(n) / (r^(1))^n = (n-1)! / (alpha Gamma(n alpha)) * Gamma(alpha+1)^n``."""
    a = as_alpha(alpha)
    n = _check_order(n, 2)
    return math.exp(gamma_ln(n) - math.log(a) - gamma_ln(n * a) + n * gamma_ln(a + 1.0))


# ---------------------------------------------------------------------------
# Contact model (kinetic limit, supercritical)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContactModel:
    """Kinetic-limit correlations ``r_t^(n) = C^n exp(beta n t)``."""

    C: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if not (self.C > 0 and self.beta > 0):
            raise DomainError("contact model needs C > 0 and beta > 0")

    def density(self, t, x=None):
        return self.C * np.exp(self.beta * np.asarray(t, dtype=float))

    def correlation(self, n: int, t):
        return self.C ** n * np.exp(self.beta * n * np.asarray(t, dtype=float))

    def log_correlation(self, n: int, t):
        return n * math.log(self.C) + self.beta * n * np.asarray(t, dtype=float)

    def correlation_sequence(self) -> CorrelationSequence:
        return CorrelationSequence(self.correlation, self.log_correlation,
                                   lambda n: GrowthClass.exponential_stretch(self.beta * n, 1.0))

    def flow(self) -> DensityFlow:
        return DensityFlow(1, lambda t, x: self.density(t), self.correlation_sequence(),
                           GrowthClass.exponential_stretch(self.beta, 1.0))


def contact_subordinated_corr_log(model: ContactModel, alpha, n: int, t: float) -> float:
    """``n ln C + ln E_alpha(beta n t^alpha)``."""
    a = as_alpha(alpha)
    n = _check_order(n)
    t = _check_time(t)
    if n == 0:
        return 0.0
    if a == 1.0:
        return float(model.log_correlation(n, t))
    return n * math.log(model.C) + mittag_leffler_log(a, model.beta * n * t ** a)


def contact_subordinated_corr(model: ContactModel, alpha, n: int, t: float) -> float:
    """``r^(n)_{t,alpha} = C^n E_alpha(beta n t^alpha)``."""
    a = as_alpha(alpha)
    n = _check_order(n)
    t = _check_time(t)
    if n == 0:
        return 1.0
    if a == 1.0:
        lv = float(model.log_correlation(n, t))
        if lv > LOG_FLOAT_MAX:
            raise EvaluationOverflowError("contact correlation overflows", log_value=lv)
        return float(model.correlation(n, t))
    try:
        ml = mittag_leffler(a, model.beta * n * t ** a).value
    except EvaluationOverflowError:
        ml = math.inf
    value = model.C ** n * ml
    if not math.isfinite(value):
        raise EvaluationOverflowError("contact correlation overflows",
                                      log_value=contact_subordinated_corr_log(model, a, n, t))
    return value


# ---------------------------------------------------------------------------
# Front propagation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrontIndicatorModel:
    """``rho_t(x) = 1`` on ``[-1 - v t, 1 + v t]``, else 0 (one dimension)."""

    v: float = 1.0

    def __post_init__(self):
        if not self.v > 0:
            raise DomainError("front speed v must be positive")

    def density(self, t, x):
        t = np.asarray(t, dtype=float)
        return np.where(abs(float(np.ravel(x)[0])) <= 1.0 + self.v * t, 1.0, 0.0)

    def kernel_breakpoint(self, alpha: float, t: float, x) -> list[float]:
        """Location ``A(x, t) = (|x| - 1)/(v t^alpha)`` of the jump in the kernel variable."""
        ax = abs(float(np.ravel(x)[0]))
        if ax <= 1.0 or t == 0:
            return []
        return [(ax - 1.0) / (self.v * t ** alpha)]

    def flow(self) -> DensityFlow:
        return DensityFlow(1, self.density, None, GrowthClass.bounded(), self.kernel_breakpoint)


def front_subordinated_density(model: FrontIndicatorModel, alpha, t: float, x: float) -> float:
    """``rho_t^alpha(x) = Psi_alpha((|x| - 1) / (v t^alpha))`` outside the core, 1 inside."""
    a = as_alpha(alpha)
    t = _check_time(t)
    ax = abs(float(x))
    if a == 1.0 or t == 0:
        return float(model.density(t, ax))
    if ax <= 1.0:
        return 1.0
    return wright_tail(a, (ax - 1.0) / (model.v * t ** a))


def front_position(model: FrontIndicatorModel, alpha, t: float) -> float:
    """``|x| = 1 + s_alpha v t^alpha`` with ``s_alpha`` the Wright median."""
    a = as_alpha(alpha)
    t = _check_time(t)
    if a == 1.0:
        return 1.0 + model.v * t
    return 1.0 + wright_median(a) * model.v * t ** a


def front_position_numeric(model: FrontIndicatorModel, alpha, t: float,
                           spec: QuadratureSpec | None = None) -> float:
    """Root in ``|x|`` of the quadrature-subordinated density minus 1/2."""
    from .subordination import subordinate_density

    a = as_alpha(alpha)
    t = _check_time(t)
    if t == 0:
        return 1.0
    flow = model.flow()
    f = lambda x: subordinate_density(a, flow, t, np.array([x]), spec) - 0.5
    hi = 1.0 + model.v * max(t, 1.0) ** a
    while f(hi) > 0:
        hi = 1.0 + 2.0 * (hi - 1.0)
    return optimize.brentq(f, 1.0 + 1e-12, hi, xtol=1e-13, rtol=1e-14)


# ---------------------------------------------------------------------------
# Stretched-exponential density
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StretchedExpModel:
    """Homogeneous density ``rho_t = exp(beta t^sigma)``; ``k^(n) = exp(beta n t^sigma)``."""

    beta: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (self.beta > 0 and self.sigma > 0):
            raise DomainError("stretched-exponential model needs beta > 0 and sigma > 0")

    def density(self, t, x=None):
        return np.exp(self.beta * np.asarray(t, dtype=float) ** self.sigma)

    def correlation(self, n: int, t):
        return np.exp(self.beta * n * np.asarray(t, dtype=float) ** self.sigma)

    def log_correlation(self, n: int, t):
        return self.beta * n * np.asarray(t, dtype=float) ** self.sigma

    def correlation_sequence(self) -> CorrelationSequence:
        return CorrelationSequence(self.correlation, self.log_correlation,
                                   lambda n: GrowthClass.exponential_stretch(self.beta * n, self.sigma))

    def flow(self) -> DensityFlow:
        return DensityFlow(1, lambda t, x: self.density(t), self.correlation_sequence(),
                           GrowthClass.exponential_stretch(self.beta, self.sigma))

    def mu(self, alpha) -> float:
        """Asymptotic exponent ``mu = 1 + sigma (alpha - 1)``."""
        return 1.0 + self.sigma * (as_alpha(alpha) - 1.0)


DIRECT_SUM_LIMIT = 4096


def _stretched_log_term(k, log_nz, sigma, alpha):
    k = np.asarray(k, dtype=float)
    return (k * log_nz - special.gammaln(k + 1.0) + special.gammaln(sigma * k + 1.0)
            - special.gammaln(sigma * alpha * k + 1.0))


def _stretched_peak(log_nz, sigma, alpha, mu) -> float:
    """Maximiser of the continuous log-term, by Newton on the digamma equation."""
    k = math.exp((log_nz + sigma * math.log(sigma) - sigma * alpha * math.log(sigma * alpha)) / mu)
    if not math.isfinite(k) or k > 1e300:
        raise AccuracyError("series peak beyond the representable range", math.inf, math.inf)
    k = max(k, 0.0)
    for _ in range(60):
        d1 = (log_nz - special.digamma(k + 1.0) + sigma * special.digamma(sigma * k + 1.0)
              - sigma * alpha * special.digamma(sigma * alpha * k + 1.0))
        d2 = (-special.polygamma(1, k + 1.0) + sigma ** 2 * special.polygamma(1, sigma * k + 1.0)
              - (sigma * alpha) ** 2 * special.polygamma(1, sigma * alpha * k + 1.0))
        if d2 >= 0:
            break
        step = -d1 / d2
        k_new = max(k + step, 0.0)
        if abs(k_new - k) <= 1e-12 * max(1.0, k):
            k = k_new
            break
        k = k_new
    return k


def stretched_exp_subordinated_corr_log(model: StretchedExpModel, alpha, n: int, t: float,
                                        drop: float = 60.0) -> float:
    """``ln r^(n)_{t,alpha}`` for the stretched-exponential flow.

    ``r = sum_k (n z)^k / k! * Gamma(sigma k + 1) / Gamma(sigma alpha k + 1)``
    with ``z = beta t^(sigma alpha)``.  Terms are summed directly around their
    peak (all terms within ``drop`` of the largest log-term); when the peak
    index is too large for that, the sum is replaced by the integral over a
    continuous index, whose Euler-Maclaurin corrections are below
    ``exp(-drop)`` relative because the summand is negligible at both ends.
    """
    a = as_alpha(alpha)
    n = _check_order(n)
    t = _check_time(t)
    if stretch_diverges(a, model.sigma):
        raise DivergenceError(
            f"series diverges: sigma*(1-alpha) = {model.sigma * (1.0 - a):g} >= 1")
    if n == 0:
        return 0.0
    if a == 1.0:
        return float(model.log_correlation(n, t))
    if t == 0:
        return 0.0
    sigma = model.sigma
    mu = model.mu(a)
    log_nz = math.log(n * model.beta) + sigma * a * math.log(t)
    k_peak = _stretched_peak(log_nz, sigma, a, mu)
    peak = float(_stretched_log_term(k_peak, log_nz, sigma, a))
    width = math.sqrt(max(k_peak, 1.0) / mu)

    def edge(direction):
        step = width
        while True:
            k = k_peak + direction * step
            if direction < 0 and k <= 0:
                return 0.0
            if float(_stretched_log_term(k, log_nz, sigma, a)) < peak - drop:
                return k
            step *= 1.5

    k_lo, k_hi = edge(-1), edge(1)
    if k_hi - k_lo <= DIRECT_SUM_LIMIT:
        k = np.arange(math.floor(k_lo), math.ceil(k_hi) + 1, dtype=float)
        return log_positive_sum(_stretched_log_term(k, log_nz, sigma, a))
    # continuous-index integral, panels of half the peak width
    n_panels = int(min(1024, max(64, math.ceil(2 * (k_hi - k_lo) / width))))
    edges = np.linspace(k_lo, k_hi, n_panels + 1)
    x, w = gauss_legendre(20)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = mid[:, None] + half[:, None] * x
    logs = _stretched_log_term(nodes, log_nz, sigma, a) + np.log(half[:, None] * w)
    return log_positive_sum(logs)


def stretched_exp_subordinated_corr(model: StretchedExpModel, alpha, n: int, t: float) -> float:
    a = as_alpha(alpha)
    if a == 1.0:
        return float(model.correlation(_check_order(n), _check_time(t)))
    return _exp_or_overflow(stretched_exp_subordinated_corr_log(model, a, n, t),
                            "stretched-exponential correlation")


# ---------------------------------------------------------------------------
# Polynomial density
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolynomialModel:
    """Homogeneous density ``rho_t = (1 + t)^p``."""

    p: int = 1

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise DomainError("polynomial degree p must be a positive integer")

    def density(self, t, x=None):
        return (1.0 + np.asarray(t, dtype=float)) ** self.p

    def correlation(self, n: int, t):
        return (1.0 + np.asarray(t, dtype=float)) ** (self.p * n)

    def log_correlation(self, n: int, t):
        return self.p * n * np.log1p(np.asarray(t, dtype=float))

    def correlation_sequence(self) -> CorrelationSequence:
        return CorrelationSequence(self.correlation, self.log_correlation,
                                   lambda n: GrowthClass.polynomial(self.p * n))

    def flow(self) -> DensityFlow:
        return DensityFlow(1, lambda t, x: self.density(t), self.correlation_sequence(),
                           GrowthClass.polynomial(self.p))


def polynomial_subordinated_corr_log(model: PolynomialModel, alpha, n: int, t: float) -> float:
    a = as_alpha(alpha)
    n = _check_order(n)
    t = _check_time(t)
    if n == 0 or t == 0:
        return 0.0
    if a == 1.0:
        return float(model.log_correlation(n, t))
    m = model.p * n
    j = np.arange(m + 1, dtype=float)
    lt = (special.gammaln(m + 1.0) - special.gammaln(m - j + 1.0) + a * j * math.log(t)
          - special.gammaln(a * j + 1.0))
    return log_positive_sum(lt)


def polynomial_subordinated_corr(model: PolynomialModel, alpha, n: int, t: float) -> float:
    """``sum_{j=0}^{np} (np)!/(np-j)! t^(alpha j) / Gamma(alpha j + 1)``."""
    a = as_alpha(alpha)
    n = _check_order(n)
    t = _check_time(t)
    if n == 0:
        return 1.0
    if a == 1.0:
        return float(model.correlation(n, t))
    return _exp_or_overflow(polynomial_subordinated_corr_log(model, a, n, t), "polynomial correlation")


def polynomial_ratio_limit(model: PolynomialModel, alpha, n: int) -> float:
    """``lim_t r^(n)/(r^(1))^n = (np)!/Gamma(alpha n p + 1) * (Gamma(alpha p + 1)/p!)^n``."""
    a = as_alpha(alpha)
    p = model.p
    return math.exp(gamma_ln(n * p + 1.0) - gamma_ln(a * n * p + 1.0)
                    + n * (gamma_ln(a * p + 1.0) - gamma_ln(p + 1.0)))


# ---------------------------------------------------------------------------
# Uniform access by name (CLI, intermittency)
# ---------------------------------------------------------------------------

CATALOG = ("pure-birth", "contact", "front", "stretched-exp", "polynomial")


def subordinated_corr_log(model, alpha, n: int, t: float) -> float:
    """Closed-form ``ln r^(n)_{t,alpha}`` for any correlation model of the catalog."""
    if isinstance(model, PureBirthModel):
        return pure_birth_subordinated_corr_log(model, alpha, n, t)
    if isinstance(model, ContactModel):
        return contact_subordinated_corr_log(model, alpha, n, t)
    if isinstance(model, StretchedExpModel):
        return stretched_exp_subordinated_corr_log(model, alpha, n, t)
    if isinstance(model, PolynomialModel):
        return polynomial_subordinated_corr_log(model, alpha, n, t)
    raise DomainError(f"{type(model).__name__} has no correlation sequence")


def subordinated_corr(model, alpha, n: int, t: float) -> float:
    if isinstance(model, PureBirthModel):
        return pure_birth_subordinated_corr(model, alpha, n, t)
    if isinstance(model, ContactModel):
        return contact_subordinated_corr(model, alpha, n, t)
    if isinstance(model, StretchedExpModel):
        return stretched_exp_subordinated_corr(model, alpha, n, t)
    if isinstance(model, PolynomialModel):
        return polynomial_subordinated_corr(model, alpha, n, t)
    raise DomainError(f"{type(model).__name__} has no correlation sequence")
