"""Subordination of classical flows by the M-Wright kernel.

The fractional state at time t is the Wright mixture of classical states at the
rescaled times ``tau * t^alpha``::

    f_alpha(t) = int_0^inf Phi_alpha(tau) f(tau t^alpha) d tau

Integrals are computed on ``[0, T_trunc]`` with adaptive Gauss-Legendre panels.
The kernel values ``ln Phi_alpha`` at the nodes of a panel are cached per
``(alpha, panel)``, and ``T_trunc`` is taken from a fixed geometric ladder, so
that repeated subordinations (e.g. along a time grid) reuse the kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Literal, Sequence

import numpy as np

from .errors import DivergenceError, DomainError, EvaluationOverflowError
from .quadrature import adaptive_gauss_legendre, panel_nodes
from .specfun import LOG_FLOAT_MAX, as_alpha, wright_log_pdf, wright_log_tail

ORDER = 20
KAPPA = 2.0          # safety factor on the sup of |g| in the truncation bound
_LADDER_BASE = 2.0 ** 0.25
_INITIAL_PANELS = 16
DIVERGENCE_SLACK = 1e-12


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_panels: int = 4096
    truncation_tail_mass: float = 1e-12

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.truncation_tail_mass > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_panels < 8:
            raise DomainError("max_panels must be at least 8")


@dataclass(frozen=True)
class GrowthClass:
    """Declared growth of a classical flow in its time argument.

    ``exponential_stretch`` stands for ``exp(beta * t^sigma)``; only ``sigma``
    enters the divergence guard ``sigma * (1 - alpha) < 1``.
    """

    kind: Literal["bounded", "polynomial", "exponential_stretch", "other"] = "other"
    degree: float = 0.0
    beta: float = 0.0
    sigma: float = 0.0

    @classmethod
    def bounded(cls) -> "GrowthClass":
        return cls("bounded")

    @classmethod
    def polynomial(cls, degree: float) -> "GrowthClass":
        return cls("polynomial", degree=float(degree))

    @classmethod
    def exponential_stretch(cls, beta: float, sigma: float) -> "GrowthClass":
        return cls("exponential_stretch", beta=float(beta), sigma=float(sigma))

    @classmethod
    def other(cls) -> "GrowthClass":
        return cls("other")


@dataclass
class CorrelationSequence:
    """``(n, t) -> r_t^(n)``; ``eval``/``log_eval`` must accept array ``t``."""

    eval: Callable[[int, np.ndarray], np.ndarray]
    log_eval: Callable[[int, np.ndarray], np.ndarray] | None = None
    growth: Callable[[int], GrowthClass] = field(default=lambda n: GrowthClass.other())


@dataclass
class DensityFlow:
    """Classical kinetic density ``rho_t(x)``.

    ``eval(t, x)`` must accept an array of times for a fixed point ``x``.
    ``breakpoints(t, x)`` lists kernel-variable locations where
    ``tau -> eval(tau t^alpha, x)`` is discontinuous; they become panel edges.
    """

    dim: int
    eval: Callable[[np.ndarray, np.ndarray], np.ndarray]
    corr: CorrelationSequence | None = None
    growth_class: GrowthClass = field(default_factory=GrowthClass.other)
    breakpoints: Callable[[float, float, np.ndarray], Sequence[float]] | None = None


def stretch_diverges(alpha: float, sigma: float) -> bool:
    """``sigma (1 - alpha) >= 1``, with the boundary widened by rounding so
    that e.g. ``sigma = 5, alpha = 0.8`` counts as divergent."""
    return alpha < 1.0 and sigma * (1.0 - alpha) >= 1.0 - DIVERGENCE_SLACK


def check_convergence(alpha: float, growth: GrowthClass) -> None:
    """Refuse integrands growing like ``exp(c tau^sigma)`` with ``sigma (1-alpha) >= 1``."""
    if growth.kind == "exponential_stretch":
        if stretch_diverges(alpha, growth.sigma):
            raise DivergenceError(
                f"Wright mixture of exp(beta t^sigma) diverges: sigma*(1-alpha) = "
                f"{growth.sigma * (1.0 - alpha):g} >= 1"
            )


@lru_cache(maxsize=200_000)
def _panel_log_kernel(alpha: float, lo: float, hi: float) -> np.ndarray:
    x, _ = panel_nodes(np.array([lo]), np.array([hi]), ORDER)
    out = wright_log_pdf(alpha, x[0])
    out.setflags(write=False)
    return out


def _log_kernel(alpha: float, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    return np.array([_panel_log_kernel(alpha, float(a), float(b)) for a, b in zip(lo, hi)])


def _ladder_up(x: float) -> float:
    """Smallest ladder value ``2^(k/4) >= x``."""
    k = math.ceil(math.log(max(x, 1e-300), _LADDER_BASE) - 1e-9)
    return _LADDER_BASE ** k


@lru_cache(maxsize=4096)
def _kernel_truncation(alpha: float, log_mass: float) -> float:
    """Smallest ladder point with ``ln Psi_alpha(T) <= log_mass``."""
    T = 1.0
    while wright_log_tail(alpha, T) > log_mass:
        T *= _LADDER_BASE
    while T > _LADDER_BASE and wright_log_tail(alpha, T / _LADDER_BASE) <= log_mass:
        T /= _LADDER_BASE
    return T


def _safe_log_abs(values) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(np.asarray(values, dtype=float)))


def _truncation(alpha: float, log_abs_g: Callable[[np.ndarray], np.ndarray],
                growth: GrowthClass, spec: QuadratureSpec) -> tuple[float, float]:
    """Choose ``T_trunc`` and the log-scale of the integrand.

    Bounded and polynomial classes: grow ``T`` until
    ``Psi(T) * sup_{[0, KAPPA T]} |g| <= tail_mass * max(1, |g(1)|)``.
    Other classes: scan ``h = ln Phi + ln|g|`` along the ladder past its peak
    until it has fallen ``ln(tail_mass)`` below the peak and keeps falling.
    Returns ``(T, h_peak)``; ``h_peak`` is used as a log-domain shift.
    """
    log_mass = math.log(spec.truncation_tail_mass)
    T = _kernel_truncation(alpha, log_mass)
    if growth.kind in ("bounded", "polynomial"):
        scale = max(0.0, float(log_abs_g(np.array([1.0]))[0]))
        while True:
            probe = np.linspace(0.0, KAPPA * T, 65)
            sup = float(np.max(log_abs_g(probe)))
            if wright_log_tail(alpha, T) + sup <= log_mass + scale:
                break
            T *= _LADDER_BASE
        grid = np.linspace(0.0, T, 257)[1:]
        h = wright_log_pdf(alpha, grid) + log_abs_g(grid)
        return T, float(np.nanmax(np.where(np.isnan(h), -np.inf, h)))
    k = 0
    grid = [0.0]
    h_vals = []
    peak = -np.inf
    falling = 0
    tau = _LADDER_BASE ** -40
    while True:
        lg = float(log_abs_g(np.array([tau]))[0])
        if lg == math.inf:
            raise EvaluationOverflowError(
                f"integrand overflows at tau={tau:.6g}; pass its logarithm instead", log_value=math.inf)
        h = float(wright_log_pdf(alpha, tau) + lg)
        if math.isnan(h):
            h = -math.inf
        h_vals.append(h)
        grid.append(tau)
        if h > peak:
            peak = h
            falling = 0
        elif len(h_vals) > 1 and h <= h_vals[-2]:
            falling += 1
        if tau >= T and peak > -math.inf and h < peak + log_mass - 5.0 and falling >= 4:
            return max(T, tau), peak
        k += 1
        if k > 4000 or tau > 1e150:
            raise DomainError("could not locate a truncation point for the subordination integral")
        tau *= _LADDER_BASE


def _initial_edges(T: float, breakpoints: Sequence[float] = ()) -> np.ndarray:
    edges = np.linspace(0.0, T, _INITIAL_PANELS + 1)
    extra = [b for b in breakpoints if 0.0 < b < T]
    return np.unique(np.concatenate([edges, extra]))


def _vectorized(g: Callable) -> Callable[[np.ndarray], np.ndarray]:
    def call(x):
        x = np.asarray(x, dtype=float)
        try:
            out = np.asarray(g(x), dtype=float)
        except (TypeError, ValueError):
            out = np.array([g(float(v)) for v in x.ravel()], dtype=float)
        return np.broadcast_to(out, x.shape) if out.shape != x.shape else out
    return call


def _integrate(alpha, g_vec, log_abs_g, growth, spec, breakpoints=(), log_g=None):
    """Core integrator; returns ``(value, log_shift)`` with the integral equal to
    ``value * exp(log_shift)``."""
    check_convergence(alpha, growth)
    T, shift = _truncation(alpha, log_abs_g, growth, spec)
    if not math.isfinite(shift):
        return 0.0, 0.0
    if log_g is None and shift < LOG_FLOAT_MAX - 5:
        shift = 0.0

    def integrand(lo, hi):
        x, _ = panel_nodes(lo, hi, ORDER)
        lk = _log_kernel(alpha, lo, hi)
        if log_g is not None:
            with np.errstate(invalid="ignore"):
                expo = lk + log_g(x) - shift
            return np.exp(np.where(np.isnan(expo), -np.inf, expo))
        return np.exp(lk - shift) * g_vec(x)

    abs_tol = spec.abs_tol * math.exp(-shift) if shift < 700 else 0.0
    res = adaptive_gauss_legendre(
        integrand, _initial_edges(T, breakpoints), rel_tol=spec.rel_tol,
        abs_tol=max(abs_tol, 1e-300), max_panels=spec.max_panels, order=ORDER)
    return res.value, shift


def subordinate_scalar(alpha, t: float, g: Callable, spec: QuadratureSpec | None = None,
                       growth: GrowthClass | None = None,
                       breakpoints: Sequence[float] = ()) -> float:
    """``int_0^inf Phi_alpha(tau) g(tau) d tau`` for a pre-rescaled ``g``.

    The caller composes the time rescaling, ``g(tau) = f(tau t^alpha)``.  At
    ``alpha = 1`` the kernel is the point mass at 1 and ``g(1)`` is returned
    exactly; at ``t = 0`` the value is ``g(0)``.
    """
    a = as_alpha(alpha)
    spec = spec or QuadratureSpec()
    growth = growth or GrowthClass.other()
    if a == 1.0:
        return float(g(1.0))
    if t == 0:
        return float(g(0.0))
    check_convergence(a, growth)
    g_vec = _vectorized(g)
    value, shift = _integrate(a, g_vec, lambda x: _safe_log_abs(g_vec(x)), growth, spec, breakpoints)
    if shift == 0.0:
        return value
    lv = math.log(abs(value)) + shift if value != 0 else -math.inf
    if lv > LOG_FLOAT_MAX:
        raise EvaluationOverflowError("subordinated value overflows", log_value=lv)
    return math.copysign(math.exp(lv), value)


def subordinate_scalar_log(alpha, t: float, log_g: Callable, spec: QuadratureSpec | None = None,
                           growth: GrowthClass | None = None,
                           breakpoints: Sequence[float] = ()) -> float:
    """``ln int_0^inf Phi_alpha(tau) exp(log_g(tau)) d tau`` without overflow."""
    a = as_alpha(alpha)
    spec = spec or QuadratureSpec()
    growth = growth or GrowthClass.other()
    if a == 1.0:
        return float(log_g(1.0))
    if t == 0:
        return float(log_g(0.0))
    check_convergence(a, growth)
    lg = _vectorized(log_g)
    value, shift = _integrate(a, None, lg, growth, spec, breakpoints, log_g=lg)
    return math.log(value) + shift if value > 0 else -math.inf


def subordinate_density(alpha, flow: DensityFlow, t: float, x, spec: QuadratureSpec | None = None) -> float:
    """Subordinated density ``rho_t^alpha(x)``."""
    a = as_alpha(alpha)
    if t < 0:
        raise DomainError("time must be non-negative")
    x = np.asarray(x, dtype=float)
    if a == 1.0 or t == 0:
        return float(np.asarray(flow.eval(float(t), x)).ravel()[0])
    scale = t ** a
    bps = flow.breakpoints(a, t, x) if flow.breakpoints else ()
    g = lambda tau: flow.eval(np.asarray(tau) * scale, x)
    return subordinate_scalar(a, t, g, spec, flow.growth_class, bps)


def subordinate_correlations(alpha, corr: CorrelationSequence, n: int, t: float,
                             spec: QuadratureSpec | None = None) -> float:
    """Subordinated n-th correlation ``int Phi_alpha(tau) r^(n)_{tau t^alpha} d tau``.

    Uses the log-domain path when ``corr.log_eval`` is available; an
    :class:`EvaluationOverflowError` then carries the log value.
    """
    a = as_alpha(alpha)
    n = int(n)
    if n < 0:
        raise DomainError("correlation order must be non-negative")
    if n == 0:
        return 1.0
    if a == 1.0 or t == 0:
        return float(np.asarray(corr.eval(n, float(t))).ravel()[0])
    if corr.log_eval is not None:
        lv = subordinate_correlations_log(a, corr, n, t, spec)
        if lv > LOG_FLOAT_MAX:
            raise EvaluationOverflowError("subordinated correlation overflows", log_value=lv)
        return math.exp(lv)
    scale = t ** a
    return subordinate_scalar(a, t, lambda tau: corr.eval(n, np.asarray(tau) * scale), spec,
                              corr.growth(n))


def subordinate_correlations_log(alpha, corr: CorrelationSequence, n: int, t: float,
                                 spec: QuadratureSpec | None = None) -> float:
    """Natural log of :func:`subordinate_correlations`."""
    a = as_alpha(alpha)
    if n == 0:
        return 0.0
    log_eval = corr.log_eval or (lambda m, s: np.log(corr.eval(m, s)))
    if a == 1.0 or t == 0:
        return float(np.asarray(log_eval(n, float(t))).ravel()[0])
    scale = t ** a
    return subordinate_scalar_log(a, t, lambda tau: log_eval(n, np.asarray(tau) * scale), spec,
                                  corr.growth(n))
