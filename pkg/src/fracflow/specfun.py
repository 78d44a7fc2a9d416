"""Special functions of fractional kinetics.

Gamma/log-Gamma, the one-parameter Mittag-Leffler function ``E_alpha``, the
M-Wright probability density ``Phi_alpha`` with its tail ``Psi_alpha``,
moments and median.

Evaluation regimes for ``Phi_alpha`` (and ``Psi_alpha``):

* ``closed_form`` for alpha = 1/2, where ``Phi(t) = exp(-t^2/4)/sqrt(pi)``.
* ``series`` for the defining power series, summed with compensation, while
  its largest term stays below ``SERIES_MAX_TERM`` (cancellation noise is then
  below ~1e-13).  The switch point t_switch(alpha) is therefore not a fixed
  constant: it is the first t at which the largest term exceeds the bound.
* ``quadrature`` beyond t_switch, using Zolotarev's non-oscillatory integral
  of the one-sided stable law mapped to the M-Wright density::

      Phi(t) = t^(a/(1-a)) / (pi (1-a)) * int_0^pi U(phi) exp(-s U(phi)) dphi
      Psi(t) = 1/pi * int_0^pi exp(-s U(phi)) dphi,       s = t^(1/(1-a))

  with ``U(phi) = (sin(a phi)/sin phi)^(1/(1-a)) sin((1-a) phi)/sin(a phi)``.
  The integrand is positive, so the result keeps full relative accuracy in
  the far tail; the factor ``exp(-s U(0))`` is carried in the log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np
from scipy import integrate, optimize, special

from .errors import DegenerateError, DomainError, EvaluationOverflowError
from .quadrature import logsumexp, neumaier_sum, panel_nodes

EPS = np.finfo(float).eps
SERIES_MAX_TERM = 1e2
LOG_SERIES_MAX_TERM = math.log(SERIES_MAX_TERM)
LOG_FLOAT_MAX = math.log(np.finfo(float).max)
ZOLOTAREV_LAPLACE_S = 1e12

Regime = Literal["series", "asymptotic", "closed_form", "quadrature"]


@dataclass(frozen=True)
class FracOrder:
    """Fractional order alpha in (0, 1]; alpha = 1 is the classical limit."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not (math.isfinite(a) and 0.0 < a <= 1.0):
            raise DomainError(f"fractional order must lie in (0, 1], got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    @property
    def is_classical(self) -> bool:
        return self.alpha == 1.0

    def __float__(self) -> float:
        return self.alpha


def as_alpha(alpha: float | FracOrder) -> float:
    """Validate and unwrap a fractional order."""
    if isinstance(alpha, FracOrder):
        return alpha.alpha
    return FracOrder(alpha).alpha


def _strict_alpha(alpha) -> float:
    a = as_alpha(alpha)
    if a == 1.0:
        raise DegenerateError(
            "Phi_1 is the unit point mass at t = 1; use the alpha = 1 fast path "
            "of the subordination routines instead of a density"
        )
    return a


@dataclass(frozen=True)
class EvalResult:
    value: float
    abs_error_estimate: float
    regime: Regime

    def __float__(self) -> float:
        return self.value


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

def gamma_ln(x: float) -> float:
    """``ln Gamma(x)`` for real ``x > 0``."""
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"gamma_ln needs a finite positive argument, got {x!r}")
    return math.lgamma(x)


def rgamma(x):
    """Reciprocal Gamma ``1/Gamma(x)``; exactly zero at the poles."""
    return special.rgamma(x)


# ---------------------------------------------------------------------------
# Mittag-Leffler
# ---------------------------------------------------------------------------

ML_SERIES_POS = 50.0   # z^(1/a) bound for the positive-argument Taylor series
ML_SERIES_NEG = 3.0    # |z|^(1/a) bound for the alternating Taylor series


def _ml_log_terms(a: float, z_abs: float, n_max: int | None = None) -> np.ndarray:
    """``ln(|z|^n / Gamma(a n + 1))`` for n = 0..N, N large enough to converge."""
    if z_abs == 0.0:
        return np.zeros(1)
    if n_max is None:
        peak = z_abs ** (1.0 / a) / a
        n_max = int(2 * peak + 60 / a + 40)
    n = np.arange(n_max + 1, dtype=float)
    return n * math.log(z_abs) - special.gammaln(a * n + 1.0)


def _ml_positive_series(a: float, z: float) -> tuple[float, float]:
    """Log-sum of the (all positive) Taylor terms; returns (log value, rel err)."""
    lt = _ml_log_terms(a, z)
    lv = logsumexp(lt)
    tail = math.exp(lt[-1] - lv)
    return lv, 8 * EPS + tail


def _ml_asymptotic_log_pos(a: float, z: float) -> tuple[float, float]:
    """``ln E_a(z)`` for large positive z from the exponential asymptotic law.

    ``E_a(z) = exp(z^(1/a))/a - sum_{k>=1} z^-k / Gamma(1 - a k) + ...``
    """
    w = z ** (1.0 / a)
    alg = 0.0
    last = 0.0
    for k in range(1, 8):
        last = z ** (-k) * float(rgamma(1.0 - a * k))
        alg += last
    # relative weight of the algebraic part against the exponential
    ratio = a * alg * math.exp(-w) if w < LOG_FLOAT_MAX else 0.0
    lv = w - math.log(a) + math.log1p(-ratio)
    rel = 8 * EPS + abs(a * last) * math.exp(-min(w, LOG_FLOAT_MAX))
    return lv, rel


def _ml_negative_integral(a: float, x: float) -> tuple[float, float]:
    """``E_a(-x)``, x > 0, via the complete-monotonicity integral

    ``E_a(-x) = sin(a pi)/(a pi) int_0^inf exp(-(x u)^(1/a)) / (u^2 + 2u cos(a pi) + 1) du``.
    """
    c = math.cos(a * math.pi)
    pref = math.sin(a * math.pi) / (a * math.pi)
    u_max = 745.0 ** a / x

    def f(u):
        return math.exp(-((x * u) ** (1.0 / a))) / (u * u + 2.0 * u * c + 1.0)

    pts = sorted({p for p in (-c, 1.0 / x, 1.0) if 0.0 < p < u_max})
    val, err = integrate.quad(f, 0.0, u_max, points=pts or None, epsabs=0.0,
                              epsrel=1e-13, limit=400)
    # contribution beyond u_max is below exp(-745) / u_max
    return pref * val, pref * err + 1e-300


def _ml_negative_asymptotic(a: float, x: float) -> tuple[float, float] | None:
    """Algebraic expansion ``sum_k (-1)^(k+1) x^-k / Gamma(1-a k)`` for large x."""
    terms = []
    for k in range(1, 30):
        terms.append((-1.0) ** (k + 1) * x ** (-k) * float(rgamma(1.0 - a * k)))
        if k > 2 and abs(terms[-1]) > abs(terms[-2]) and terms[-2] != 0.0:
            break
    mags = [abs(v) for v in terms if v != 0.0]
    if len(mags) < 2:
        return None
    val = math.fsum(terms[:-1])
    err = abs(terms[-1]) + 4 * EPS * abs(val)
    if err > 1e-14 * abs(val):
        return None
    return val, err


def mittag_leffler(alpha, z: float, closed_form: bool = True) -> EvalResult:
    """One-parameter Mittag-Leffler function ``E_alpha(z)`` for real ``z``.

    Raises :class:`EvaluationOverflowError` (with ``log_value``) when the
    result exceeds the float range.  ``closed_form=False`` skips the
    ``alpha = 1/2`` shortcut so the general algorithms can be checked
    against it.
    """
    a = as_alpha(alpha)
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"mittag_leffler needs a finite argument, got {z!r}")
    if a == 1.0:
        if z > LOG_FLOAT_MAX:
            raise EvaluationOverflowError(f"E_1({z}) overflows", log_value=z)
        v = math.exp(z)
        return EvalResult(v, 2 * EPS * v, "closed_form")
    if z == 0.0:
        return EvalResult(1.0, 0.0, "series")
    if a == 0.5 and closed_form:
        if z > 0 and z * z > LOG_FLOAT_MAX - 1:
            raise EvaluationOverflowError(
                f"E_1/2({z}) overflows", log_value=mittag_leffler_log(a, z))
        v = float(special.erfcx(-z))
        return EvalResult(v, 8 * EPS * v, "closed_form")
    if z > 0:
        if z ** (1.0 / a) <= ML_SERIES_POS:
            lv, rel = _ml_positive_series(a, z)
            regime = "series"
        else:
            lv, rel = _ml_asymptotic_log_pos(a, z)
            regime = "asymptotic"
        if lv > LOG_FLOAT_MAX:
            raise EvaluationOverflowError(f"E_{a}({z}) overflows", log_value=lv)
        v = math.exp(lv)
        # exponentiation turns the absolute error of lv into a relative one
        return EvalResult(v, (rel + 4 * EPS * abs(lv)) * v, regime)
    x = -z
    if x ** (1.0 / a) <= ML_SERIES_NEG:
        lt = _ml_log_terms(a, x)
        n = np.arange(lt.size)
        terms = np.where(n % 2 == 0, 1.0, -1.0) * np.exp(lt)
        v = float(neumaier_sum(terms))
        err = 4 * EPS * float(np.sum(np.abs(terms))) + abs(terms[-1])
        return EvalResult(v, err, "series")
    if x > 100.0:
        asym = _ml_negative_asymptotic(a, x)
        if asym is not None:
            return EvalResult(asym[0], asym[1], "asymptotic")
    v, err = _ml_negative_integral(a, x)
    return EvalResult(v, err, "quadrature")


def mittag_leffler_log(alpha, z: float) -> float:
    """``ln E_alpha(z)`` on the monotone branch ``z >= 0``; never overflows."""
    a = as_alpha(alpha)
    z = float(z)
    if not (math.isfinite(z) and z >= 0.0):
        raise DomainError(f"mittag_leffler_log needs finite z >= 0, got {z!r}")
    if z == 0.0:
        return 0.0
    if a == 1.0:
        return z
    if a == 0.5:
        return z * z + math.log1p(math.erf(z))
    if z ** (1.0 / a) <= ML_SERIES_POS:
        return _ml_positive_series(a, z)[0]
    return _ml_asymptotic_log_pos(a, z)[0]


# ---------------------------------------------------------------------------
# Wright / M-Wright density
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _zolotarev_constants(a: float) -> tuple[float, float]:
    """``U(0)`` and the curvature ``U''(0)/2`` of Zolotarev's function."""
    u0 = (1.0 - a) * a ** (a / (1.0 - a))
    h = 1e-3
    c2 = (float(_zolotarev_u(a, np.array([h]))[0]) - u0) / (h * h)
    return u0, c2


def _zolotarev_u(a: float, phi: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        u = (np.sin(a * phi) / np.sin(phi)) ** (1.0 / (1.0 - a)) \
            * np.sin((1.0 - a) * phi) / np.sin(a * phi)
    return np.where(np.isfinite(u), u, np.inf)


_PEAK_MULTIPLES = np.array([0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0])
_END_OFFSETS = np.pi - np.pi * 2.0 ** -np.arange(1, 8)


def _zolotarev_edges(a: float, s: np.ndarray) -> np.ndarray:
    """Panel edges per s (rows): dense near the Laplace peak at phi = 0 and
    geometrically refined towards phi = pi where U blows up."""
    _, c2 = _zolotarev_constants(a)
    width = 1.0 / np.sqrt(np.maximum(s, 1e-300) * c2)
    inner = width[:, None] * _PEAK_MULTIPLES
    edges = np.concatenate(
        [np.zeros((s.size, 1)), inner, np.broadcast_to(_END_OFFSETS, (s.size, _END_OFFSETS.size)),
         np.full((s.size, 1), np.pi)], axis=1)
    return np.sort(np.clip(edges, 0.0, np.pi), axis=1)


def _zolotarev_log_integral(a: float, s: np.ndarray, weight_u: bool, order: int) -> np.ndarray:
    """``ln int_0^pi U^w exp(-s (U - U0)) dphi`` for every s (w = 0 or 1)."""
    u0, c2 = _zolotarev_constants(a)
    out = np.empty(s.shape)
    huge = s > ZOLOTAREV_LAPLACE_S
    if np.any(huge):
        # Laplace's method; relative error O(1/s)
        with np.errstate(divide="ignore"):
            out[huge] = math.log(0.5 * math.sqrt(math.pi / c2)) - 0.5 * np.log(s[huge]) \
                + (math.log(u0) if weight_u else 0.0)
    if np.all(huge):
        return out
    s = s[~huge]
    edges = _zolotarev_edges(a, s)
    lo, hi = edges[:, :-1], edges[:, 1:]
    nodes, weights = panel_nodes(lo.ravel(), hi.ravel(), order)
    nodes = nodes.reshape(s.size, -1)
    weights = weights.reshape(s.size, -1)
    u = _zolotarev_u(a, nodes)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        expo = -s[:, None] * (u - u0)
        if weight_u:
            expo = expo + np.log(u)
        expo = np.where(np.isfinite(u), expo, -np.inf)
        total = np.sum(weights * np.exp(expo), axis=1)
        out[~huge] = np.log(total)
    return out


def _zolotarev_rel_error(s, li, li_coarse):
    with np.errstate(invalid="ignore"):
        rel = np.abs(np.expm1(li_coarse - li)) + 64 * EPS
    return np.where(s > ZOLOTAREV_LAPLACE_S, 1.0 / s, np.nan_to_num(rel, nan=0.0))


def _zolotarev_log_pdf(a: float, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Log density and relative error estimate in the quadrature regime."""
    u0, _ = _zolotarev_constants(a)
    with np.errstate(over="ignore"):
        s = t ** (1.0 / (1.0 - a))
    li = _zolotarev_log_integral(a, s, True, 30)
    li_coarse = _zolotarev_log_integral(a, s, True, 20)
    lp = (a / (1.0 - a)) * np.log(t) - math.log(math.pi * (1.0 - a)) - s * u0 + li
    rel = _zolotarev_rel_error(s, li, li_coarse)
    return np.where(np.isinf(s), -np.inf, lp), rel


def _zolotarev_log_tail(a: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u0, _ = _zolotarev_constants(a)
    with np.errstate(over="ignore"):
        s = x ** (1.0 / (1.0 - a))
    li = _zolotarev_log_integral(a, s, False, 30)
    li_coarse = _zolotarev_log_integral(a, s, False, 20)
    lt = -math.log(math.pi) - s * u0 + li
    rel = _zolotarev_rel_error(s, li, li_coarse)
    return np.where(np.isinf(s), -np.inf, lt), rel


def _series_log_max_term(a: float, t: np.ndarray) -> np.ndarray:
    """Log of the largest |term| of the Wright series, ``t^n Gamma(a(n+1)) / (pi n!)``.

    For t <= 1 the terms never grow; the ``t > 1`` maximum is located from the
    stationary point of the Stirling approximation and refined on integers.
    """
    t = np.asarray(t, dtype=float)
    out = np.full(t.shape, special.gammaln(a) - math.log(math.pi))
    big = t > 1.0
    if np.any(big):
        tb = t[big]
        # d/dn [n ln t + ln G(a n + a) - ln G(n+1)] ~ ln t - (1-a) ln n + a ln a = 0
        with np.errstate(over="ignore"):
            n_star = np.exp((np.log(tb) + a * math.log(a)) / (1.0 - a))
        n_star = np.minimum(n_star, 1e12)
        best = np.full(tb.shape, -np.inf)
        for off in (-1.0, 0.0, 1.0, 2.0):
            n = np.maximum(np.floor(n_star) + off, 0.0)
            v = n * np.log(tb) + special.gammaln(a * (n + 1.0)) - special.gammaln(n + 1.0)
            best = np.maximum(best, v)
        out[big] = np.maximum(out[big], best - math.log(math.pi))
    return out


def _wright_series(a: float, t: np.ndarray, integrated: bool) -> tuple[np.ndarray, np.ndarray]:
    """Compensated power series of Phi (or of ``1 - Psi`` when ``integrated``).

    Uses the reflection ``1/Gamma(1 - x) = Gamma(x) sin(pi x)/pi`` with
    ``x = a (n + 1)``; terms at poles of ``Gamma(1 - x)`` are exactly zero.
    """
    t = np.asarray(t, dtype=float)
    tmax = float(np.max(t)) if t.size else 0.0
    n_terms = 8
    if tmax > 0:
        # grow until the largest-argument row has negligible terms
        lt = math.log(tmax)
        n = 0
        peak = -np.inf
        while True:
            v = n * lt + math.lgamma(a * (n + 1)) - math.lgamma(n + 1)
            peak = max(peak, v)
            if n > 4 and v < peak - 40.0 and v < -40.0:
                break
            n += 1
        n_terms = n + 2
    n = np.arange(n_terms, dtype=float)
    x = a * (n + 1.0)
    sin_px = np.sin(np.pi * x)
    sin_px[np.isclose(x, np.round(x), rtol=0.0, atol=1e-12)] = 0.0
    sign = np.where(n % 2 == 0, 1.0, -1.0) * np.sign(sin_px)
    log_coef = special.gammaln(x) + np.log(np.abs(np.where(sin_px == 0.0, 1.0, sin_px))) - math.log(math.pi)
    if integrated:
        log_coef = log_coef - special.gammaln(n + 2.0)
        power = n + 1.0
    else:
        log_coef = log_coef - special.gammaln(n + 1.0)
        power = n
    with np.errstate(divide="ignore"):
        logt = np.log(t)
    with np.errstate(invalid="ignore"):
        log_mag = logt[:, None] * power[None, :] + log_coef[None, :]
    # 0 * log(0) for the n = 0 term of the density
    log_mag = np.where(np.isnan(log_mag), log_coef[None, :], log_mag)
    terms = np.where(sign[None, :] == 0.0, 0.0, sign[None, :] * np.exp(log_mag))
    total = neumaier_sum(terms, axis=1)
    err = 32 * EPS * np.sum(np.abs(terms), axis=1) + np.abs(terms[:, -1])
    return total, err


def _check_t(t) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError("Wright function arguments must be finite and non-negative")
    return arr


def _wright_log_pdf_general(a: float, t: np.ndarray):
    """(log value, abs error, regime code) without the alpha = 1/2 closed form.

    regime code: 0 series, 1 quadrature.
    """
    t = np.atleast_1d(t).astype(float)
    use_series = (t <= 1.0) | (_series_log_max_term(a, t) <= LOG_SERIES_MAX_TERM)
    logv = np.empty_like(t)
    err = np.empty_like(t)
    if np.any(use_series):
        v, e = _wright_series(a, t[use_series], integrated=False)
        with np.errstate(divide="ignore"):
            logv[use_series] = np.log(np.maximum(v, 0.0))
        err[use_series] = e
    q = ~use_series
    if np.any(q):
        lp, rel = _zolotarev_log_pdf(a, t[q])
        logv[q] = lp
        err[q] = rel * np.exp(lp)
    return logv, err, np.where(use_series, 0, 1)


def wright_log_pdf(alpha, t) -> np.ndarray:
    """Natural log of ``Phi_alpha(t)``, vectorised; keeps accuracy in the far tail."""
    a = _strict_alpha(alpha)
    arr = _check_t(t)
    flat = arr.ravel()
    if a == 0.5:
        out = -0.25 * flat * flat - 0.5 * math.log(math.pi)
    else:
        out = _wright_log_pdf_general(a, flat)[0]
    return out.reshape(arr.shape) if arr.ndim else float(out[0])


def wright_pdf(alpha, t: float, closed_form: bool = True) -> EvalResult:
    """The M-Wright probability density ``Phi_alpha(t)``, ``0 < alpha < 1``.

    ``Phi_alpha(t) = sum_n (-t)^n / (n! Gamma(1 - alpha - alpha n))``.
    ``closed_form=False`` skips the Gaussian shortcut at ``alpha = 1/2``.
    """
    a = _strict_alpha(alpha)
    t = float(_check_t(t))
    if a == 0.5 and closed_form:
        v = math.exp(-0.25 * t * t) / math.sqrt(math.pi)
        return EvalResult(v, 4 * EPS * v, "closed_form")
    logv, err, code = _wright_log_pdf_general(a, np.array([t]))
    return EvalResult(float(np.exp(logv[0])), float(err[0]),
                      "series" if code[0] == 0 else "quadrature")


def _wright_tail_general(a: float, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s = np.atleast_1d(s).astype(float)
    use_series = (s <= 1.0) | (_series_log_max_term(a, s) + np.log(s + 1e-300) <= LOG_SERIES_MAX_TERM)
    val = np.empty_like(s)
    err = np.empty_like(s)
    if np.any(use_series):
        v, e = _wright_series(a, s[use_series], integrated=True)
        val[use_series] = 1.0 - v
        err[use_series] = e + EPS
    q = ~use_series
    if np.any(q):
        lt, rel = _zolotarev_log_tail(a, s[q])
        val[q] = np.exp(lt)
        err[q] = rel * val[q]
    return np.clip(val, 0.0, 1.0), err


def wright_tail(alpha, s: float) -> float:
    """Tail mass ``Psi_alpha(s) = int_s^inf Phi_alpha``."""
    a = _strict_alpha(alpha)
    s_arr = _check_t(s)
    if a == 0.5:
        out = special.erfc(0.5 * s_arr)
    else:
        out = _wright_tail_general(a, s_arr.ravel())[0].reshape(s_arr.shape)
    return float(out) if np.ndim(out) == 0 else out


def wright_tail_eval(alpha, s: float) -> EvalResult:
    """:func:`wright_tail` at a scalar, with error estimate and regime."""
    a = _strict_alpha(alpha)
    s = float(_check_t(s))
    if a == 0.5:
        v = float(special.erfc(0.5 * s))
        return EvalResult(v, 4 * EPS * v, "closed_form")
    use_series = s <= 1.0 or (float(_series_log_max_term(a, np.array([s]))[0]) + math.log(s)
                              <= LOG_SERIES_MAX_TERM)
    val, err = _wright_tail_general(a, np.array([s]))
    return EvalResult(float(val[0]), float(err[0]), "series" if use_series else "quadrature")


def wright_log_tail(alpha, s) -> np.ndarray | float:
    """``ln Psi_alpha(s)``; accurate where ``Psi`` underflows."""
    a = _strict_alpha(alpha)
    s_arr = np.atleast_1d(_check_t(s)).astype(float)
    if a == 0.5:
        with np.errstate(divide="ignore"):
            out = np.log(special.erfc(0.5 * s_arr))
        deep = 0.5 * s_arr > 25
        # erfc(x) ~ exp(-x^2)/(x sqrt(pi)) * erfcx correction
        out[deep] = -(0.5 * s_arr[deep]) ** 2 + np.log(special.erfcx(0.5 * s_arr[deep]))
    else:
        val, _ = _wright_tail_general(a, s_arr)
        with np.errstate(divide="ignore"):
            out = np.log(val)
        deep = val < 1e-100
        if np.any(deep):
            out[deep] = _zolotarev_log_tail(a, s_arr[deep])[0]
    return float(out[0]) if np.ndim(s) == 0 else out


def wright_median(alpha) -> float:
    """The unique ``s`` with ``Psi_alpha(s) = 1/2``."""
    a = _strict_alpha(alpha)
    return _wright_median(a)


@lru_cache(maxsize=128)
def _wright_median(a: float) -> float:
    f = lambda s: wright_tail(a, s) - 0.5
    hi = 1.0
    while f(hi) > 0:
        hi *= 2.0
    return optimize.brentq(f, 0.0, hi, xtol=1e-15, rtol=4 * EPS, maxiter=200)


def wright_moment(alpha, delta: float) -> float:
    """``int_0^inf t^delta Phi_alpha(t) dt = Gamma(delta + 1) / Gamma(alpha delta + 1)``."""
    a = _strict_alpha(alpha)
    delta = float(delta)
    if not (math.isfinite(delta) and delta > -1.0):
        raise DomainError(f"moment order must exceed -1, got {delta!r}")
    return math.exp(gamma_ln(delta + 1.0) - gamma_ln(a * delta + 1.0))


def wright_log_pdf_asymptotic(alpha, t) -> np.ndarray:
    """Leading-order saddle-point law of ``ln Phi_alpha(t)`` for large t.

    Obtained from Laplace's method on the Zolotarev integral; only used for
    cheap truncation estimates, never as a returned value.
    """
    a = _strict_alpha(alpha)
    t = np.asarray(t, dtype=float)
    u0, c2 = _zolotarev_constants(a)
    s = t ** (1.0 / (1.0 - a))
    return ((a / (1.0 - a)) * np.log(t) - math.log(math.pi * (1.0 - a)) - s * u0
            + np.log(0.5 * u0 * np.sqrt(math.pi / (s * c2))))
