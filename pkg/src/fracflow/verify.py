"""Identity checks run by ``fracflow verify``.

Each check yields :class:`CheckResult` records carrying the measured error
and the tolerance it was held to.  Checks are registered in :data:`CHECKS`
in the order they run.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Sequence

import numpy as np
from scipy import special

from .caputo import TimeGrid, ffpe_residual
from .configspace import (
    CylinderFunction,
    FiniteConfiguration,
    Window,
    k_inverse,
    k_transform,
    lp_integral,
    mc_check_correlation_identity,
)
from .models import (
    ContactModel,
    FrontIndicatorModel,
    PolynomialModel,
    PureBirthModel,
    StretchedExpModel,
    front_position,
    pure_birth_ratio_limit,
    pure_birth_subordinated_corr,
    subordinated_corr,
)
from .specfun import mittag_leffler, wright_moment, wright_pdf
from .subordination import GrowthClass, subordinate_correlations, subordinate_density, subordinate_scalar


@dataclass(frozen=True)
class CheckResult:
    check: str
    case: str
    measured: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class VerifyOptions:
    alphas: tuple[float, ...] | None = None
    seed: int = 20240611
    mc_samples: int = 100_000
    tolerance_scale: float = 1.0


def _result(check: str, case: str, measured: float, tol: float, opts: VerifyOptions) -> CheckResult:
    tol = tol * opts.tolerance_scale
    return CheckResult(check, case, float(measured), float(tol), bool(measured <= tol))


def _alphas(opts: VerifyOptions, default: Sequence[float]) -> Sequence[float]:
    return opts.alphas if opts.alphas is not None else default


def check_wright_normalization(opts: VerifyOptions) -> Iterator[CheckResult]:
    for a in _alphas(opts, (0.3, 0.5, 0.7, 0.9)):
        v = subordinate_scalar(a, 1.0, lambda tau: np.ones_like(tau), growth=GrowthClass.bounded())
        yield _result("wright-normalization", f"alpha={a:g}", abs(v - 1.0), 1e-8, opts)


def check_wright_moments(opts: VerifyOptions) -> Iterator[CheckResult]:
    for a in _alphas(opts, (0.3, 0.5, 0.7, 0.9)):
        for delta in (0.5, 1.0, 2.0, 3.0):
            v = subordinate_scalar(a, 1.0, lambda tau, d=delta: tau ** d,
                                   growth=GrowthClass.polynomial(delta))
            exact = wright_moment(a, delta)
            yield _result("wright-moments", f"alpha={a:g} delta={delta:g}",
                          abs(v - exact) / exact, 1e-6, opts)


def check_laplace(opts: VerifyOptions) -> Iterator[CheckResult]:
    for a in _alphas(opts, (0.3, 0.5, 0.7)):
        for s in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0):
            v = subordinate_scalar(a, 1.0, lambda tau, s=s: np.exp(-s * tau),
                                   growth=GrowthClass.bounded())
            yield _result("laplace", f"alpha={a:g} t={s:g}",
                          abs(v - mittag_leffler(a, -s).value), 1e-6, opts)


def check_half_closed_forms(opts: VerifyOptions) -> Iterator[CheckResult]:
    t = np.round(np.arange(0.0, 8.0 + 1e-9, 0.1), 10)
    err = max(abs(wright_pdf(0.5, tk, closed_form=False).value
                  - math.exp(-0.25 * tk * tk) / math.sqrt(math.pi)) for tk in t)
    yield _result("half-closed-forms", "wright t in [0,8]", err, 1e-10, opts)
    z = np.round(np.arange(-3.0, 3.0 + 1e-9, 0.1), 10)
    err = max(abs(mittag_leffler(0.5, zk, closed_form=False).value - float(special.erfcx(-zk)))
              for zk in z)
    yield _result("half-closed-forms", "mittag-leffler z in [-3,3]", err, 1e-9, opts)


def caputo_orders(alpha: float, steps: Sequence[int] = (32, 64, 128, 256), t_max: float = 1.0,
                  t_min: float = 0.5, model: PureBirthModel | None = None):
    """Residuals of the L1 Caputo derivative of the subordinated pure-birth
    density against the rate ``z``, and the observed orders between halvings."""
    model = model or PureBirthModel()
    res = [ffpe_residual(alpha, lambda t: model.density(t), lambda t, u: model.z,
                         TimeGrid.covering(t_max, n), growth=GrowthClass.polynomial(1), t_min=t_min)
           for n in steps]
    orders = [math.log2(res[i] / res[i + 1]) for i in range(len(res) - 1)]
    return res, orders


def check_caputo_residual(opts: VerifyOptions) -> Iterator[CheckResult]:
    for a in _alphas(opts, (0.5,)):
        res, orders = caputo_orders(a)
        dev = max(abs(o - (2.0 - a)) for o in orders)
        yield _result("caputo-residual", f"alpha={a:g} orders={','.join(f'{o:.3f}' for o in orders)}",
                      dev, 0.2, opts)


def check_surgailis_limit(opts: VerifyOptions) -> Iterator[CheckResult]:
    model = PureBirthModel()
    for a in _alphas(opts, (0.5, 0.8)):
        for n in (2, 3, 4):
            r = pure_birth_subordinated_corr(model, a, n, 1e4) / \
                pure_birth_subordinated_corr(model, a, 1, 1e4) ** n
            lim = pure_birth_ratio_limit(a, n)
            yield _result("surgailis-limit", f"alpha={a:g} n={n}", abs(r - lim) / lim, 0.05, opts)


def check_front_law(opts: VerifyOptions) -> Iterator[CheckResult]:
    model = FrontIndicatorModel(1.0)
    flow = model.flow()
    for a in _alphas(opts, (0.3, 0.5, 0.7)):
        for t in (1.0, 10.0):
            x = front_position(model, a, t)
            v = subordinate_density(a, flow, t, np.array([x]))
            yield _result("front-law", f"alpha={a:g} t={t:g}", abs(v - 0.5), 1e-6, opts)


# (model, n, t, alpha) with E_alpha arguments at most 5
ORACLE_GRID = (
    (PureBirthModel(1.0, 1.0), (1, 2, 3), (0.5, 2.0), (0.3, 0.5, 0.8)),
    (ContactModel(1.0, 1.0), (1, 2), (0.5, 2.0), (0.3, 0.5, 0.8)),
    (StretchedExpModel(1.0, 0.5), (1, 2), (0.5, 2.0), (0.5, 0.8)),
    (StretchedExpModel(1.0, 1.5), (1, 2), (0.5, 1.0), (0.5, 0.8)),
    (PolynomialModel(2), (1, 2), (0.5, 2.0), (0.3, 0.5, 0.8)),
)


def oracle_cases():
    for model, ns, ts, alphas in ORACLE_GRID:
        for a in alphas:
            for n in ns:
                for t in ts:
                    yield model, n, t, a


def check_model_oracle(opts: VerifyOptions) -> Iterator[CheckResult]:
    for model, n, t, a in oracle_cases():
        if opts.alphas is not None and a not in opts.alphas:
            continue
        closed = subordinated_corr(model, a, n, t)
        quad = subordinate_correlations(a, model.correlation_sequence(), n, t)
        yield _result("model-oracle", f"{type(model).__name__} n={n} t={t:g} alpha={a:g}",
                      abs(closed - quad) / abs(closed), 1e-6, opts)


def _random_rational_G(rng: random.Random, gamma: FiniteConfiguration, max_order: int):
    table = {}
    for idx in gamma.subsets(max_order):
        table[gamma.subset(idx)] = Fraction(rng.randint(-50, 50), rng.randint(1, 12))

    def comp(x):
        return table[FiniteConfiguration(x[0], gamma.dim)]
    return CylinderFunction(max_order, tuple(comp for _ in range(max_order + 1))), table


def k_roundtrip_mismatches(rng: random.Random, size: int, max_order: int) -> int:
    """Number of sub-configurations where ``K^-1 K G`` differs from ``G``."""
    pts = np.array(rng.sample(range(1000), size), dtype=float) / 1000.0
    gamma = FiniteConfiguration(pts)
    G, table = _random_rational_G(rng, gamma, max_order)
    KG = lru_cache(maxsize=None)(lambda xi: k_transform(G, xi))
    bad = 0
    for idx in gamma.subsets():
        eta = gamma.subset(idx)
        if k_inverse(KG, eta) != table.get(eta, 0):
            bad += 1
    return bad


def check_k_roundtrip(opts: VerifyOptions) -> Iterator[CheckResult]:
    rng = random.Random(opts.seed)
    bad = 0
    for i in range(100):
        size = i % 11
        bad += k_roundtrip_mismatches(rng, size, rng.randint(0, size))
    yield _result("k-roundtrip", "100 rational G, <= 10 points", bad, 0.0, opts)


def random_bounded_G(rng: np.random.Generator, max_order: int = 3) -> CylinderFunction:
    """A symmetric bounded cylinder function with random coefficients."""
    coef = rng.uniform(-1.0, 1.0, size=(max_order + 1, 3))

    def comp(n):
        c, w, p = coef[n]
        # symmetric in the points: product of a common factor per point
        return lambda x: c * np.prod(np.cos(3.0 * w * x[..., 0] + p), axis=1)
    return CylinderFunction(max_order, (float(coef[0, 0]),) + tuple(comp(n) for n in range(1, max_order + 1)))


def check_mc_identity(opts: VerifyOptions) -> Iterator[CheckResult]:
    rng = np.random.default_rng(opts.seed)
    window = Window.unit(1, 1.0)
    for i in range(5):
        G = random_bounded_G(rng, 3)
        res = mc_check_correlation_identity(G, window, opts.mc_samples, opts.seed + i)
        z = abs(res.lhs_estimate - res.rhs) / res.lhs_stderr if res.lhs_stderr > 0 else 0.0
        yield _result("mc-identity", f"G#{i} n={opts.mc_samples}", z, 3.0, opts)


def check_lp_exponent(opts: VerifyOptions) -> Iterator[CheckResult]:
    window = Window.unit(1, 1.0)
    f = lambda x: 0.5 + 0.5 * x[:, 0]
    mass = 0.75
    exact = math.exp(mass)
    for n in range(7):
        v = lp_integral(CylinderFunction.lp_exponent_truncated(f, n), window, n)
        bound = mass ** (n + 1) / math.factorial(n + 1) * exact
        # measured error as a fraction of the next-term bound
        yield _result("lp-exponent", f"n_max={n}", abs(v - exact) / bound, 1.0, opts)


def check_classical_degeneration(opts: VerifyOptions) -> Iterator[CheckResult]:
    models = (PureBirthModel(1.0, 2.0), ContactModel(1.5, 0.7), StretchedExpModel(0.8, 1.3),
              PolynomialModel(3))
    mismatches = 0
    for model in models:
        seq = model.correlation_sequence()
        for n in (0, 1, 2, 5):
            for t in (0.0, 0.37, 2.5, 11.0):
                classical = float(model.correlation(n, t)) if n else 1.0
                mismatches += subordinated_corr(model, 1.0, n, t) != classical
                mismatches += subordinate_correlations(1.0, seq, n, t) != float(model.correlation(n, t))
    front = FrontIndicatorModel(0.9)
    for t in (0.0, 0.5, 3.0):
        mismatches += front_position(front, 1.0, t) != 1.0 + 0.9 * t
        for x in (0.0, 1.2, 2.0, 4.5):
            mismatches += subordinate_density(1.0, front.flow(), t, np.array([x])) != \
                float(front.density(t, x))
    g = lambda tau: np.cos(tau) + tau ** 2
    mismatches += subordinate_scalar(1.0, 2.0, g) != float(g(np.array([1.0]))[0])
    yield _result("classical-degeneration", "alpha=1 fast paths", mismatches, 0.0, opts)


CHECKS: dict[str, Callable[[VerifyOptions], Iterator[CheckResult]]] = {
    "wright-normalization": check_wright_normalization,
    "wright-moments": check_wright_moments,
    "laplace": check_laplace,
    "half-closed-forms": check_half_closed_forms,
    "caputo-residual": check_caputo_residual,
    "model-oracle": check_model_oracle,
    "surgailis-limit": check_surgailis_limit,
    "front-law": check_front_law,
    "k-roundtrip": check_k_roundtrip,
    "mc-identity": check_mc_identity,
    "lp-exponent": check_lp_exponent,
    "classical-degeneration": check_classical_degeneration,
}


def run_checks(names: Sequence[str] | None = None, opts: VerifyOptions | None = None) -> list[CheckResult]:
    opts = opts or VerifyOptions()
    names = list(names) if names else list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    return [r for name in names for r in CHECKS[name](opts)]
