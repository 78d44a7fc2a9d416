"""Finite configurations, the K-transform, Lebesgue-Poisson integrals and
Poisson sampling on bounded windows.

Functions on finite configurations are evaluated by enumerating
sub-configurations, so every operation that sums over subsets carries a size
cap (:data:`SUBSET_CAP`).  Sums are exact when the summands are ``int`` or
:class:`fractions.Fraction`, and use :func:`math.fsum` otherwise.
"""

from __future__ import annotations

import csv
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from numbers import Rational
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError, SizeError
from .quadrature import gauss_legendre

SUBSET_CAP = 20
LP_MAX_ORDER = 6
CUBATURE_BUDGET = 2_000_000


@dataclass(frozen=True, eq=False)
class FiniteConfiguration:
    """A finite set of distinct points in ``R^d``, stored lexicographically sorted."""

    points: np.ndarray
    dim: int = field(default=-1)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        dim = self.dim
        if pts.size == 0:
            dim = max(dim, 1)
            pts = pts.reshape(0, dim)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1) if dim in (-1, 1) else pts.reshape(-1, dim)
        if pts.ndim != 2:
            raise DomainError("points must be an (n, d) array")
        if not np.all(np.isfinite(pts)):
            raise DomainError("points must be finite")
        pts = pts + 0.0  # -0.0 -> 0.0, so equal sets have equal bytes
        if pts.shape[0] > 1:
            pts = pts[np.lexsort(pts.T[::-1])]
            if np.any(np.all(pts[1:] == pts[:-1], axis=1)):
                raise DomainError("configuration points must be pairwise distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "dim", pts.shape[1])

    @classmethod
    def empty(cls, dim: int = 1) -> "FiniteConfiguration":
        return cls(np.zeros((0, dim)), dim)

    def __len__(self) -> int:
        return self.points.shape[0]

    def __eq__(self, other) -> bool:
        return (isinstance(other, FiniteConfiguration) and self.points.shape == other.points.shape
                and self.points.tobytes() == other.points.tobytes())

    def __hash__(self) -> int:
        return hash((self.points.shape, self.points.tobytes()))

    def subset(self, indices: Sequence[int]) -> "FiniteConfiguration":
        """Sub-configuration at increasing ``indices`` (stays sorted and distinct)."""
        pts = self.points[list(indices)]
        pts.setflags(write=False)
        out = object.__new__(FiniteConfiguration)
        object.__setattr__(out, "points", pts)
        object.__setattr__(out, "dim", self.dim)
        return out

    def subsets(self, max_size: int | None = None) -> Iterator[tuple[int, ...]]:
        """Index tuples of all sub-configurations of size ``<= max_size``.

        Full enumeration follows bitmask order; when ``max_size`` prunes the
        enumeration, subsets are produced by size, then lexicographically.
        """
        n = len(self)
        if n > SUBSET_CAP:
            raise SizeError(f"configuration has {n} points, cap is {SUBSET_CAP}")
        if max_size is None or max_size >= n:
            for mask in range(1 << n):
                yield tuple(i for i in range(n) if mask >> i & 1)
            return
        for k in range(max_size + 1):
            yield from itertools.combinations(range(n), k)


def _exact_sum(values: Iterable):
    values = list(values)
    if all(isinstance(v, (int, Rational)) for v in values):
        return sum(values, 0)
    return math.fsum(float(v) for v in values)


def _scalar(r):
    if isinstance(r, np.ndarray):
        r = r.reshape(-1)[0]
        if isinstance(r, np.generic):
            r = r.item()
    return r


@dataclass(frozen=True)
class CylinderFunction:
    """``G = (G^(0), ..., G^(N))`` with ``G^(n)`` symmetric on n-tuples, zero beyond N.

    Each component is called with an array of shape ``(m, n, d)`` and returns
    ``m`` values (or a scalar, which is broadcast).  Components returning
    ``int``/``Fraction`` objects give exact K-transforms.
    """

    max_order: int
    components: tuple

    def __post_init__(self):
        if int(self.max_order) != self.max_order or self.max_order < 0:
            raise DomainError("max_order must be a non-negative integer")
        comps = tuple(self.components)
        if len(comps) != self.max_order + 1:
            raise DomainError(f"expected {self.max_order + 1} components, got {len(comps)}")
        object.__setattr__(self, "components", comps)

    def component_values(self, n: int, x: np.ndarray) -> np.ndarray:
        """Values of ``G^(n)`` on a batch ``x`` of shape ``(m, n, d)``."""
        if n > self.max_order:
            return np.zeros(x.shape[0])
        c = self.components[n]
        r = c(x) if callable(c) else c
        return np.broadcast_to(np.asarray(r, dtype=float), (x.shape[0],))

    def __call__(self, eta: FiniteConfiguration):
        n = len(eta)
        if n > self.max_order:
            return 0
        c = self.components[n]
        return _scalar(c(eta.points[None]) if callable(c) else c)

    @classmethod
    def lp_exponent_truncated(cls, f: Callable, max_order: int) -> "CylinderFunction":
        """``G(eta) = prod_{x in eta} f(x)`` for ``|eta| <= max_order``."""
        def comp(n):
            return lambda x: np.prod(f(x.reshape(-1, x.shape[-1])).reshape(x.shape[0], n), axis=1)
        return cls(max_order, (1.0,) + tuple(comp(n) for n in range(1, max_order + 1)))


@dataclass(frozen=True)
class Window:
    """Axis-aligned box ``[lower, upper]`` with an intensity bounded by ``bound``.

    ``intensity`` is a constant or a function of an ``(m, d)`` array of points.
    """

    lower: np.ndarray
    upper: np.ndarray
    intensity: Callable | float = 1.0
    bound: float | None = None

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise DomainError("box corners must be matching vectors")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)) and np.all(hi > lo)):
            raise DomainError("box must be bounded with positive volume")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        bound = self.bound
        if not callable(self.intensity):
            c = float(self.intensity)
            if not (c >= 0 and math.isfinite(c)):
                raise DomainError("intensity must be finite and non-negative")
            bound = c if bound is None else bound
        if bound is None or not (bound >= 0 and math.isfinite(bound)):
            raise DomainError("a finite intensity bound is required")
        object.__setattr__(self, "bound", float(bound))

    @classmethod
    def unit(cls, dim: int = 1, intensity: Callable | float = 1.0,
             bound: float | None = None) -> "Window":
        return cls(np.zeros(dim), np.ones(dim), intensity, bound)

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def volume(self) -> float:
        return float(np.prod(self.upper - self.lower))

    def rho(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if callable(self.intensity):
            return np.asarray(self.intensity(x), dtype=float).reshape(x.shape[0])
        return np.full(x.shape[0], float(self.intensity))

    def rule(self, order: int) -> tuple[np.ndarray, np.ndarray]:
        """Tensor Gauss-Legendre nodes ``(m, d)`` and weights on the box."""
        x, w = gauss_legendre(order)
        half = 0.5 * (self.upper - self.lower)
        mid = 0.5 * (self.upper + self.lower)
        grids = np.meshgrid(*([x] * self.dim), indexing="ij")
        nodes = mid + half * np.stack([g.ravel() for g in grids], axis=1)
        wts = np.prod(np.stack(np.meshgrid(*([w] * self.dim), indexing="ij")).reshape(self.dim, -1),
                      axis=0) * np.prod(half)
        return nodes, wts

    def mass(self, order: int = 24) -> float:
        """``int_box rho``."""
        if not callable(self.intensity):
            return float(self.intensity) * self.volume
        nodes, wts = self.rule(order)
        return float(np.dot(wts, self.rho(nodes)))


def lp_exponent(f: Callable, eta: FiniteConfiguration) -> float:
    """``e_lambda(f, eta) = prod_{x in eta} f(x)``; 1 on the empty configuration."""
    if len(eta) == 0:
        return 1.0
    vals = np.asarray(f(eta.points), dtype=float).reshape(len(eta))
    return float(np.prod(vals))


def k_transform(G: CylinderFunction, gamma: FiniteConfiguration):
    """``KG(gamma) = sum_{eta subset gamma} G(eta)``."""
    if len(gamma) > SUBSET_CAP:
        raise SizeError(f"configuration has {len(gamma)} points, cap is {SUBSET_CAP}")
    return _exact_sum(G(gamma.subset(idx)) for idx in gamma.subsets(G.max_order))


def k_inverse(F: Callable[[FiniteConfiguration], float], eta: FiniteConfiguration):
    """``K^-1 F(eta) = sum_{xi subset eta} (-1)^{|eta \\ xi|} F(xi)``."""
    n = len(eta)
    if n > SUBSET_CAP:
        raise SizeError(f"configuration has {n} points, cap is {SUBSET_CAP}")
    terms = []
    for idx in eta.subsets():
        v = F(eta.subset(idx))
        terms.append(v if (n - len(idx)) % 2 == 0 else -v)
    return _exact_sum(terms)


def lp_integral(G: CylinderFunction, window: Window, n_max: int, order: int = 12) -> float:
    """``sum_{n <= n_max} 1/n! int_{box^n} G^(n) prod rho dx`` by tensor cubature.

    The per-axis order is lowered so that each term uses at most
    :data:`CUBATURE_BUDGET` nodes; if that drops below 4 the call fails.
    """
    if int(n_max) != n_max or n_max < 0:
        raise DomainError("n_max must be a non-negative integer")
    if n_max > LP_MAX_ORDER:
        raise SizeError(f"n_max={n_max} exceeds the cubature limit {LP_MAX_ORDER}")
    d = window.dim
    total = [float(G.component_values(0, np.zeros((1, 0, d)))[0])]
    for n in range(1, min(n_max, G.max_order) + 1):
        q = min(order, int(math.floor(CUBATURE_BUDGET ** (1.0 / (n * d)) + 1e-9)))
        if q < 4:
            raise SizeError(f"cubature budget exceeded at order n={n} in dimension {d}")
        nodes, wts = window.rule(q)
        rho = window.rho(nodes)
        m = nodes.shape[0]
        idx = np.stack(np.meshgrid(*([np.arange(m)] * n), indexing="ij"), axis=-1).reshape(-1, n)
        x = nodes[idx]
        w = np.prod(wts[idx] * rho[idx], axis=1)
        total.append(math.fsum(w * G.component_values(n, x)) / math.factorial(n))
    return math.fsum(total)


def _draw_points(rng: np.random.Generator, window: Window, count: int) -> np.ndarray:
    d = window.dim
    out = np.empty((0, d))
    if count == 0:
        return out
    if not callable(window.intensity):
        return window.lower + (window.upper - window.lower) * rng.random((count, d))
    chunks = []
    got = 0
    while got < count:
        m = max(2 * (count - got), 16)
        prop = window.lower + (window.upper - window.lower) * rng.random((m, d))
        rho = window.rho(prop)
        if np.any(rho > window.bound * (1 + 1e-12)) or np.any(rho < 0):
            raise DomainError("intensity outside [0, bound] on the window")
        keep = prop[rng.random(m) * window.bound < rho]
        chunks.append(keep)
        got += keep.shape[0]
    return np.concatenate(chunks)[:count]


def _split(rng: np.random.Generator, window: Window, mass: float, n: int) -> list[FiniteConfiguration]:
    counts = rng.poisson(mass, size=n) if mass > 0 else np.zeros(n, dtype=int)
    pts = _draw_points(rng, window, int(counts.sum()))
    bounds = np.concatenate([[0], np.cumsum(counts)])
    return [FiniteConfiguration(pts[bounds[i]:bounds[i + 1]], window.dim) for i in range(n)]


def sample_poisson(window: Window, rng_seed: int) -> FiniteConfiguration:
    """One draw of the Poisson point process with the window's intensity."""
    rng = np.random.default_rng(rng_seed)
    return _split(rng, window, window.mass(), 1)[0]


def sample_poisson_many(window: Window, n_samples: int, rng_seed: int,
                        chunk: int = 4096) -> list[FiniteConfiguration]:
    """``n_samples`` independent draws; chunk ``i`` uses the i-th spawned seed stream."""
    mass = window.mass()
    seeds = np.random.SeedSequence(rng_seed).spawn(max(1, math.ceil(n_samples / chunk)))
    out: list[FiniteConfiguration] = []
    for i, s in enumerate(seeds):
        m = min(chunk, n_samples - i * chunk)
        out.extend(_split(np.random.default_rng(s), window, mass, m))
    return out


@dataclass(frozen=True)
class IdentityCheck:
    """Monte Carlo check of ``E[KG] = int G e_lambda(rho) d lambda``."""

    lhs_estimate: float
    lhs_stderr: float
    rhs: float
    passed: bool
    degenerate: bool
    n_samples: int


def mc_check_correlation_identity(G: CylinderFunction, window: Window, n_samples: int,
                                  rng_seed: int, workers: int = 1,
                                  chunk: int = 4096) -> IdentityCheck:
    """Compare the sample mean of ``KG`` under the Poisson measure with the
    Lebesgue-Poisson integral of ``G``; passes when they agree within 3
    standard errors.  A zero sample variance is reported as ``degenerate`` and
    then exact agreement (to rounding) is required.
    """
    if n_samples < 2:
        raise DomainError("need at least two samples")
    mass = window.mass()
    seeds = np.random.SeedSequence(rng_seed).spawn(math.ceil(n_samples / chunk))
    sizes = [min(chunk, n_samples - i * chunk) for i in range(len(seeds))]

    def run(args):
        seed, m = args
        rng = np.random.default_rng(seed)
        return np.array([float(k_transform(G, g)) for g in _split(rng, window, mass, m)])

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        parts = list(pool.map(run, zip(seeds, sizes)))
    values = np.concatenate(parts)
    lhs = math.fsum(values) / values.size
    stderr = float(np.std(values, ddof=1) / math.sqrt(values.size))
    rhs = lp_integral(G, window, G.max_order)
    degenerate = stderr == 0.0
    tol = 1e-12 * max(1.0, abs(rhs)) if degenerate else 3.0 * stderr
    return IdentityCheck(lhs, stderr, rhs, abs(lhs - rhs) <= tol, degenerate, int(values.size))


def write_configurations_csv(path, configs: Sequence[FiniteConfiguration]) -> None:
    """One row per point: ``sample, index, x0, ..., x{d-1}``."""
    d = configs[0].dim if configs else 1
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["sample", "index"] + [f"x{i}" for i in range(d)])
        for s, g in enumerate(configs):
            for i, p in enumerate(g.points):
                w.writerow([s, i] + ["%.17g" % v for v in p])

