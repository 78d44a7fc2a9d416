"""L1 discretisation of the Caputo-Djrbashian derivative and FFPE residuals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .specfun import as_alpha
from .subordination import GrowthClass, QuadratureSpec, subordinate_scalar


@dataclass(frozen=True)
class TimeGrid:
    """Uniform nodes ``t_k = t0 + k h``, ``k = 0..n_steps`` (t0 is 0 throughout)."""

    h: float
    n_steps: int
    t0: float = 0.0

    def __post_init__(self):
        if not (self.h > 0 and math.isfinite(self.h)):
            raise DomainError(f"time step must be positive, got {self.h!r}")
        if int(self.n_steps) < 1:
            raise DomainError("a time grid needs at least one step")
        if self.t0 < 0:
            raise DomainError("t0 must be non-negative")

    @classmethod
    def covering(cls, t_max: float, n_steps: int) -> "TimeGrid":
        return cls(h=t_max / n_steps, n_steps=n_steps)

    @property
    def nodes(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.n_steps + 1)


@dataclass(frozen=True)
class SampledPath:
    grid: TimeGrid
    values: np.ndarray
    regime: str = "l1"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.n_steps + 1,):
            raise DomainError(
                f"path has {vals.size} values for a grid of {self.grid.n_steps + 1} nodes")
        if not np.all(np.isfinite(vals)):
            raise DomainError("path values must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def sample(cls, f: Callable[[np.ndarray], np.ndarray], grid: TimeGrid) -> "SampledPath":
        return cls(grid, np.asarray(f(grid.nodes), dtype=float))


def l1_weights(alpha: float, n: int) -> np.ndarray:
    """``b_j = (j+1)^(1-alpha) - j^(1-alpha)`` for ``j = 0..n-1``."""
    j = np.arange(n, dtype=float)
    return (j + 1.0) ** (1.0 - alpha) - j ** (1.0 - alpha)


def caputo_l1(path: SampledPath, alpha) -> SampledPath:
    """L1 approximation of the Caputo derivative at every node.

    ``D f(t_k) ~ h^-alpha / Gamma(2-alpha) * sum_{j<k} b_j (f_{k-j} - f_{k-j-1})``.
    Node 0 carries 0 (the derivative is not defined pointwise there).  At
    ``alpha = 1`` the result is the backward difference, flagged by
    ``regime == "classical"``.
    """
    a = as_alpha(alpha)
    grid = path.grid
    f = path.values
    if f.size < 2:
        raise DomainError("need at least two nodes")
    diffs = np.diff(f)
    out = np.zeros_like(f)
    if a == 1.0:
        out[1:] = diffs / grid.h
        return SampledPath(grid, out, regime="classical")
    b = l1_weights(a, diffs.size)
    scale = grid.h ** (-a) / math.gamma(2.0 - a)
    out[1:] = scale * np.convolve(b, diffs)[: diffs.size]
    return SampledPath(grid, out, regime="l1")


def subordinated_path(alpha, classical_solution: Callable, grid: TimeGrid,
                      spec: QuadratureSpec | None = None,
                      growth: GrowthClass | None = None) -> SampledPath:
    """Sample ``t -> int Phi_alpha(tau) u(tau t^alpha) d tau`` on the grid."""
    a = as_alpha(alpha)
    values = []
    for t in grid.nodes:
        if a == 1.0 or t == 0:
            values.append(float(np.asarray(classical_solution(np.array([t])))[0]))
            continue
        scale = t ** a
        values.append(subordinate_scalar(
            a, t, lambda tau, s=scale: classical_solution(np.asarray(tau) * s), spec, growth))
    return SampledPath(grid, np.array(values))


def ffpe_residual(alpha, classical_solution: Callable, generator_rate: Callable,
                  grid: TimeGrid, spec: QuadratureSpec | None = None,
                  growth: GrowthClass | None = None, t_min: float = 0.0) -> float:
    """Max over interior nodes ``t_k >= t_min`` of
    ``|D^alpha u_alpha(t_k) - generator_rate(t_k, u_alpha(t_k))|``
    where ``u_alpha`` is the subordinated classical solution.

    ``t_min > 0`` excludes the initial layer, where the L1 consistency error
    of non-smooth paths such as ``t^alpha`` does not vanish with h.
    """
    path = subordinated_path(alpha, classical_solution, grid, spec, growth)
    deriv = caputo_l1(path, alpha)
    t = grid.nodes
    mask = (np.arange(t.size) >= 1) & (t >= t_min - 1e-12 * grid.h)
    if not np.any(mask):
        raise DomainError("no grid nodes at or beyond t_min")
    rate = np.array([float(generator_rate(tk, uk)) for tk, uk in zip(t[mask], path.values[mask])])
    return float(np.max(np.abs(deriv.values[mask] - rate)))
