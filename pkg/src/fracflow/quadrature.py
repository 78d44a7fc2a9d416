"""Gauss-Legendre panel quadrature and compensated summation.

These are the numerical primitives reused by the special functions, the
subordination transform and the configuration-space cubature.  Integrands are
always evaluated on whole arrays of nodes at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import AccuracyError


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``order``-point rule on [-1, 1] (read-only)."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(lo: np.ndarray, hi: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Map the reference rule onto each panel ``[lo[i], hi[i]]``.

    Returns ``(nodes, weights)`` with shape ``(n_panels, order)``.
    """
    x, w = gauss_legendre(order)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return mid[:, None] + half[:, None] * x, half[:, None] * w


def neumaier_sum(values, axis: int = -1) -> np.ndarray:
    """Compensated (Kahan-Babuska-Neumaier) summation along ``axis``."""
    values = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    total = np.zeros(values.shape[:-1])
    comp = np.zeros(values.shape[:-1])
    for k in range(values.shape[-1]):
        v = values[..., k]
        t = total + v
        big = np.abs(total) >= np.abs(v)
        comp += np.where(big, (total - t) + v, (v - t) + total)
        total = t
    return total + comp


def logsumexp(log_terms, axis=None) -> np.ndarray | float:
    """Stable ``log(sum(exp(log_terms)))``; ``-inf`` entries are ignored."""
    a = np.asarray(log_terms, dtype=float)
    m = np.max(a, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        out = np.log(np.sum(np.exp(a - m), axis=axis, keepdims=True)) + m
    if axis is None:
        return float(out.reshape(()))
    return np.squeeze(out, axis=axis)


@dataclass
class QuadResult:
    value: float
    error: float
    n_panels: int
    edges: np.ndarray


def pointwise(f: Callable[[np.ndarray], np.ndarray], order: int = 20):
    """Adapt a vectorised pointwise integrand to the per-panel protocol."""

    def integrand(lo, hi):
        x, _ = panel_nodes(lo, hi, order)
        return np.asarray(f(x), dtype=float).reshape(x.shape)

    return integrand


def adaptive_gauss_legendre(
    integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
    edges: Sequence[float],
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-14,
    max_panels: int = 4096,
    order: int = 20,
) -> QuadResult:
    """Globally adaptive bisection of panels with a fixed Gauss-Legendre rule.

    ``integrand(lo, hi)`` returns the integrand at the ``order`` mapped nodes
    of every panel ``[lo[i], hi[i]]`` (shape ``(n_panels, order)``); callers
    that need caching key it on the panel bounds.  Use :func:`pointwise` for
    a plain vectorised function.

    Each panel is integrated once as a whole and once as two halves; the
    difference is its error estimate and the halves are kept as its value.
    Panels whose error exceeds their share of the global tolerance are
    bisected until the summed estimate meets ``max(abs_tol, rel_tol*|I|)``.
    """
    edges = np.asarray(edges, dtype=float)

    def integrate(lo, hi):
        _, w = panel_nodes(lo, hi, order)
        return np.sum(w * integrand(lo, hi), axis=1)

    def refine(lo, hi):
        mid = 0.5 * (lo + hi)
        whole = integrate(lo, hi)
        halves = integrate(np.concatenate([lo, mid]), np.concatenate([mid, hi]))
        n = lo.size
        fine = halves[:n] + halves[n:]
        return fine, np.abs(fine - whole)

    lo, hi = edges[:-1], edges[1:]
    vals, errs = refine(lo, hi)
    while True:
        total = float(neumaier_sum(vals))
        err = float(np.sum(errs))
        tol = max(abs_tol, rel_tol * abs(total))
        if err <= tol or not np.isfinite(err):
            break
        if lo.size >= max_panels:
            raise AccuracyError(
                f"quadrature did not reach tolerance within {max_panels} panels",
                estimate=total,
                error_estimate=err,
            )
        bad = errs > tol / lo.size
        room = max_panels - lo.size
        if int(bad.sum()) > room:
            keep = np.argsort(errs)[::-1][: max(1, room)]
            bad = np.zeros_like(bad)
            bad[keep] = True
        mid = 0.5 * (lo[bad] + hi[bad])
        new_lo = np.concatenate([lo[bad], mid])
        new_hi = np.concatenate([mid, hi[bad]])
        new_vals, new_errs = refine(new_lo, new_hi)
        lo = np.concatenate([lo[~bad], new_lo])
        hi = np.concatenate([hi[~bad], new_hi])
        vals = np.concatenate([vals[~bad], new_vals])
        errs = np.concatenate([errs[~bad], new_errs])
        # fixed reduction order keeps results bit-stable
        idx = np.argsort(lo, kind="stable")
        lo, hi, vals, errs = lo[idx], hi[idx], vals[idx], errs[idx]
    return QuadResult(total, err, int(lo.size), np.concatenate([lo, hi[-1:]]))
