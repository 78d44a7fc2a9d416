"""Numerical diagnosis of asymptotic intermittency.

A flow is intermittent when normalised correlations (or moments) grow
without bound.  Divergence cannot be observed on a finite grid, so
:func:`classify` applies a threshold rule to the trace of the log-ratio over
the last decade of ``t``; the thresholds are fields of :class:`Thresholds`.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import DomainError, FracflowError, SizeError

SCHEMA_VERSION = 1
MAX_MOMENT_ORDER = 8

INTERMITTENT = "intermittent"
NON_INTERMITTENT = "non_intermittent"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Partition:
    """Integer partition ``n = n_1 + ... + n_m`` with ``m >= 2`` positive parts."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if len(parts) < 2 or any(p < 1 for p in parts):
            raise DomainError(f"a partition needs at least two positive parts, got {self.parts!r}")
        object.__setattr__(self, "parts", tuple(sorted(parts, reverse=True)))

    @property
    def total(self) -> int:
        return sum(self.parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """``"3+1+1"`` or ``"3,1,1"``."""
        try:
            return cls(tuple(int(p) for p in text.replace(",", "+").split("+")))
        except ValueError as exc:
            raise DomainError(f"cannot parse partition {text!r}") from exc

    def __str__(self) -> str:
        return "+".join(map(str, self.parts))


def partitions_of(n: int) -> Iterator[Partition]:
    """All partitions of ``n`` into at least two parts, coarsest first."""
    def rec(rest, largest):
        if rest == 0:
            yield ()
            return
        for p in range(min(rest, largest), 0, -1):
            for tail in rec(rest - p, p):
                yield (p,) + tail
    found = [p for p in rec(n, n) if len(p) >= 2]
    for parts in sorted(found, key=lambda p: (len(p), [-x for x in p])):
        yield Partition(parts)


@dataclass(frozen=True)
class Thresholds:
    divergence_log: float = math.log(1e3)
    flat_eps: float = 0.05
    min_points: int = 20
    min_decades: float = 3.0


@dataclass(frozen=True)
class IntermittencyReport:
    verdict: str
    ratio_trace: tuple[tuple[float, float], ...]
    fitted_growth_exponent: float | None
    partition: Partition
    last_decade_variation: float | None = None
    last_decade_slope: float | None = None
    decade_increments: tuple[float, float] | None = None
    diagnostics: tuple[str, ...] = ()
    thresholds: Thresholds = field(default_factory=Thresholds)
    source: str = "correlations"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema_version"] = SCHEMA_VERSION
        d["partition"] = str(self.partition)
        d["ratio_trace"] = [list(p) for p in self.ratio_trace]
        d["thresholds"] = asdict(self.thresholds)
        d["diagnostics"] = list(self.diagnostics)
        if self.decade_increments is not None:
            d["decade_increments"] = list(self.decade_increments)
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def log_corr_ratio(corr_log: Callable[[int, float], float], partition: Partition, t: float) -> float:
    """``ln k(n, t) - sum_k ln k(n_k, t)`` for a spatially homogeneous flow."""
    return corr_log(partition.total, t) - math.fsum(corr_log(p, t) for p in partition.parts)


def _validate_grid(t_grid, thr: Thresholds) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < thr.min_points:
        raise DomainError(f"time grid needs at least {thr.min_points} points")
    if not (np.all(np.isfinite(t)) and np.all(t > 0) and np.all(np.diff(t) > 0)):
        raise DomainError("time grid must be positive, finite and strictly increasing")
    if math.log10(t[-1] / t[0]) < thr.min_decades - 1e-9:
        raise DomainError(f"time grid must span at least {thr.min_decades:g} decades")
    return t


def _decide(t: np.ndarray, v: np.ndarray, thr: Thresholds):
    last = t >= t[-1] / 10.0
    tl, vl = t[last], v[last]
    tv = float(np.sum(np.abs(np.diff(vl))))
    slope = float(np.polyfit(np.log(tl), vl, 1)[0]) if tl.size >= 2 else 0.0
    # a bounded monotone approach decelerates from decade to decade, a
    # power-law divergence does not
    lt = np.log(t)
    v10, v100 = np.interp(np.log(t[-1] / np.array([10.0, 100.0])), lt, v)
    increments = (float(v10 - v100), float(v[-1] - v10))
    if v[-1] > thr.divergence_log and slope > 0 and increments[1] >= increments[0]:
        verdict = INTERMITTENT
    elif tv <= thr.flat_eps:
        verdict = NON_INTERMITTENT
    else:
        verdict = INCONCLUSIVE
    exponent = None
    if np.all(vl > 0) and tl.size >= 2:
        exponent = float(np.polyfit(np.log(tl), np.log(vl), 1)[0])
    return verdict, tv, slope, exponent, increments


def _trace(fn: Callable[[float], float], t: np.ndarray, workers: int):
    def safe(tk):
        try:
            v = float(fn(float(tk)))
        except (FracflowError, ArithmeticError, ValueError) as exc:
            return math.nan, f"t={tk:.6g}: {type(exc).__name__}: {exc}"
        if not math.isfinite(v):
            return math.nan, f"t={tk:.6g}: non-finite log-ratio"
        return v, None
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(safe, t))
    else:
        results = [safe(tk) for tk in t]
    return np.array([r[0] for r in results]), tuple(r[1] for r in results if r[1])


def _report(fn, partition, t_grid, thresholds, workers, source) -> IntermittencyReport:
    thr = thresholds or Thresholds()
    t = _validate_grid(t_grid, thr)
    v, diag = _trace(fn, t, workers)
    trace = tuple((float(a), float(b)) for a, b in zip(t, v))
    if diag:
        return IntermittencyReport(INCONCLUSIVE, trace, None, partition, diagnostics=diag,
                                   thresholds=thr, source=source)
    verdict, tv, slope, exponent, increments = _decide(t, v, thr)
    return IntermittencyReport(verdict, trace, exponent, partition, tv, slope, increments,
                               thresholds=thr, source=source)


def classify(corr_log: Callable[[int, float], float], partition: Partition, t_grid: Sequence[float],
             thresholds: Thresholds | None = None, workers: int = 1) -> IntermittencyReport:
    """Classify the correlation log-ratio trace of ``partition`` over ``t_grid``.

    intermittent
        final log-ratio above ``divergence_log``, positive least-squares
        slope against ``ln t`` over the last decade, and a last-decade
        increase at least as large as the one over the decade before.
    non_intermittent
        total variation over the last decade at most ``flat_eps``; the trace
        has levelled off, whatever its height.
    inconclusive
        anything else, including evaluation failures (listed in
        ``diagnostics``).

    ``fitted_growth_exponent`` is the log-log slope of the ratio over the
    last decade when it is positive there.
    """
    return _report(lambda tk: log_corr_ratio(corr_log, partition, tk), partition, t_grid,
                   thresholds, workers, "correlations")


def aggregate_verdict(reports: Sequence[IntermittencyReport]) -> str:
    """Intermittency must hold for every partition; one bounded ratio refutes it."""
    verdicts = {r.verdict for r in reports}
    if verdicts == {INTERMITTENT}:
        return INTERMITTENT
    if NON_INTERMITTENT in verdicts:
        return NON_INTERMITTENT
    return INCONCLUSIVE


def classify_all(corr_log, n_max: int, t_grid, thresholds: Thresholds | None = None,
                 workers: int = 1) -> tuple[str, list[IntermittencyReport]]:
    """Classify every partition of every ``n <= n_max`` (only this finite set is checked)."""
    reports = [classify(corr_log, p, t_grid, thresholds, workers)
               for n in range(2, n_max + 1) for p in partitions_of(n)]
    return aggregate_verdict(reports), reports


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------

def stirling2(p: int, k: int) -> int:
    """Stirling number of the second kind."""
    row = [1] + [0] * k
    for n in range(1, p + 1):
        new = [0] * (k + 1)
        for j in range(1, min(n, k) + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k]


def _check_moment_args(p: int, f_mass: float, volume: float):
    if int(p) != p or p < 1:
        raise DomainError("moment order must be a positive integer")
    if p > MAX_MOMENT_ORDER:
        raise SizeError(f"moment order {p} exceeds {MAX_MOMENT_ORDER}")
    if not (f_mass > 0 and volume > 0):
        raise DomainError("f_mass and volume must be positive")


def moment_from_correlations(corr: Callable[[int, float], float], p: int, f_mass: float,
                             t: float, volume: float = 1.0) -> float:
    """``E[X_f^p]`` for ``f = c 1_Lambda`` and homogeneous correlations ``r^(k)(t)``.

    Grouping the ``p`` factors by set partition gives
    ``m^p = sum_k S(p, k) c^p |Lambda|^k r^(k)(t)`` with ``c = f_mass/|Lambda|``.
    """
    _check_moment_args(p, f_mass, volume)
    c = f_mass / volume
    return math.fsum(stirling2(p, k) * c ** p * volume ** k * corr(k, t) for k in range(1, p + 1))


def log_moment_from_correlations(corr_log: Callable[[int, float], float], p: int, f_mass: float,
                                 t: float, volume: float = 1.0) -> float:
    """Log-domain :func:`moment_from_correlations`."""
    _check_moment_args(p, f_mass, volume)
    c = f_mass / volume
    lt = np.array([math.log(stirling2(p, k)) + p * math.log(c) + k * math.log(volume) + corr_log(k, t)
                   for k in range(1, p + 1)])
    top = float(np.max(lt))
    return top + math.log(math.fsum(np.exp(lt - top)))


def log_moment_ratio(corr_log, partition: Partition, t: float, f_mass: float = 1.0,
                     volume: float = 1.0) -> float:
    """``ln m^n - sum_k ln m^{n_k}``."""
    lm = lambda q: log_moment_from_correlations(corr_log, q, f_mass, t, volume)
    return lm(partition.total) - math.fsum(lm(q) for q in partition.parts)


def classify_moments(corr_log, partition: Partition, t_grid, thresholds: Thresholds | None = None,
                     f_mass: float = 1.0, volume: float = 1.0, workers: int = 1) -> IntermittencyReport:
    """As :func:`classify`, on the moment log-ratio of ``partition``."""
    return _report(lambda tk: log_moment_ratio(corr_log, partition, tk, f_mass, volume), partition,
                   t_grid, thresholds, workers, "moments")
