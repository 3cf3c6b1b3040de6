"""Sampling of the packing model over swelling-factor grids.

The curve ``u_bs(xi)`` has kinks at every packing transition, so extrema are
found by plain three-point comparison on the samples rather than from any
derivative estimate.
"""

from __future__ import annotations

import enum
import math
import os
from bisect import bisect_left
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InputValidationError, InsufficientDataError
from .packing import (
    CHI_MAX,
    MINIMISATION_LIMIT,
    PackingScenario,
    breathing_bs_at_start,
    hexagonal_points,
    packing_state,
)
from .partition import Definition, Validity, ValidityConfig, convert, validity_gate

__all__ = [
    "Spacing",
    "SweepConfig",
    "SweepPoint",
    "ExtremaReport",
    "xi_grid",
    "evaluate_point",
    "run_sweep",
    "detect_extrema",
    "minimisation_limit",
    "local_step",
    "XI_MAX",
]

XI_MAX = 2.0**20


class Spacing(str, enum.Enum):
    LINEAR = "linear"
    LOG2 = "log2"


@dataclass(frozen=True)
class SweepConfig:
    scenario: PackingScenario
    xi_start: float
    xi_end: float
    samples: int
    spacing: Spacing = Spacing.LOG2
    validity: ValidityConfig = field(default_factory=ValidityConfig)

    def __post_init__(self) -> None:
        if not isinstance(self.samples, (int, np.integer)) or self.samples < 2:
            raise InputValidationError(f"samples must be an integer >= 2, got {self.samples!r}")
        if not (math.isfinite(self.xi_start) and self.xi_start >= 1.0):
            raise InputValidationError(f"xi_start must be >= 1, got {self.xi_start!r}")
        if not (math.isfinite(self.xi_end) and self.xi_end > self.xi_start):
            raise InputValidationError(
                f"xi_end must exceed xi_start, got {self.xi_start!r}:{self.xi_end!r}"
            )
        if self.xi_end > XI_MAX:
            raise InputValidationError(f"xi_end must not exceed 2**20, got {self.xi_end!r}")
        object.__setattr__(self, "spacing", Spacing(self.spacing))


@dataclass(frozen=True)
class SweepPoint:
    xi: float
    n: int
    alpha: float
    u_bs: float
    u_vs: float
    chi: float
    a_body_tilde: float
    validity: Validity

    @property
    def is_gap(self) -> bool:
        return self.validity is Validity.INVALID or not math.isfinite(self.u_bs)


@dataclass
class ExtremaReport:
    minima: List[Tuple[float, float]]
    maxima: List[Tuple[float, float]]
    predicted_minima: List[float]
    max_abs_position_error: float

    @property
    def global_maximum(self) -> Optional[Tuple[float, float]]:
        return max(self.maxima, key=lambda m: m[1]) if self.maxima else None

    @property
    def global_minimum(self) -> Optional[Tuple[float, float]]:
        return min(self.minima, key=lambda m: m[1]) if self.minima else None


def xi_grid(cfg: SweepConfig) -> np.ndarray:
    """Sample positions; the end points are reproduced exactly."""
    if cfg.spacing is Spacing.LOG2:
        xs = np.exp2(np.linspace(math.log2(cfg.xi_start), math.log2(cfg.xi_end), cfg.samples))
    else:
        xs = np.linspace(cfg.xi_start, cfg.xi_end, cfg.samples)
    xs[0] = cfg.xi_start
    xs[-1] = cfg.xi_end
    return xs


def evaluate_point(xi: float, scenario: PackingScenario, validity: ValidityConfig) -> SweepPoint:
    xi = float(xi)
    st = packing_state(xi, scenario)
    d_body = st.a_body_tilde - st.a_body0_tilde
    d_solid = math.pi * (xi * xi - 1.0)
    if xi == 1.0:
        u_bs = breathing_bs_at_start(scenario)
    else:
        u_bs = d_body / d_solid
    gate = validity_gate(d_body, d_solid, validity)
    if gate is Validity.INVALID:
        u_bs = u_vs = math.nan
    else:
        u_vs = convert(u_bs, Definition.BS, Definition.VS)
    return SweepPoint(
        xi=xi,
        n=st.n,
        alpha=st.alpha,
        u_bs=u_bs,
        u_vs=u_vs,
        chi=st.solid_fraction,
        a_body_tilde=st.a_body_tilde,
        validity=gate,
    )


def _evaluate_chunk(xs, scenario, validity) -> List[SweepPoint]:
    return [evaluate_point(x, scenario, validity) for x in xs]


def _resolve_jobs(jobs: Optional[int]) -> int:
    if jobs is None:
        env = os.environ.get("BREATHKIT_JOBS")
        jobs = int(env) if env else 1
    if jobs < 1:
        raise InputValidationError(f"jobs must be >= 1, got {jobs!r}")
    return jobs


def run_sweep(cfg: SweepConfig, jobs: Optional[int] = 1) -> List[SweepPoint]:
    """Evaluate the model on the configured grid, sorted by ``xi``.

    With ``jobs > 1`` the grid is split into contiguous sub-ranges evaluated
    in worker processes; ``jobs=None`` reads ``BREATHKIT_JOBS``.
    """
    xs = xi_grid(cfg)
    jobs = min(_resolve_jobs(jobs), len(xs))
    if jobs == 1:
        points = _evaluate_chunk(xs, cfg.scenario, cfg.validity)
    else:
        chunks = np.array_split(xs, jobs)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(
                _evaluate_chunk,
                chunks,
                [cfg.scenario] * jobs,
                [cfg.validity] * jobs,
            )
            points = [p for part in parts for p in part]
    points.sort(key=lambda p: p.xi)
    return points


def local_step(xs: Sequence[float], x: float) -> float:
    """Larger of the two grid intervals around the sample nearest to ``x``."""
    xs = np.asarray(xs, dtype=float)
    i = int(np.argmin(np.abs(xs - x)))
    steps = []
    if i > 0:
        steps.append(xs[i] - xs[i - 1])
    if i < len(xs) - 1:
        steps.append(xs[i + 1] - xs[i])
    return float(max(steps))


def _nearest(sorted_xs: Sequence[float], x: float) -> float:
    i = bisect_left(sorted_xs, x)
    best = math.inf
    for j in (i - 1, i):
        if 0 <= j < len(sorted_xs):
            best = min(best, abs(sorted_xs[j] - x))
    return best


def detect_extrema(series: Sequence[SweepPoint], alpha0: float = 0.0) -> ExtremaReport:
    """Discrete local minima and maxima of ``u_bs`` along a sorted series.

    Gap points (invalid or non-finite) are dropped first.  A run of equal
    values counts as one sample located at its leftmost point; the series
    end points are never reported.  Predicted minima are the hexagonal
    states ``2**n cos(alpha0)`` and ``2**(n+1) cos(alpha0) / sqrt(3)``.
    """
    if len(series) < 3:
        raise InsufficientDataError(f"need at least 3 points, got {len(series)}")
    usable = [p for p in series if not p.is_gap]

    runs: List[Tuple[float, float]] = []
    for p in usable:
        if runs and p.u_bs == runs[-1][1]:
            continue
        runs.append((p.xi, p.u_bs))

    minima, maxima = [], []
    for (_, left), (x, u), (_, right) in zip(runs, runs[1:], runs[2:]):
        if u < left and u < right:
            minima.append((x, u))
        elif u > left and u > right:
            maxima.append((x, u))

    predicted = hexagonal_points(alpha0, series[0].xi, series[-1].xi)
    if minima and predicted:
        err = max(_nearest(predicted, x) for x, _ in minima)
    elif minima:
        err = math.inf
    else:
        err = 0.0
    return ExtremaReport(minima, maxima, predicted, err)


def minimisation_limit() -> float:
    """Limit of the local minima of ``u_bs`` at high swelling, ``sqrt(12)/pi``."""
    return MINIMISATION_LIMIT


def max_solid_fraction() -> float:
    return CHI_MAX
