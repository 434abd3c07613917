"""Two-regime growth fitting with a single change point.

A metric series is modeled as an exponential segment followed by a linear one
(or the reverse); every admissible split is scanned and both orderings fit on
each side, keeping the split with the least total squared error. Exponential
segments are fit by linear regression on log y, but every sum of squared
residuals is evaluated in the original y units so exponential and linear
candidates compete on the same footing. A two-segment model only wins if it
beats the best single-segment fit by a parsimony factor; otherwise the series
is classified as a single exponential or a single line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DomainError, InsufficientDataError, ParameterError

DEFAULT_MIN_SEGMENT = 6
DEFAULT_PARSIMONY = 0.5


@dataclass(frozen=True)
class SeriesPoint:
    """One observation: x is a 1-based month index, y the metric value."""

    x: int
    y: float


class GrowthPattern(str, Enum):
    EXP_THEN_LINEAR = "exp_then_linear"
    LINEAR_THEN_EXP = "linear_then_exp"
    SINGLE_EXP = "single_exp"
    SINGLE_LINEAR = "single_linear"


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    sse: float

    def predict(self, x: float) -> float:
        return self.slope * x + self.intercept

    def params(self) -> dict:
        return {"model": "linear", "slope": self.slope, "intercept": self.intercept, "sse": self.sse}


@dataclass(frozen=True)
class ExpFit:
    """y = scale * exp(rate * x); sse is measured in y space."""

    rate: float
    scale: float
    sse: float

    def predict(self, x: float) -> float:
        return self.scale * math.exp(self.rate * x)

    def params(self) -> dict:
        return {"model": "exponential", "rate": self.rate, "scale": self.scale, "sse": self.sse}


Segment = LinearFit | ExpFit


@dataclass(frozen=True)
class PhaseFit:
    """Selected growth model: one segment, or two segments split at breakpoint.

    breakpoint is the x of the last point in the first segment; None for
    single-segment patterns, where second_segment is None as well.
    """

    pattern: GrowthPattern
    breakpoint: int | None
    first_segment: Segment
    second_segment: Segment | None
    total_sse: float

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern.value,
            "breakpoint": self.breakpoint,
            "first_segment": self.first_segment.params(),
            "second_segment": self.second_segment.params() if self.second_segment else None,
            "total_sse": self.total_sse,
        }


def trend_label(segment: Segment | None) -> str:
    if segment is None:
        return "-"
    return "exponential growth" if isinstance(segment, ExpFit) else "linear growth"


def _xy(points: Sequence[SeriesPoint]) -> tuple[np.ndarray, np.ndarray]:
    x = np.array([p.x for p in points], dtype=float)
    y = np.array([p.y for p in points], dtype=float)
    return x, y


def fit_linear(points: Sequence[SeriesPoint]) -> LinearFit:
    """Ordinary least squares of y on x."""
    if len(points) < 2:
        raise InsufficientDataError(f"linear fit needs >= 2 points, got {len(points)}")
    x, y = _xy(points)
    slope, intercept = np.polyfit(x, y, 1)
    sse = float(np.sum((y - (slope * x + intercept)) ** 2))
    return LinearFit(slope=float(slope), intercept=float(intercept), sse=sse)


def fit_exponential(points: Sequence[SeriesPoint]) -> ExpFit:
    """Least squares of log y on x; the reported sse is recomputed in y space."""
    if len(points) < 2:
        raise InsufficientDataError(f"exponential fit needs >= 2 points, got {len(points)}")
    bad = next((p for p in points if p.y <= 0), None)
    if bad is not None:
        raise DomainError(f"exponential fit needs y > 0, got y={bad.y} at x={bad.x}")
    x, y = _xy(points)
    rate, log_scale = np.polyfit(x, np.log(y), 1)
    scale = math.exp(float(log_scale))
    with np.errstate(over="ignore"):
        sse = float(np.sum((y - scale * np.exp(rate * x)) ** 2))
    return ExpFit(rate=float(rate), scale=scale, sse=sse)


def detect_phase_change(
    points: Sequence[SeriesPoint],
    min_segment: int = DEFAULT_MIN_SEGMENT,
    parsimony: float = DEFAULT_PARSIMONY,
) -> PhaseFit:
    """Locate a single change point between exponential and linear regimes.

    Scans every split leaving at least min_segment points per side, fitting
    (exp | linear) and (linear | exp) at each; the least-total-sse candidate
    wins, with ties going to the earliest breakpoint and to the exp-first
    ordering. The two-segment winner is returned only when its total sse is
    below parsimony times the best single-segment sse.
    """
    if min_segment < 3:
        raise ParameterError(f"min_segment must be >= 3, got {min_segment}")
    if not 0 < parsimony <= 1:
        raise ParameterError(f"parsimony must be in (0, 1], got {parsimony}")
    pts = list(points)
    n = len(pts)
    if n < 2 * min_segment:
        raise InsufficientDataError(f"need >= {2 * min_segment} points, got {n}")
    for a, b in zip(pts, pts[1:]):
        if b.x <= a.x:
            raise ParameterError(f"x must be strictly increasing, got {a.x} then {b.x}")
    bad = next((p for p in pts if p.y <= 0), None)
    if bad is not None:
        raise DomainError(f"phase detection needs y > 0, got y={bad.y} at x={bad.x}")

    best: tuple[float, GrowthPattern, int, Segment, Segment] | None = None
    for i in range(min_segment, n - min_segment + 1):
        seg1, seg2 = pts[:i], pts[i:]
        exp1 = fit_exponential(seg1)
        lin1 = fit_linear(seg1)
        exp2 = fit_exponential(seg2)
        lin2 = fit_linear(seg2)
        candidates = (
            (GrowthPattern.EXP_THEN_LINEAR, exp1, lin2),
            (GrowthPattern.LINEAR_THEN_EXP, lin1, exp2),
        )
        for pattern, first, second in candidates:
            total = first.sse + second.sse
            if best is None or total < best[0]:
                best = (total, pattern, pts[i - 1].x, first, second)

    single_lin = fit_linear(pts)
    single_exp = fit_exponential(pts)
    # Dust-level sse differences (for instance on a constant series, where both
    # models are exact) are ties, and ties go to the linear model.
    tie_eps = 1e-12 * sum(p.y * p.y for p in pts)
    if single_lin.sse <= single_exp.sse + tie_eps:
        single = PhaseFit(GrowthPattern.SINGLE_LINEAR, None, single_lin, None, single_lin.sse)
    else:
        single = PhaseFit(GrowthPattern.SINGLE_EXP, None, single_exp, None, single_exp.sse)

    if best is not None and single.total_sse > tie_eps and best[0] < parsimony * single.total_sse:
        total, pattern, breakpoint, first, second = best
        return PhaseFit(pattern, breakpoint, first, second, total)
    return single


def classify_transition(
    fit: PhaseFit, metric: str = "", dates: Sequence[str] | None = None
) -> str:
    """Render one summary row: pre-break trend, post-break trend, break date.

    The breakpoint is a 1-based position into the series' date column; when
    dates are supplied the position is mapped back to its YYYY-MM label.
    """
    prefix = f"{metric}: " if metric else ""
    first = trend_label(fit.first_segment)
    if fit.second_segment is None:
        return f"{prefix}{first} | -, no break"
    when = str(fit.breakpoint)
    if dates and fit.breakpoint is not None and 1 <= fit.breakpoint <= len(dates):
        when = dates[fit.breakpoint - 1]
    return f"{prefix}{first} | {trend_label(fit.second_segment)}, break {when}"
