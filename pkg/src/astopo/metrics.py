"""Per-snapshot topology metrics and their time series.

Whole-graph counts (N, L, max and average degree) are taken on the full
snapshot; structure metrics (ASPL, clustering, assortativity, degree-CCDF
exponent) on its giant component, so disconnected fixture months stay well
defined. Counting metrics use integer arithmetic until the final division,
which makes them exact and relabeling-invariant bit for bit.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AsTopoError,
    DegenerateInputError,
    EmptyGraphError,
    InsufficientDataError,
    UndefinedMetricError,
)
from .graph import AsGraph, Snapshot, SnapshotSeries

CSV_HEADER = "date,N,L,k_max,k_avg,aspl,C,rho,r"
CCDF_CSV_HEADER = "k,p"


@dataclass(frozen=True)
class CcdfPoint:
    """Fraction p of nodes whose degree is at least k."""

    k: int
    p: float


@dataclass
class MetricRow:
    date: str
    N: int
    L: int
    k_max: int | None
    k_avg: float | None
    aspl: float | None
    C: float | None
    rho: float | None
    r: float | None

    def to_dict(self) -> dict:
        return {
            "date": self.date,
            "N": self.N,
            "L": self.L,
            "k_max": self.k_max,
            "k_avg": self.k_avg,
            "aspl": self.aspl,
            "C": self.C,
            "rho": self.rho,
            "r": self.r,
        }

    def to_csv_row(self) -> str:
        cells = [self.date] + [_cell(v) for v in (
            self.N, self.L, self.k_max, self.k_avg, self.aspl, self.C, self.rho, self.r,
        )]
        return ",".join(cells)


@dataclass
class MetricSeries:
    rows: list[MetricRow]
    family: str
    monitor_set: str

    def to_csv(self) -> str:
        lines = [CSV_HEADER] + [row.to_csv_row() for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_dicts(self) -> list[dict]:
        return [row.to_dict() for row in self.rows]


def _cell(value) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def max_degree(g: AsGraph) -> int:
    if g.node_count == 0:
        raise EmptyGraphError("max degree of an empty graph")
    return max(len(g.neighbors(u)) for u in g.nodes())


def average_degree(g: AsGraph) -> float:
    """Exactly 2L/N."""
    if g.node_count == 0:
        raise EmptyGraphError("average degree of an empty graph")
    return 2 * g.edge_count / g.node_count


def degree_ccdf(g: AsGraph) -> list[CcdfPoint]:
    """One point per realized degree, ascending k; p(k) = |{v: deg(v) >= k}| / N."""
    if g.node_count == 0:
        raise EmptyGraphError("degree CCDF of an empty graph")
    counts = Counter(len(g.neighbors(u)) for u in g.nodes())
    n = g.node_count
    points: list[CcdfPoint] = []
    cumulative = 0
    for k in sorted(counts, reverse=True):
        cumulative += counts[k]
        points.append(CcdfPoint(k, cumulative / n))
    points.reverse()
    return points


def powerlaw_exponent(ccdf: Sequence[CcdfPoint], k_min: int = 1) -> float:
    """Density exponent r from a log-log least-squares fit of the CCDF.

    The CCDF of p(k) ~ k^-r falls as k^-(r-1), so r is the magnitude of the
    fitted slope plus one. Only points with k >= max(k_min, 1) enter the fit.
    """
    usable = [pt for pt in ccdf if pt.k >= max(k_min, 1)]
    if len(usable) < 3:
        raise InsufficientDataError(
            f"power-law fit needs >= 3 CCDF points with k >= {k_min}, have {len(usable)}"
        )
    log_k = np.log([pt.k for pt in usable])
    log_p = np.log([pt.p for pt in usable])
    slope = np.polyfit(log_k, log_p, 1)[0]
    return 1.0 + abs(float(slope))


def average_shortest_path_length(
    g: AsGraph, n_sources: int | None = None, seed: int = 0
) -> float:
    """Mean hop count between node pairs of the giant component.

    Exact when n_sources is None. Otherwise the mean is taken over BFS trees
    from n_sources distinct sources drawn with the given seed; n_sources is
    capped at the component size, at which point the estimate equals the
    exact value bit for bit (distance totals are integers).
    """
    if g.node_count < 2:
        raise DegenerateInputError("ASPL needs at least 2 nodes")
    gc = g.giant_component()
    n = gc.node_count
    if n < 2:
        raise DegenerateInputError("giant component has a single node")
    nodes = sorted(gc.nodes())
    if n_sources is None or n_sources >= n:
        sources = nodes
    else:
        if n_sources < 1:
            raise DegenerateInputError("n_sources must be >= 1")
        sources = random.Random(seed).sample(nodes, n_sources)
    total = 0
    for src in sources:
        total += sum(gc.bfs_distances(src).values())
    return total / (len(sources) * (n - 1))


def clustering_coefficient(g: AsGraph) -> float:
    """Three times triangles over connected triples (paths of length two)."""
    if g.node_count == 0:
        raise EmptyGraphError("clustering of an empty graph")
    triples = sum(d * (d - 1) // 2 for d in (len(g.neighbors(u)) for u in g.nodes()))
    if triples == 0:
        raise UndefinedMetricError("graph has no connected triples")
    closed = 0  # each triangle contributes 3, once per edge
    for u, v in g.edges():
        closed += len(g.neighbors(u) & g.neighbors(v))
    return closed / triples


def assortativity_coefficient(g: AsGraph) -> float:
    """Pearson correlation of end degrees over both orientations of every edge."""
    if g.edge_count == 0:
        raise UndefinedMetricError("assortativity needs at least one edge")
    m2 = 2 * g.edge_count
    s_x = s_xx = s_xy = 0
    for u, v in g.edges():
        du = len(g.neighbors(u))
        dv = len(g.neighbors(v))
        s_x += du + dv
        s_xx += du * du + dv * dv
        s_xy += 2 * du * dv
    var_num = m2 * s_xx - s_x * s_x
    if var_num == 0:
        raise UndefinedMetricError("edge-end degrees have zero variance")
    return (m2 * s_xy - s_x * s_x) / var_num


def _optional(fn: Callable[[], float], *errors) -> float | None:
    try:
        return fn()
    except errors:
        return None


def metric_row(
    snapshot: Snapshot,
    aspl_sources: int | None = None,
    seed: int = 0,
    k_min: int = 1,
) -> MetricRow:
    """All metrics for one snapshot; undefined ones come back as None."""
    g = snapshot.graph
    if g.node_count == 0:
        raise EmptyGraphError(f"snapshot {snapshot.date} has no nodes")
    gc = g.giant_component()
    aspl = _optional(
        lambda: average_shortest_path_length(gc, aspl_sources, seed), DegenerateInputError
    )
    c = _optional(lambda: clustering_coefficient(gc), UndefinedMetricError)
    rho = _optional(lambda: assortativity_coefficient(gc), UndefinedMetricError)
    r = _optional(lambda: powerlaw_exponent(degree_ccdf(gc), k_min), InsufficientDataError)
    return MetricRow(
        date=snapshot.date,
        N=g.node_count,
        L=g.edge_count,
        k_max=max_degree(g),
        k_avg=average_degree(g),
        aspl=aspl,
        C=c,
        rho=rho,
        r=r,
    )


def metrics_series(
    series: SnapshotSeries,
    aspl_sources: int | None = None,
    seed: int = 0,
    k_min: int = 1,
) -> MetricSeries:
    """One MetricRow per snapshot, in series order; errors carry the date."""
    rows = []
    for snap in series.snapshots:
        try:
            rows.append(metric_row(snap, aspl_sources, seed, k_min))
        except AsTopoError as exc:
            raise type(exc)(f"{snap.date}: {exc}") from exc
    return MetricSeries(rows=rows, family=series.family, monitor_set=series.monitor_set)


def ccdf_to_csv(points: Sequence[CcdfPoint]) -> str:
    lines = [CCDF_CSV_HEADER] + [f"{pt.k},{repr(pt.p)}" for pt in points]
    return "\n".join(lines) + "\n"
