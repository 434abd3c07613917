"""IPv6-over-IPv4 tunnelling quantification.

For every adjacency of an IPv6 snapshot, how many hops apart are its
endpoints on the matching IPv4 snapshot? A distance of 1 means the link is
native; larger distances suggest the IPv6 session is tunnelled across IPv4
infrastructure. Edges whose endpoints are absent from the IPv4 graph, or
present but unreachable, are excluded from the average and reported apart.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateInputError, NoOverlapError
from .graph import AsGraph, SnapshotSeries

DISTRIBUTION_CSV_HEADER = "d,count,probability"
SUMMARY_CSV_HEADER = "date,aspl,p1,missing,disconnected"


@dataclass
class TunnelDistribution:
    """Histogram of IPv4 distances for one month's IPv6 edges.

    counts[d] is the number of IPv6 edges whose endpoints sit d hops apart
    on IPv4; missing counts edges with an endpoint absent from IPv4;
    disconnected counts endpoint pairs present but unreachable.
    """

    date: str | None
    counts: dict[int, int]
    missing: int
    disconnected: int
    aspl: float | None

    @property
    def measured(self) -> int:
        return sum(self.counts.values())

    def probabilities(self) -> dict[int, float]:
        total = self.measured
        return {d: c / total for d, c in self.counts.items()}

    def p1(self) -> float | None:
        total = self.measured
        if total == 0:
            return None
        return self.counts.get(1, 0) / total

    def to_dict(self) -> dict:
        return {
            "date": self.date,
            "counts": dict(self.counts),
            "missing": self.missing,
            "disconnected": self.disconnected,
            "aspl": self.aspl,
        }


def tunnel_path_lengths(g6: AsGraph, g4: AsGraph, date: str | None = None) -> TunnelDistribution:
    """IPv4 shortest-path distribution over the IPv6 edge set.

    BFS runs only from the distinct IPv6-edge endpoints, not from every IPv4
    node, so the cost is bounded by the number of endpoints involved.
    """
    if g6.edge_count == 0:
        raise DegenerateInputError("IPv6 graph has no edges")
    by_source: dict[int, list[int]] = {}
    missing = 0
    for u, v in g6.edges():
        if u in g4 and v in g4:
            by_source.setdefault(u, []).append(v)
        else:
            missing += 1
    counts: dict[int, int] = {}
    disconnected = 0
    for src in sorted(by_source):
        dist = g4.bfs_distances(src)
        for v in by_source[src]:
            d = dist.get(v)
            if d is None:
                disconnected += 1
            else:
                counts[d] = counts.get(d, 0) + 1
    measured = sum(counts.values())
    aspl = sum(d * c for d, c in counts.items()) / measured if measured else None
    return TunnelDistribution(
        date=date,
        counts=dict(sorted(counts.items())),
        missing=missing,
        disconnected=disconnected,
        aspl=aspl,
    )


def tunnel_series(series6: SnapshotSeries, series4: SnapshotSeries) -> list[TunnelDistribution]:
    """One distribution per date present in both series, ascending."""
    by_date6 = {s.date: s for s in series6.snapshots}
    by_date4 = {s.date: s for s in series4.snapshots}
    common = sorted(set(by_date6) & set(by_date4))
    if not common:
        raise NoOverlapError(
            f"no common dates: IPv6 covers {_span(series6)}, IPv4 covers {_span(series4)}"
        )
    out = []
    for date in common:
        try:
            out.append(tunnel_path_lengths(by_date6[date].graph, by_date4[date].graph, date))
        except DegenerateInputError as exc:
            raise DegenerateInputError(f"{date}: {exc}") from exc
    return out


def _span(series: SnapshotSeries) -> str:
    dates = series.dates()
    if not dates:
        return "(empty)"
    return f"{dates[0]}..{dates[-1]}"


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(value)


def distribution_to_csv(dist: TunnelDistribution) -> str:
    """Per-month CSV: one row per distance, then accounting trailer comments."""
    measured = dist.measured
    lines = [DISTRIBUTION_CSV_HEADER]
    for d, c in dist.counts.items():
        lines.append(f"{d},{c},{repr(c / measured)}")
    lines.append(f"# missing: {dist.missing}")
    lines.append(f"# disconnected: {dist.disconnected}")
    lines.append(f"# aspl: {_fmt(dist.aspl)}")
    return "\n".join(lines) + "\n"


def series_summary_to_csv(dists: list[TunnelDistribution]) -> str:
    lines = [SUMMARY_CSV_HEADER]
    for dist in dists:
        lines.append(
            f"{dist.date},{_fmt(dist.aspl)},{_fmt(dist.p1())},{dist.missing},{dist.disconnected}"
        )
    return "\n".join(lines) + "\n"
