"""Undirected simple AS graph plus monthly snapshot containers.

AS numbers are plain ints in the 32-bit range and are never remapped: the
number that goes in is the number that comes back out of every traversal,
serialization, and report.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import CorpusError, EmptyGraphError, UnknownNodeError

AS_MAX = 2**32 - 1

IPV4 = "ipv4"
IPV6 = "ipv6"
FAMILIES = (IPV4, IPV6)

_DATE_RE = re.compile(r"^\d{4}-(0[1-9]|1[0-2])$")
_DIRECTIVE_RE = re.compile(r"^#\s*([A-Za-z_]+)\s*:\s*(.*?)\s*$")


def validate_date(date: str) -> str:
    """Check a YYYY-MM label; zero-padded, so string order is date order."""
    if not _DATE_RE.match(date):
        raise CorpusError(f"bad date {date!r} (expected YYYY-MM)")
    return date


def validate_family(family: str) -> str:
    if family not in FAMILIES:
        raise CorpusError(f"bad address family {family!r} (expected ipv4 or ipv6)")
    return family


class AsGraph:
    """Undirected simple graph over AS numbers.

    Self-loops and duplicate edges are silently refused by add_edge, which is
    exactly what collapsing repeated BGP announcements needs.
    """

    __slots__ = ("_adj", "_edge_count")

    def __init__(self) -> None:
        self._adj: dict[int, set[int]] = {}
        self._edge_count = 0

    @classmethod
    def from_edges(cls, pairs: Iterable[tuple[int, int]]) -> "AsGraph":
        g = cls()
        for u, v in pairs:
            g.add_edge(u, v)
        return g

    def __contains__(self, u: int) -> bool:
        return u in self._adj

    @property
    def node_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def add_node(self, u: int) -> bool:
        """Add an isolated node; True iff it was new."""
        if u in self._adj:
            return False
        self._adj[u] = set()
        return True

    def add_edge(self, u: int, v: int) -> bool:
        """Add the edge {u, v}; True iff the edge was new.

        A self-loop leaves the graph unchanged (no node added) and returns
        False, as does an edge that is already present.
        """
        if u == v:
            return False
        nbrs = self._adj.get(u)
        if nbrs is not None and v in nbrs:
            return False
        self._adj.setdefault(u, set()).add(v)
        self._adj.setdefault(v, set()).add(u)
        self._edge_count += 1
        return True

    def remove_edge(self, u: int, v: int) -> bool:
        """Drop {u, v} if present; endpoints stay. Supports rewiring growth models."""
        nbrs = self._adj.get(u)
        if nbrs is None or v not in nbrs:
            return False
        nbrs.remove(v)
        self._adj[v].remove(u)
        self._edge_count -= 1
        return True

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self._adj.get(u)
        return nbrs is not None and v in nbrs

    def nodes(self) -> Iterator[int]:
        return iter(self._adj)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Every edge once, as (u, v) with u < v; order unspecified."""
        for u, nbrs in self._adj.items():
            for v in nbrs:
                if u < v:
                    yield u, v

    def neighbors(self, u: int) -> set[int]:
        """Neighbor set of u. Treat as read-only."""
        try:
            return self._adj[u]
        except KeyError:
            raise UnknownNodeError(f"AS {u} is not in the graph") from None

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    def bfs_distances(self, src: int) -> dict[int, int]:
        """Minimal hop counts from src to every reachable node (src at 0)."""
        if src not in self._adj:
            raise UnknownNodeError(f"AS {src} is not in the graph")
        dist = {src: 0}
        queue = deque((src,))
        adj = self._adj
        while queue:
            u = queue.popleft()
            nxt = dist[u] + 1
            for v in adj[u]:
                if v not in dist:
                    dist[v] = nxt
                    queue.append(v)
        return dist

    def components(self) -> Iterator[set[int]]:
        """Connected components, in ascending order of their smallest AS number."""
        seen: set[int] = set()
        for start in sorted(self._adj):
            if start in seen:
                continue
            comp = set(self.bfs_distances(start))
            seen |= comp
            yield comp

    def giant_component(self) -> "AsGraph":
        """Induced subgraph of the largest component.

        Size ties go to the component containing the smallest AS number,
        making the result deterministic.
        """
        if not self._adj:
            raise EmptyGraphError("graph has no nodes")
        best: set[int] | None = None
        for comp in self.components():
            if best is None or len(comp) > len(best):
                best = comp
        assert best is not None
        sub = AsGraph()
        for u in best:
            sub.add_node(u)
            for v in self._adj[u]:
                if u < v:
                    sub.add_edge(u, v)
        return sub


@dataclass
class Snapshot:
    """One month's merged AS graph plus provenance."""

    graph: AsGraph
    date: str
    monitor_set: str
    family: str

    def __post_init__(self) -> None:
        validate_date(self.date)
        validate_family(self.family)


@dataclass
class SnapshotSeries:
    """Date-ordered snapshots sharing one family and one monitor set.

    filter_reports maps date -> per-month FilterReport when the series came
    from a path corpus; it stays empty for series reloaded from edge lists.
    """

    snapshots: list[Snapshot]
    family: str
    monitor_set: str
    filter_reports: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        validate_family(self.family)
        prev = None
        for snap in self.snapshots:
            if snap.family != self.family:
                raise CorpusError(f"snapshot {snap.date} is {snap.family}, series is {self.family}")
            if snap.monitor_set != self.monitor_set:
                raise CorpusError(
                    f"snapshot {snap.date} has monitor set {snap.monitor_set!r}, "
                    f"series is {self.monitor_set!r}"
                )
            if prev is not None and snap.date <= prev:
                raise CorpusError(f"snapshot dates not strictly increasing at {snap.date}")
            prev = snap.date

    def __len__(self) -> int:
        return len(self.snapshots)

    def __iter__(self) -> Iterator[Snapshot]:
        return iter(self.snapshots)

    def dates(self) -> list[str]:
        return [s.date for s in self.snapshots]


def _parse_asn(token: str, where: str) -> int:
    if not (token.isascii() and token.isdigit()):
        raise CorpusError(f"{where}: {token!r} is not an AS number")
    value = int(token)
    if value > AS_MAX:
        raise CorpusError(f"{where}: {token} exceeds the 32-bit AS range")
    return value


def write_edgelist(graph: AsGraph, path: Path | str, directives: dict[str, str] | None = None) -> None:
    """Write the shared edge-list text format.

    One "u v" line per edge with u < v, sorted; '# key: value' comment
    directives first; isolated nodes are preserved as '# node: N' lines so
    node counts survive a round trip.
    """
    lines = [f"# {key}: {value}" for key, value in (directives or {}).items()]
    isolated = sorted(u for u in graph.nodes() if graph.degree(u) == 0)
    lines.extend(f"# node: {u}" for u in isolated)
    lines.extend(f"{u} {v}" for u, v in sorted(graph.edges()))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_edgelist(path: Path | str) -> tuple[AsGraph, dict[str, str]]:
    """Read the shared edge-list format; returns (graph, comment directives).

    '# node: N' directives become isolated nodes; every other '# key: value'
    comment is collected (first occurrence wins); remaining comments and
    blank lines are ignored.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc
    g = AsGraph()
    directives: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _DIRECTIVE_RE.match(line)
            if m:
                key, value = m.groups()
                if key == "node":
                    g.add_node(_parse_asn(value, f"{path}:{lineno}"))
                else:
                    directives.setdefault(key, value)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise CorpusError(f"{path}:{lineno}: expected two AS numbers, got {line!r}")
        u = _parse_asn(parts[0], f"{path}:{lineno}")
        v = _parse_asn(parts[1], f"{path}:{lineno}")
        g.add_edge(u, v)
    return g, directives
