"""AS-path file parsing, filtering, and monthly snapshot assembly.

Path files are plain text: three header lines ('# date:', '# monitor:',
'# family:') followed by one AS path per line, origin last. Paths containing
AS sets, private or reserved ASNs, or loops are dropped; consecutive repeats
are collapsed as prepending. Every drop is accounted per reason.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CorpusError
from .graph import AS_MAX, AsGraph, Snapshot, SnapshotSeries, validate_date, validate_family

AsPath = list

REJECT_AS_SET = "as_set"
REJECT_PRIVATE_ASN = "private_asn"
REJECT_LOOP = "loop"
REJECT_MALFORMED = "malformed"
REJECT_REASONS = (REJECT_AS_SET, REJECT_PRIVATE_ASN, REJECT_LOOP, REJECT_MALFORMED)

# IANA-reserved ASN space treated as "private": the 16-bit and 32-bit private
# blocks, AS_TRANS, and the reserved values 0 and 65535.
_PRIVATE_16 = range(64512, 65535)
_PRIVATE_32 = range(4200000000, 4294967295)
_RESERVED = frozenset({0, 23456, 65535})

_MONTH_DIR_RE = re.compile(r"^\d{4}-\d{2}$")


def is_private_asn(asn: int) -> bool:
    return asn in _RESERVED or asn in _PRIVATE_16 or asn in _PRIVATE_32


@dataclass
class PathFileMeta:
    """Header of one path file: which month, which monitor, which family."""

    date: str
    monitor_id: str
    family: str


@dataclass
class FilterReport:
    """Per-reason rejection counts; accepted + rejected == data lines seen."""

    accepted: int = 0
    as_set: int = 0
    private_asn: int = 0
    loop: int = 0
    malformed: int = 0

    @property
    def rejected(self) -> int:
        return self.as_set + self.private_asn + self.loop + self.malformed

    @property
    def total(self) -> int:
        return self.accepted + self.rejected

    def record(self, reason: str | None) -> None:
        if reason is None:
            self.accepted += 1
        elif reason in REJECT_REASONS:
            setattr(self, reason, getattr(self, reason) + 1)
        else:
            raise ValueError(f"unknown rejection reason {reason!r}")

    def merge(self, other: "FilterReport") -> None:
        self.accepted += other.accepted
        self.as_set += other.as_set
        self.private_asn += other.private_asn
        self.loop += other.loop
        self.malformed += other.malformed

    def to_dict(self) -> dict[str, int]:
        return {
            "total": self.total,
            "accepted": self.accepted,
            "as_set": self.as_set,
            "private_asn": self.private_asn,
            "loop": self.loop,
            "malformed": self.malformed,
        }


def parse_path_line(line: str) -> tuple[AsPath | None, str | None]:
    """Parse one AS-path data line into (hops, None) or (None, reason).

    Prepending (consecutive repeats) is collapsed before the loop check.
    Rejection precedence is fixed: malformed, then as_set, then private_asn,
    then loop, so reports are deterministic whatever the line mixes.
    """
    tokens = line.split()
    if not tokens:
        return None, REJECT_MALFORMED
    has_as_set = False
    hops = []
    for tok in tokens:
        if "{" in tok or "}" in tok or "," in tok:
            has_as_set = True
        elif tok.isascii() and tok.isdigit():
            value = int(tok)
            if value > AS_MAX:
                return None, REJECT_MALFORMED
            hops.append(value)
        else:
            return None, REJECT_MALFORMED
    if has_as_set:
        return None, REJECT_AS_SET
    if any(is_private_asn(h) for h in hops):
        return None, REJECT_PRIVATE_ASN
    collapsed = [hops[0]]
    for h in hops[1:]:
        if h != collapsed[-1]:
            collapsed.append(h)
    if len(set(collapsed)) != len(collapsed):
        return None, REJECT_LOOP
    return collapsed, None


def build_graph(paths: Iterable[AsPath]) -> AsGraph:
    """Union graph of adjacent hop pairs; one-hop paths contribute bare nodes."""
    g = AsGraph()
    for path in paths:
        g.add_node(path[0])
        for a, b in zip(path, path[1:]):
            g.add_edge(a, b)
    return g


def _header_value(path: Path, lines: list[str], index: int, key: str) -> str:
    prefix = f"# {key}: "
    if index >= len(lines) or not lines[index].startswith(prefix):
        raise CorpusError(f"{path}: line {index + 1} must be '# {key}: <value>'")
    value = lines[index][len(prefix):].strip()
    if not value:
        raise CorpusError(f"{path}: line {index + 1} has an empty {key}")
    return value


def parse_path_file(path: Path | str) -> tuple[PathFileMeta, list[AsPath], FilterReport]:
    """Parse one path file into (meta, accepted paths, filter report)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    date = _header_value(path, lines, 0, "date")
    monitor = _header_value(path, lines, 1, "monitor")
    family = _header_value(path, lines, 2, "family")
    try:
        validate_date(date)
        validate_family(family)
    except CorpusError as exc:
        raise CorpusError(f"{path}: {exc}") from None
    meta = PathFileMeta(date=date, monitor_id=monitor, family=family)
    report = FilterReport()
    accepted: list[AsPath] = []
    for raw in lines[3:]:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        hops, reason = parse_path_line(line)
        report.record(reason)
        if hops is not None:
            accepted.append(hops)
    return meta, accepted, report


def merge_monitors(
    per_monitor: Sequence[tuple[PathFileMeta, list[AsPath]]], monitor_set: str
) -> Snapshot:
    """Union one month's filtered paths from several monitors into a Snapshot."""
    if not per_monitor:
        raise CorpusError("no monitor files to merge")
    first = per_monitor[0][0]
    g = AsGraph()
    for meta, paths in per_monitor:
        if meta.date != first.date:
            raise CorpusError(
                f"monitor {meta.monitor_id!r} has date {meta.date}, expected {first.date}"
            )
        if meta.family != first.family:
            raise CorpusError(
                f"monitor {meta.monitor_id!r} has family {meta.family}, expected {first.family}"
            )
        for path in paths:
            g.add_node(path[0])
            for a, b in zip(path, path[1:]):
                g.add_edge(a, b)
    return Snapshot(graph=g, date=first.date, monitor_set=monitor_set, family=first.family)


@dataclass(frozen=True)
class MonitorSet:
    """Named monitor grouping; monitors=None admits every monitor."""

    label: str
    monitors: frozenset | None = None

    def admits(self, monitor_id: str) -> bool:
        return self.monitors is None or monitor_id in self.monitors

    @classmethod
    def load(cls, path: Path | str) -> "MonitorSet":
        """Load a monitor-set file: '# set: <name>' header, one monitor id per line."""
        path = Path(path)
        try:
            lines = path.read_text().splitlines()
        except OSError as exc:
            raise CorpusError(f"cannot read {path}: {exc}") from exc
        if not lines or not lines[0].startswith("# set: "):
            raise CorpusError(f"{path}: first line must be '# set: <name>'")
        label = lines[0][len("# set: "):].strip()
        if not label:
            raise CorpusError(f"{path}: empty set name")
        monitors = set()
        for raw in lines[1:]:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            monitors.add(line)
        if not monitors:
            raise CorpusError(f"{path}: monitor set {label!r} lists no monitors")
        return cls(label=label, monitors=frozenset(monitors))


ALL_MONITORS = MonitorSet("ALL", None)


def load_series(root: Path | str, config: MonitorSet = ALL_MONITORS) -> SnapshotSeries:
    """Load every month directory under root into a date-ordered series.

    Layout is <root>/<YYYY-MM>/<monitor_id>.paths. Only files whose stem the
    config admits are read; months with no admitted files are simply absent.
    Per-month FilterReports (merged across monitors) ride on the returned
    series as .filter_reports.
    """
    root = Path(root)
    if not root.is_dir():
        raise CorpusError(f"corpus root {root} is not a directory")
    snapshots: list[Snapshot] = []
    reports: dict[str, FilterReport] = {}
    family: str | None = None
    for month_dir in sorted(p for p in root.iterdir() if p.is_dir() and _MONTH_DIR_RE.match(p.name)):
        files = sorted(p for p in month_dir.glob("*.paths") if config.admits(p.stem))
        if not files:
            continue
        month_report = FilterReport()
        parsed = []
        for f in files:
            meta, paths, rep = parse_path_file(f)
            if meta.date != month_dir.name:
                raise CorpusError(
                    f"{f}: header date {meta.date} does not match directory {month_dir.name}"
                )
            if meta.monitor_id != f.stem:
                raise CorpusError(
                    f"{f}: header monitor {meta.monitor_id!r} does not match filename"
                )
            parsed.append((meta, paths))
            month_report.merge(rep)
        snap = merge_monitors(parsed, config.label)
        if family is None:
            family = snap.family
        elif snap.family != family:
            raise CorpusError(f"{month_dir.name}: family {snap.family} differs from {family}")
        snapshots.append(snap)
        reports[snap.date] = month_report
    if family is None:
        raise CorpusError(f"no admitted path files under {root}")
    return SnapshotSeries(
        snapshots=snapshots, family=family, monitor_set=config.label, filter_reports=reports
    )
