"""Timestamped edges, snapshot graphs and slicing into a temporal social network."""
from __future__ import annotations

import bisect
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

import networkx as nx

from ._util import TextSource, format_float, iter_records, natural_key, open_lines

logger = logging.getLogger(__name__)

Node = Hashable

SLICING_MODES = ("disjoint", "sliding", "cumulative")


class EdgeParseError(ValueError):
    """Raised when an edge file has rejected lines.

    ``diagnostics`` holds ``(line_number, message)`` pairs for every rejected line.
    """

    def __init__(self, diagnostics: list[tuple[int, str]]):
        self.diagnostics = diagnostics
        shown = "; ".join(f"line {n}: {msg}" for n, msg in diagnostics[:5])
        more = f" (+{len(diagnostics) - 5} more)" if len(diagnostics) > 5 else ""
        super().__init__(f"{len(diagnostics)} rejected edge line(s): {shown}{more}")


class EmptyNetworkError(ValueError):
    pass


@dataclass(frozen=True)
class TemporalEdge:
    src: Node
    dst: Node
    t: float
    weight: float = 1.0

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError(f"self-loop on node {self.src!r}")
        if not (self.weight > 0):
            raise ValueError(f"weight must be positive, got {self.weight!r}")
        if not (self.t >= 0) or math.isinf(self.t):
            raise ValueError(f"timestamp must be a finite non-negative number, got {self.t!r}")


@dataclass(frozen=True)
class SlicingPolicy:
    """How timestamps are cut into timeframes.

    ``origin`` and ``horizon`` pin the first window start and the covered end;
    by default they come from the smallest and largest timestamp.
    """

    mode: str = "disjoint"
    window: float = 1.0
    step: Optional[float] = None
    origin: Optional[float] = None
    horizon: Optional[float] = None

    def __post_init__(self):
        if self.mode not in SLICING_MODES:
            raise ValueError(f"unknown slicing mode {self.mode!r}")
        if not (self.window > 0):
            raise ValueError("window must be > 0")
        if self.step is not None:
            if not (self.step > 0):
                raise ValueError("step must be > 0")
            if self.mode == "sliding" and self.step > self.window:
                raise ValueError("sliding step must not exceed the window")
        if self.mode == "sliding" and self.step is None:
            raise ValueError("sliding mode needs a step")

    @property
    def effective_step(self) -> float:
        if self.mode == "disjoint" or self.step is None:
            return self.window
        return self.step

    def intervals(self, t_min: float, t_max: float) -> list[tuple[float, float]]:
        """Half-open intervals covering ``[origin, t_max]`` (or up to ``horizon``)."""
        origin = t_min if self.origin is None else self.origin
        step = self.effective_step
        out = []
        k = 0
        while True:
            start = origin + k * step
            if self.mode == "cumulative":
                end = origin + (k + 1) * step
                start = origin
            elif step == self.window:
                end = origin + (k + 1) * step
            else:
                end = start + self.window
            out.append((start, end))
            if self.horizon is not None:
                if end >= self.horizon:
                    break
            elif end > t_max:
                break
            k += 1
        return out


@dataclass(frozen=True)
class Snapshot:
    """One timeframe's network: nodes plus directed edges with aggregated weights."""

    index: int
    nodes: frozenset
    edges: Mapping[tuple, float] = field(default_factory=dict)
    interval: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        for (u, v) in self.edges:
            if u not in self.nodes or v not in self.nodes:
                raise ValueError(f"edge ({u!r}, {v!r}) has an endpoint outside the node set")

    def __len__(self) -> int:
        return len(self.nodes)

    def sorted_nodes(self) -> list:
        return sorted(self.nodes, key=natural_key)

    def undirected_edges(self) -> dict[tuple, float]:
        """Symmetrized edge map keyed by node pairs in sorted order; weight is the max of both directions."""
        out: dict[tuple, float] = {}
        for (u, v), w in self.edges.items():
            key = (u, v) if natural_key(u) <= natural_key(v) else (v, u)
            if w > out.get(key, 0.0):
                out[key] = w
        return out

    def adjacency(self) -> dict:
        adj: dict = {n: {} for n in self.nodes}
        for (u, v), w in self.undirected_edges().items():
            adj[u][v] = w
            adj[v][u] = w
        return adj

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.sorted_nodes())
        for (u, v), w in sorted(self.undirected_edges().items(), key=lambda kv: (natural_key(kv[0][0]), natural_key(kv[0][1]))):
            g.add_edge(u, v, weight=w)
        return g

    @classmethod
    def from_edges(cls, index: int, edges: Iterable[TemporalEdge], interval=(0.0, 0.0)) -> "Snapshot":
        weights: dict[tuple, float] = defaultdict(float)
        nodes = set()
        for e in edges:
            weights[(e.src, e.dst)] += e.weight
            nodes.add(e.src)
            nodes.add(e.dst)
        return cls(index=index, nodes=frozenset(nodes), edges=dict(weights), interval=tuple(interval))


@dataclass(frozen=True)
class TemporalSocialNetwork:
    snapshots: tuple
    policy: Optional[SlicingPolicy] = None

    def __post_init__(self):
        for i, s in enumerate(self.snapshots, start=1):
            if s.index != i:
                raise ValueError(f"snapshot indices must be 1..m, found {s.index} at position {i}")

    def __len__(self) -> int:
        return len(self.snapshots)

    def __iter__(self) -> Iterator[Snapshot]:
        return iter(self.snapshots)

    @property
    def m(self) -> int:
        return len(self.snapshots)

    def snapshot_at(self, i: int) -> Snapshot:
        return snapshot_at(self, i)


def parse_edge_line(fields: Sequence[str]) -> TemporalEdge:
    if len(fields) not in (3, 4):
        raise ValueError(f"expected 3 or 4 fields (src dst t [weight]), got {len(fields)}")
    src, dst = fields[0], fields[1]
    try:
        t = float(fields[2])
    except ValueError:
        raise ValueError(f"non-numeric timestamp {fields[2]!r}") from None
    weight = 1.0
    if len(fields) == 4:
        try:
            weight = float(fields[3])
        except ValueError:
            raise ValueError(f"non-numeric weight {fields[3]!r}") from None
    return TemporalEdge(src, dst, t, weight)


def ingest_edges(source: TextSource, *, lenient: bool = False) -> list[TemporalEdge]:
    """Read ``src dst t [weight]`` lines; ``#`` starts a comment line.

    Every bad line is collected. Unless ``lenient`` is set the whole read fails
    with :class:`EdgeParseError`; in lenient mode bad lines are logged and skipped.
    """
    edges: list[TemporalEdge] = []
    diagnostics: list[tuple[int, str]] = []
    with open_lines(source) as lines:
        for lineno, fields in iter_records(lines):
            try:
                edges.append(parse_edge_line(fields))
            except ValueError as exc:
                diagnostics.append((lineno, str(exc)))
    if diagnostics:
        if not lenient:
            raise EdgeParseError(diagnostics)
        for lineno, msg in diagnostics:
            logger.warning("skipping edge line %d: %s", lineno, msg)
    return edges


def format_edges(edges: Iterable[TemporalEdge]) -> str:
    return "".join(
        f"{e.src} {e.dst} {format_float(e.t)} {format_float(e.weight)}\n" for e in edges
    )


def slice_edges(edges: Sequence[TemporalEdge], policy: SlicingPolicy) -> TemporalSocialNetwork:
    """Materialize the snapshot sequence for ``edges`` under ``policy``."""
    if not edges:
        raise EmptyNetworkError("cannot slice an empty edge list")
    ts = [e.t for e in edges]
    t_min, t_max = min(ts), max(ts)
    if policy.origin is not None and policy.origin > t_min:
        logger.warning("edges before origin %s are dropped", policy.origin)

    intervals = policy.intervals(t_min, t_max)
    ordered = sorted(edges, key=lambda e: e.t)
    sorted_ts = [e.t for e in ordered]

    snapshots = []
    for i, (start, end) in enumerate(intervals, start=1):
        lo = bisect.bisect_left(sorted_ts, start)
        hi = bisect.bisect_left(sorted_ts, end)
        snapshots.append(Snapshot.from_edges(i, ordered[lo:hi], interval=(start, end)))
    return TemporalSocialNetwork(tuple(snapshots), policy)


# alias matching the operation name used in docs
slice = slice_edges  # noqa: A001


def snapshot_at(tsn: TemporalSocialNetwork, i: int) -> Snapshot:
    if not 1 <= i <= len(tsn.snapshots):
        raise IndexError(f"timeframe {i} out of range 1..{len(tsn.snapshots)}")
    return tsn.snapshots[i - 1]


def network_from_frames(frames: Sequence[Iterable[TemporalEdge]], policy: Optional[SlicingPolicy] = None) -> TemporalSocialNetwork:
    """Build a network from edges already grouped per timeframe."""
    snaps = []
    for i, frame in enumerate(frames, start=1):
        frame = list(frame)
        interval = (float(i - 1), float(i))
        if frame:
            interval = (min(e.t for e in frame), max(e.t for e in frame))
        snaps.append(Snapshot.from_edges(i, frame, interval=interval))
    return TemporalSocialNetwork(tuple(snaps), policy)


def format_snapshot_summary(tsn: TemporalSocialNetwork) -> str:
    lines = ["index\tt_start\tt_end\tnodes\tedges\n"]
    for s in tsn:
        lines.append(
            f"{s.index}\t{format_float(s.interval[0])}\t{format_float(s.interval[1])}\t{len(s.nodes)}\t{len(s.edges)}\n"
        )
    return "".join(lines)
