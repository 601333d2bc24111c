"""Lineage graph of communities across timeframes and the evolution chains it contains."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Optional, Sequence

import networkx as nx

from ._util import TextSource, natural_key, open_lines
from .communities import GroupingResult
from .events import EventRecord, EventType

NO_GROUP = "No group"
EMPTY_CELL = "-"

# when two events link the same pair of communities the chain shows the first of these
_LABEL_PRIORITY = (
    EventType.SPLITTING,
    EventType.MERGING,
    EventType.CONTINUING,
    EventType.SHRINKING,
    EventType.GROWING,
)


class UnknownCommunityError(KeyError):
    pass


@dataclass
class LineageGraph:
    """DAG over ``(timeframe, community_id)`` nodes whose arcs are events.

    Forming and dissolving have no counterpart community, so they are kept as
    ``formed`` / ``dissolved`` flags on the node instead of arcs.
    """

    graph: nx.DiGraph
    n_frames: int

    def community_nodes(self) -> list:
        return sorted(self.graph.nodes, key=_node_key)

    def arc_type(self, u, v) -> EventType:
        types = self.graph.edges[u, v]["events"]
        for t in _LABEL_PRIORITY:
            if t in types:
                return t
        return types[0]

    def unmatched(self) -> list:
        return [n for n in self.community_nodes() if self.graph.nodes[n]["unmatched"]]


def _node_key(node) -> tuple:
    return (node[0], natural_key(node[1]))


def build_lineage(events: Iterable[EventRecord], groupings: Sequence[GroupingResult]) -> LineageGraph:
    g = nx.DiGraph()
    for grouping in groupings:
        for c in grouping:
            g.add_node((grouping.timeframe, c.id), size=len(c), formed=False, dissolved=False, unmatched=True)

    # ids read back from text files are strings
    by_text = {(f, str(cid)): (f, cid) for f, cid in g.nodes}

    def lookup(frame, cid):
        node = (frame, cid)
        if node in g:
            return node
        if (frame, str(cid)) in by_text:
            return by_text[(frame, str(cid))]
        raise UnknownCommunityError(f"event references unknown community {cid!r} in timeframe {frame}")

    for ev in events:
        fi, fj = ev.frames
        srcs = [lookup(fi, s) for s in ev.sources]
        tgts = [lookup(fj, t) for t in ev.targets]
        if ev.type is EventType.FORMING:
            for t in tgts:
                g.nodes[t]["formed"] = True
                g.nodes[t]["unmatched"] = False
            continue
        if ev.type is EventType.DISSOLVING:
            for s in srcs:
                g.nodes[s]["dissolved"] = True
                g.nodes[s]["unmatched"] = False
            continue
        for s in srcs:
            g.nodes[s]["unmatched"] = False
            for t in tgts:
                g.nodes[t]["unmatched"] = False
                if g.has_edge(s, t):
                    if ev.type not in g.edges[s, t]["events"]:
                        g.edges[s, t]["events"].append(ev.type)
                else:
                    g.add_edge(s, t, events=[ev.type])
    n_frames = max((gr.timeframe for gr in groupings), default=0)
    return LineageGraph(g, n_frames)


@dataclass(frozen=True)
class ChainStep:
    timeframe: int
    community: Optional[Hashable]
    # event leading from this step to the next one
    event: Optional[EventType] = None


@dataclass(frozen=True)
class EvolutionChain:
    steps: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        frames = [s.timeframe for s in self.steps]
        if any(b != a + 1 for a, b in zip(frames, frames[1:])):
            raise ValueError(f"chain timeframes must increase by one: {frames}")

    def __len__(self) -> int:
        return len(self.steps)

    def events(self) -> list[EventType]:
        return [s.event for s in self.steps if s.event is not None]

    def communities(self) -> list:
        return [s.community for s in self.steps if s.community is not None]


def _path_to_chain(lg: LineageGraph, path: list) -> EvolutionChain:
    g = lg.graph
    steps = []
    first, last = path[0], path[-1]
    if g.nodes[first]["formed"] and first[0] > 1:
        steps.append(ChainStep(first[0] - 1, None, EventType.FORMING))
    for u, v in zip(path, path[1:]):
        steps.append(ChainStep(u[0], u[1], lg.arc_type(u, v)))
    if g.nodes[last]["dissolved"]:
        steps.append(ChainStep(last[0], last[1], EventType.DISSOLVING))
        steps.append(ChainStep(last[0] + 1, None, None))
    else:
        steps.append(ChainStep(last[0], last[1], None))
    return EvolutionChain(tuple(steps))


def maximal_paths(graph: nx.DiGraph) -> list[list]:
    """Every source-to-sink path, visiting successors in (timeframe, id) order."""
    order = lambda nodes: sorted(nodes, key=_node_key)  # noqa: E731
    roots = order(n for n in graph if graph.in_degree(n) == 0)
    out = []
    for root in roots:
        stack = [(root, [root])]
        while stack:
            node, path = stack.pop()
            succ = order(graph.successors(node))
            if not succ:
                out.append(path)
                continue
            for nxt in reversed(succ):
                stack.append((nxt, path + [nxt]))
    return out


def extract_chains(lg: LineageGraph) -> list[EvolutionChain]:
    """One chain per maximal path; splits fork the chain and merges keep every incoming branch."""
    return [_path_to_chain(lg, p) for p in maximal_paths(lg.graph)]


def chain_table_header(n_frames: int) -> list[str]:
    header = []
    for i in range(1, n_frames + 1):
        header.append(f"Group in T{i}")
        if i < n_frames:
            header.append("Event type")
    return header


def chain_row(chain: EvolutionChain, n_frames: int) -> list[str]:
    row = [EMPTY_CELL] * max(2 * n_frames - 1, 0)
    for step in chain.steps:
        col = 2 * (step.timeframe - 1)
        if col >= len(row):
            continue
        row[col] = NO_GROUP if step.community is None else str(step.community)
        if step.event is not None and col + 1 < len(row):
            row[col + 1] = step.event.short
    return row


def export_chain_table(chains: Sequence[EvolutionChain], n_frames: Optional[int] = None, delimiter: str = ",") -> str:
    """Chains as a table: group and event columns alternate, ``No group`` marks boundary frames."""
    if n_frames is None:
        n_frames = max((s.timeframe for c in chains for s in c.steps), default=0)
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(chain_table_header(n_frames))
    for c in chains:
        writer.writerow(chain_row(c, n_frames))
    return buf.getvalue()


def parse_chain_table(source: TextSource, delimiter: str = ",") -> list[EvolutionChain]:
    if isinstance(source, str) and "\n" in source:
        source = io.StringIO(source)
    with open_lines(source) as lines:
        rows = list(csv.reader(lines, delimiter=delimiter))
    chains = []
    for row in rows[1:]:
        if not row:
            continue
        steps = []
        for col in range(0, len(row), 2):
            cell = row[col]
            if cell == EMPTY_CELL:
                continue
            event_cell = row[col + 1] if col + 1 < len(row) else EMPTY_CELL
            event = None if event_cell == EMPTY_CELL else EventType.parse(event_cell)
            steps.append(ChainStep(col // 2 + 1, None if cell == NO_GROUP else cell, event))
        chains.append(EvolutionChain(tuple(steps)))
    return chains


def chains_to_json(chains: Iterable[EvolutionChain]) -> str:
    payload = [
        [
            {
                "timeframe": s.timeframe,
                "community": None if s.community is None else str(s.community),
                "event": None if s.event is None else s.event.value,
            }
            for s in c.steps
        ]
        for c in chains
    ]
    return json.dumps(payload, indent=2) + "\n"
