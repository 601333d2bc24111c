"""Palla, Barabási and Vicsek tracking on the joint graph of two consecutive snapshots."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

from ._util import natural_key
from .communities import GroupingResult, detect_clique_percolation
from .events import EventRecord, EventType, sort_events
from .temporal import Snapshot

logger = logging.getLogger(__name__)


class PallaConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PallaParams:
    k: int = 3
    labeling: str = "size-delta"

    def __post_init__(self):
        if self.k < 3:
            raise ValueError("k must be >= 3")
        if self.labeling != "size-delta":
            raise ValueError(f"unknown labeling rule {self.labeling!r}")


def joint_graph(s1: Snapshot, s2: Snapshot) -> Snapshot:
    """Union of two snapshots; a directed pair present in both keeps the larger weight."""
    edges = dict(s1.edges)
    for pair, w in s2.edges.items():
        if w > edges.get(pair, 0.0):
            edges[pair] = w
    interval = (min(s1.interval[0], s2.interval[0]), max(s1.interval[1], s2.interval[1]))
    return Snapshot(s1.index, s1.nodes | s2.nodes, edges, interval)


def relative_overlap(c1: Iterable, c2: Iterable) -> float:
    c1, c2 = frozenset(c1), frozenset(c2)
    union = c1 | c2
    if not union:
        raise ValueError("relative overlap of two empty sets is undefined")
    return len(c1 & c2) / len(union)


def _check_cpm(g: GroupingResult, k: int) -> None:
    if g.detector != "cpm":
        raise PallaConfigError(
            f"timeframe {g.timeframe} was grouped by {g.detector!r}; the Palla matcher needs clique percolation"
        )
    if g.k != k:
        raise PallaConfigError(f"timeframe {g.timeframe} used k={g.k}, matcher configured with k={k}")


def _assign(communities, joint_groups, frame: int) -> dict:
    """Joint group index for every frame community, by containment."""
    out = {}
    for c in communities:
        hosts = [i for i, jg in enumerate(joint_groups) if c.members <= jg]
        if hosts:
            out[c.id] = hosts[0]
            continue
        best = max(range(len(joint_groups)), key=lambda i: (len(c.members & joint_groups[i]), -i), default=None)
        if best is None or not c.members & joint_groups[best]:
            logger.warning("community %s of frame %d lies outside every joint group", c.id, frame)
            continue
        logger.warning("community %s of frame %d is not contained in a joint group; using largest intersection", c.id, frame)
        out[c.id] = best
    return out


def run_palla(s1: Snapshot, s2: Snapshot, groups1: GroupingResult, groups2: GroupingResult,
              params: PallaParams = PallaParams()) -> list[EventRecord]:
    """Events between two consecutive frames.

    Communities inside the same joint-graph group are paired greedily by
    descending relative overlap (ties by source id, then target id). A pairing
    is labelled by size change. A frame-1 community overlapping two or more
    frame-2 communities of its joint group also yields split records; the mirror
    case yields merge records. Communities in no pairing and no split/merge
    die (frame 1) or are born (frame 2).
    """
    _check_cpm(groups1, params.k)
    _check_cpm(groups2, params.k)
    frames = (groups1.timeframe, groups2.timeframe)
    joint = detect_clique_percolation(joint_graph(s1, s2), k=params.k, min_size=params.k)
    joint_groups = [c.members for c in joint.communities]

    host1 = _assign(groups1, joint_groups, frames[0])
    host2 = _assign(groups2, joint_groups, frames[1])
    c1_by_id, c2_by_id = groups1.by_id(), groups2.by_id()

    events = []
    involved1, involved2 = set(), set()
    for h in range(len(joint_groups)):
        f1 = [c for c in groups1 if host1.get(c.id) == h]
        f2 = [c for c in groups2 if host2.get(c.id) == h]
        candidates = []
        for a in f1:
            for b in f2:
                ov = relative_overlap(a.members, b.members)
                if ov > 0:
                    candidates.append((-ov, natural_key(a.id), natural_key(b.id), a.id, b.id, ov))
        candidates.sort(key=lambda t: t[:3])

        used1, used2 = set(), set()
        for _, _, _, a, b, ov in candidates:
            if a in used1 or b in used2:
                continue
            used1.add(a)
            used2.add(b)
            size_a, size_b = len(c1_by_id[a]), len(c2_by_id[b])
            if size_b > size_a:
                kind = EventType.GROWING
            elif size_b < size_a:
                kind = EventType.SHRINKING
            else:
                kind = EventType.CONTINUING
            events.append(EventRecord(kind, frames, (a,), (b,), (ov, None), "palla"))

        overlaps = {(a, b): ov for _, _, _, a, b, ov in candidates}
        for a in f1:
            hit = [b.id for b in f2 if (a.id, b.id) in overlaps]
            if len(hit) >= 2:
                for b in hit:
                    events.append(EventRecord(EventType.SPLITTING, frames, (a.id,), (b,), (overlaps[(a.id, b)], None), "palla"))
                involved1.add(a.id)
                involved2.update(hit)
        for b in f2:
            hit = [a.id for a in f1 if (a.id, b.id) in overlaps]
            if len(hit) >= 2:
                for a in hit:
                    events.append(EventRecord(EventType.MERGING, frames, (a,), (b.id,), (overlaps[(a, b.id)], None), "palla"))
                involved2.add(b.id)
                involved1.update(hit)
        involved1 |= used1
        involved2 |= used2

    for c in groups1:
        if c.id not in involved1:
            events.append(EventRecord(EventType.DISSOLVING, frames, (c.id,), (), method="palla"))
    for c in groups2:
        if c.id not in involved2:
            events.append(EventRecord(EventType.FORMING, frames, (), (c.id,), method="palla"))
    return sort_events(events)


def run_palla_all(tsn, groupings, params: PallaParams = PallaParams()) -> list[EventRecord]:
    if len(groupings) != tsn.m:
        raise ValueError(f"{len(groupings)} groupings for a {tsn.m}-frame network")
    events = []
    for (s1, s2), (g1, g2) in zip(zip(tsn.snapshots, tsn.snapshots[1:]), zip(groupings, groupings[1:])):
        events.extend(run_palla(s1, s2, g1, g2, params))
    return sort_events(events)
