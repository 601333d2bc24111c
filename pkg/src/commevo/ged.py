"""Group Evolution Discovery: inclusion measure, match matrix and event classification."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .communities import IMPORTANCE_MEASURES, GroupingResult, compute_node_importance
from .events import EventRecord, EventType, sort_events
from .temporal import Snapshot, TemporalSocialNetwork

FORM_DISSOLVE_THRESHOLD = 0.10


@dataclass(frozen=True)
class GedParams:
    alpha: float = 0.5
    beta: float = 0.5
    form_dissolve_threshold: float = FORM_DISSOLVE_THRESHOLD
    importance_measure: str = "uniform"
    # drop the quality factor; reproduces worked examples quoted as plain member fractions
    quantity_only: bool = False

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        if not 0 < self.beta <= 1:
            raise ValueError("beta must lie in (0, 1]")
        if not 0 < self.form_dissolve_threshold < min(self.alpha, self.beta):
            raise ValueError("form/dissolve threshold must lie in (0, min(alpha, beta))")
        measure = "in_group_degree" if self.importance_measure == "degree" else self.importance_measure
        if measure not in IMPORTANCE_MEASURES:
            raise ValueError(f"unknown importance measure {self.importance_measure!r}")
        object.__setattr__(self, "importance_measure", measure)


def inclusion(g1: Iterable, g2: Iterable, ni_g1: Optional[Mapping] = None, *, quantity_only: bool = False) -> float:
    """Inclusion of group ``g1`` in group ``g2``.

    The product of the member fraction of ``g1`` found in ``g2`` and the
    fraction of ``g1``'s total importance carried by those shared members.
    ``ni_g1=None`` means uniform importance.
    """
    g1 = g1 if isinstance(g1, (set, frozenset)) else frozenset(g1)
    g2 = g2 if isinstance(g2, (set, frozenset)) else frozenset(g2)
    if not g1:
        raise ValueError("inclusion of an empty group is undefined")
    common = g1 & g2
    if not common:
        return 0.0
    quantity = len(common) / len(g1)
    if quantity_only:
        return quantity
    if ni_g1 is None:
        return quantity * quantity
    missing = [x for x in g1 if x not in ni_g1]
    if missing:
        raise ValueError(f"node importance missing for {missing[:5]!r}")
    total = sum(ni_g1[x] for x in g1)
    shared = sum(ni_g1[x] for x in common)
    if len(common) == len(g1):
        return 1.0
    return quantity * (shared / total)


@dataclass(frozen=True)
class PairMeasure:
    source: Hashable
    target: Hashable
    i12: float
    i21: float
    matched: bool


class MatchMatrix:
    """Inclusions between every group of one timeframe and every group of the next.

    Only pairs that share members are stored; every other pair has both
    inclusions exactly 0 and is never a match.
    """

    def __init__(self, frames: tuple, sources: Sequence, targets: Sequence, pairs: dict):
        self.frames = frames
        self.sources = list(sources)
        self.targets = list(targets)
        self.pairs = pairs
        fwd: dict = defaultdict(int)
        bwd: dict = defaultdict(int)
        for (s, t), pm in pairs.items():
            if pm.matched:
                fwd[s] += 1
                bwd[t] += 1
        self._fwd = dict(fwd)
        self._bwd = dict(bwd)

    def get(self, source, target) -> PairMeasure:
        pm = self.pairs.get((source, target))
        if pm is None:
            return PairMeasure(source, target, 0.0, 0.0, False)
        return pm

    def forward_matches(self, source) -> int:
        return self._fwd.get(source, 0)

    def backward_matches(self, target) -> int:
        return self._bwd.get(target, 0)

    def matched_pairs(self) -> list[PairMeasure]:
        return [pm for pm in self.pairs.values() if pm.matched]

    def __iter__(self):
        return iter(self.pairs.values())


def _importances(grouping: GroupingResult, snapshot: Optional[Snapshot], params: GedParams) -> dict:
    if params.importance_measure == "uniform" or params.quantity_only:
        return {c.id: None for c in grouping}
    return {c.id: compute_node_importance(snapshot, c, params.importance_measure) for c in grouping}


def match_matrix(groups_i: GroupingResult, groups_j: GroupingResult, params: GedParams = GedParams(),
                 snapshots: Optional[tuple] = None) -> MatchMatrix:
    """Both inclusions for every cross-frame pair that shares a node.

    ``snapshots`` is ``(snapshot_i, snapshot_j)``, needed only for
    structure-based importance measures.
    """
    if groups_j.timeframe != groups_i.timeframe + 1:
        raise ValueError("match_matrix needs consecutive timeframes")
    s_i, s_j = snapshots if snapshots is not None else (None, None)
    ni_i = _importances(groups_i, s_i, params)
    ni_j = _importances(groups_j, s_j, params)

    where: dict = defaultdict(list)
    for c2 in groups_j:
        for n in c2.members:
            where[n].append(c2)
    pairs = {}
    for c1 in groups_i:
        seen = set()
        for n in c1.members:
            for c2 in where.get(n, ()):
                if c2.id in seen:
                    continue
                seen.add(c2.id)
                i12 = inclusion(c1.members, c2.members, ni_i[c1.id], quantity_only=params.quantity_only)
                i21 = inclusion(c2.members, c1.members, ni_j[c2.id], quantity_only=params.quantity_only)
                matched = i12 >= params.alpha or i21 >= params.beta
                pairs[(c1.id, c2.id)] = PairMeasure(c1.id, c2.id, i12, i21, matched)
    return MatchMatrix(
        (groups_i.timeframe, groups_j.timeframe),
        [c.id for c in groups_i],
        [c.id for c in groups_j],
        pairs,
    )


# -- decision tree ------------------------------------------------------------------
#
# Rule predicates (a)-(e). One-sided pairs (exactly one inclusion above its
# threshold) are routed by size: a strictly larger G1 goes to the
# shrinking/splitting side, a strictly smaller one to growing/merging; at equal
# sizes the forward-only pattern (I12 >= alpha) goes to shrinking/splitting and
# the backward-only pattern to growing/merging. Splitting versus shrinking is
# decided by G1's matches in the next frame; merging versus growing by G2's
# matches in the previous frame.


def _one_sided_side(a: bool, b: bool, size1: int, size2: int) -> str:
    if size1 > size2:
        return "shrink"
    if size1 < size2:
        return "grow"
    return "shrink" if a else "grow"


def rule_continuing(a, b, size1, size2, fwd, bwd) -> bool:
    return a and b and size1 == size2


def rule_shrinking(a, b, size1, size2, fwd, bwd) -> bool:
    if a and b:
        return size1 > size2
    return (a != b) and _one_sided_side(a, b, size1, size2) == "shrink" and fwd == 1


def rule_growing(a, b, size1, size2, fwd, bwd) -> bool:
    if a and b:
        return size1 < size2
    return (a != b) and _one_sided_side(a, b, size1, size2) == "grow" and bwd == 1


def rule_splitting(a, b, size1, size2, fwd, bwd) -> bool:
    return (a != b) and _one_sided_side(a, b, size1, size2) == "shrink" and fwd > 1


def rule_merging(a, b, size1, size2, fwd, bwd) -> bool:
    return (a != b) and _one_sided_side(a, b, size1, size2) == "grow" and bwd > 1


RULES = (
    (EventType.CONTINUING, rule_continuing),
    (EventType.SHRINKING, rule_shrinking),
    (EventType.GROWING, rule_growing),
    (EventType.SPLITTING, rule_splitting),
    (EventType.MERGING, rule_merging),
)


def classify(i12: float, i21: float, size1: int, size2: int, forward_matches: int, backward_matches: int,
             params: GedParams = GedParams()) -> Optional[EventType]:
    """Event for one pair of groups, or ``None`` when no rule applies.

    ``forward_matches`` counts the groups G1 matches in the next frame and
    ``backward_matches`` the groups G2 matches in the previous frame.
    """
    a = i12 >= params.alpha
    b = i21 >= params.beta
    if not (a or b):
        return None
    if a and b:
        if size1 == size2:
            return EventType.CONTINUING
        return EventType.SHRINKING if size1 > size2 else EventType.GROWING
    if _one_sided_side(a, b, size1, size2) == "shrink":
        if forward_matches > 1:
            return EventType.SPLITTING
        return EventType.SHRINKING if forward_matches == 1 else None
    if backward_matches > 1:
        return EventType.MERGING
    return EventType.GROWING if backward_matches == 1 else None


def detect_forming_dissolving(groups_i: GroupingResult, groups_j: GroupingResult, matrix: MatchMatrix,
                              params: GedParams = GedParams()) -> list[EventRecord]:
    thr = params.form_dissolve_threshold
    frames = (groups_i.timeframe, groups_j.timeframe)
    blocked_src, blocked_tgt = set(), set()
    for pm in matrix:
        if pm.i12 >= thr or pm.i21 >= thr:
            blocked_src.add(pm.source)
            blocked_tgt.add(pm.target)
    out = [
        EventRecord(EventType.DISSOLVING, frames, (c.id,), (), method="ged")
        for c in groups_i
        if c.id not in blocked_src
    ]
    out += [
        EventRecord(EventType.FORMING, frames, (), (c.id,), method="ged")
        for c in groups_j
        if c.id not in blocked_tgt
    ]
    return out


def ged_pair(groups_i: GroupingResult, groups_j: GroupingResult, params: GedParams = GedParams(),
             snapshots: Optional[tuple] = None) -> list[EventRecord]:
    """All GED events between two consecutive groupings."""
    matrix = match_matrix(groups_i, groups_j, params, snapshots)
    size_i = {c.id: len(c) for c in groups_i}
    size_j = {c.id: len(c) for c in groups_j}
    events = []
    for pm in matrix.matched_pairs():
        ev = classify(
            pm.i12,
            pm.i21,
            size_i[pm.source],
            size_j[pm.target],
            matrix.forward_matches(pm.source),
            matrix.backward_matches(pm.target),
            params,
        )
        if ev is not None:
            events.append(EventRecord(ev, matrix.frames, (pm.source,), (pm.target,), (pm.i12, pm.i21), "ged"))
    events += detect_forming_dissolving(groups_i, groups_j, matrix, params)
    return events


def run_ged(groupings: Sequence[GroupingResult], tsn: Optional[TemporalSocialNetwork] = None,
            params: GedParams = GedParams()) -> list[EventRecord]:
    """GED over every consecutive pair of timeframes, ordered by frame pair then source id."""
    if tsn is not None and len(groupings) != tsn.m:
        raise ValueError(f"{len(groupings)} groupings for a {tsn.m}-frame network")
    for pos, g in enumerate(groupings, start=1):
        if g.timeframe != pos:
            raise ValueError(f"grouping at position {pos} is for timeframe {g.timeframe}")
    needs_snapshots = params.importance_measure != "uniform" and not params.quantity_only
    if needs_snapshots and tsn is None:
        raise ValueError(f"{params.importance_measure} importance needs the temporal network")
    events = []
    for gi, gj in zip(groupings, groupings[1:]):
        snaps = (tsn.snapshots[gi.timeframe - 1], tsn.snapshots[gj.timeframe - 1]) if tsn is not None else None
        events.extend(ged_pair(gi, gj, params, snaps))
    return sort_events(events)


__all__ = [
    "GedParams",
    "PairMeasure",
    "MatchMatrix",
    "inclusion",
    "match_matrix",
    "classify",
    "detect_forming_dissolving",
    "ged_pair",
    "run_ged",
    "RULES",
]
