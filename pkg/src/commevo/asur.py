"""Event predicates of Asur, Parthasarathy and Ucar: continue, dissolve, form, merge, split."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .communities import GroupingResult
from .events import EventRecord, EventType, sort_events

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AsurParams:
    kappa: float = 0.5

    def __post_init__(self):
        if not 0 < self.kappa < 1:
            raise ValueError("kappa must lie in (0, 1)")


def joint_overlap(vk: frozenset, vl: frozenset, vj: frozenset) -> float:
    union = vk | vl
    return len(union & vj) / max(len(union), len(vj))


def asur_merge_test(vk: Iterable, vl: Iterable, vj: Iterable, kappa: float) -> bool:
    """True when groups ``vk`` and ``vl`` of one frame merge into ``vj`` of the next.

    The pair jointly overlaps ``vj`` by more than ``kappa`` of the larger side,
    and each of them has more than half its members inside ``vj``.
    """
    vk, vl, vj = frozenset(vk), frozenset(vl), frozenset(vj)
    if not (vk and vl and vj):
        raise ValueError("merge test needs non-empty groups")
    return (
        joint_overlap(vk, vl, vj) > kappa
        and len(vk & vj) > len(vk) / 2
        and len(vl & vj) > len(vl) / 2
    )


def asur_split_test(vj: Iterable, vk: Iterable, vl: Iterable, kappa: float) -> bool:
    """Mirror of :func:`asur_merge_test`: ``vj`` splits into ``vk`` and ``vl``."""
    vj, vk, vl = frozenset(vj), frozenset(vk), frozenset(vl)
    if not (vk and vl and vj):
        raise ValueError("split test needs non-empty groups")
    return (
        joint_overlap(vk, vl, vj) > kappa
        and len(vk & vj) > len(vk) / 2
        and len(vl & vj) > len(vl) / 2
    )


def asur_pair(groups_i: GroupingResult, groups_j: GroupingResult, params: AsurParams = AsurParams()) -> list[EventRecord]:
    frames = (groups_i.timeframe, groups_j.timeframe)
    ci, cj = list(groups_i), list(groups_j)
    out = []

    for a in ci:
        for b in cj:
            if a.members == b.members:
                out.append(EventRecord(EventType.CONTINUING, frames, (a.id,), (b.id,), (1.0, None), "asur"))

    # intersection compared with 1 as a cardinality
    for a in ci:
        if not any(len(a.members & b.members) > 1 for b in cj):
            out.append(EventRecord(EventType.DISSOLVING, frames, (a.id,), (), method="asur"))
    for b in cj:
        if not any(len(b.members & a.members) > 1 for a in ci):
            out.append(EventRecord(EventType.FORMING, frames, (), (b.id,), method="asur"))

    for k, l in combinations(ci, 2):
        for j in cj:
            if asur_merge_test(k.members, l.members, j.members, params.kappa):
                ov = joint_overlap(k.members, l.members, j.members)
                out.append(EventRecord(EventType.MERGING, frames, (k.id, l.id), (j.id,), (ov, None), "asur"))
    for j in ci:
        for k, l in combinations(cj, 2):
            if asur_split_test(j.members, k.members, l.members, params.kappa):
                ov = joint_overlap(k.members, l.members, j.members)
                out.append(EventRecord(EventType.SPLITTING, frames, (j.id,), (k.id, l.id), (ov, None), "asur"))
    return out


def run_asur(groupings: Sequence[GroupingResult], params: AsurParams = AsurParams(), n_frames: int | None = None) -> list[EventRecord]:
    if n_frames is not None and len(groupings) != n_frames:
        raise ValueError(f"{len(groupings)} groupings for a {n_frames}-frame network")
    if any(g.overlapping for g in groupings):
        logger.warning("Asur et al. events are defined for disjoint groups; input has overlapping groups")
    events = []
    for gi, gj in zip(groupings, groupings[1:]):
        events.extend(asur_pair(gi, gj, params))
    return sort_events(events)
