"""Per-snapshot community structure: detectors, grouping files and node importance."""
from __future__ import annotations

import json
import random
from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Optional, Sequence

import networkx as nx

from ._util import TextSource, iter_records, natural_key, open_lines
from .temporal import Snapshot, TemporalSocialNetwork

IMPORTANCE_MEASURES = ("uniform", "in_group_degree")


class GroupingValidationError(ValueError):
    """Grouping records that do not fit the temporal network they reference."""

    def __init__(self, message: str, offenders: Sequence = ()):
        self.offenders = list(offenders)
        super().__init__(message)


@dataclass(frozen=True)
class Community:
    id: Hashable
    timeframe: int
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if not self.members:
            raise ValueError(f"community {self.id!r} has no members")

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class GroupingResult:
    """All communities of one timeframe.

    ``detector`` and ``k`` record provenance so that matchers bound to a
    particular detector (clique percolation) can check their input.
    """

    timeframe: int
    communities: tuple = ()
    overlapping: bool = False
    detector: str = "import"
    k: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "communities", tuple(self.communities))
        ids = [c.id for c in self.communities]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate community ids in timeframe {self.timeframe}")
        for c in self.communities:
            if c.timeframe != self.timeframe:
                raise ValueError(f"community {c.id!r} belongs to timeframe {c.timeframe}, not {self.timeframe}")
        if not self.overlapping and _has_overlap(self.communities):
            raise ValueError(f"timeframe {self.timeframe}: overlapping members in a disjoint grouping")

    def __len__(self) -> int:
        return len(self.communities)

    def __iter__(self) -> Iterator[Community]:
        return iter(self.communities)

    def by_id(self) -> dict:
        return {c.id: c for c in self.communities}


def _has_overlap(communities: Iterable[Community]) -> bool:
    seen: set = set()
    for c in communities:
        if seen & c.members:
            return True
        seen |= c.members
    return False


def make_grouping(timeframe: int, member_sets: Sequence[Iterable], *, ids: Optional[Sequence] = None,
                  detector: str = "import", k: Optional[int] = None) -> GroupingResult:
    """Convenience constructor; ids default to ``c1, c2, ...`` in member order."""
    member_sets = [frozenset(m) for m in member_sets]
    if ids is None:
        ids = [f"c{n}" for n in range(1, len(member_sets) + 1)]
    comms = tuple(Community(i, timeframe, m) for i, m in zip(ids, member_sets))
    return GroupingResult(timeframe, comms, _has_overlap(comms), detector, k)


def _ordered_communities(timeframe: int, member_sets: Iterable[frozenset]) -> tuple:
    """Stable ids: communities ordered by their smallest member, then size."""
    keyed = sorted(
        (tuple(sorted((natural_key(n) for n in ms))), ms) for ms in member_sets
    )
    return tuple(Community(f"c{n}", timeframe, ms) for n, (_, ms) in enumerate(keyed, start=1))


# -- label propagation --------------------------------------------------------


def detect_label_propagation(s: Snapshot, seed: int = 0, min_size: int = 3, max_iter: int = 100) -> GroupingResult:
    """Asynchronous weighted label propagation on the undirected view of ``s``.

    Visit order and ties are drawn from ``random.Random(seed)`` over nodes in
    natural sort order, so a given (snapshot, seed) always yields the same result.
    """
    rng = random.Random(seed)
    nodes = s.sorted_nodes()
    adj = s.adjacency()
    nbr_lists = {n: sorted(adj[n].items(), key=lambda kv: natural_key(kv[0])) for n in nodes}
    labels = {n: i for i, n in enumerate(nodes)}

    def best_labels(n):
        score: dict = defaultdict(float)
        for v, w in nbr_lists[n]:
            score[labels[v]] += w
        if not score:
            return [labels[n]]
        top = max(score.values())
        return sorted(lab for lab, sc in score.items() if sc == top)

    order = list(nodes)
    for _ in range(max_iter):
        rng.shuffle(order)
        for n in order:
            cands = best_labels(n)
            if labels[n] not in cands:
                labels[n] = cands[0] if len(cands) == 1 else rng.choice(cands)
        if all(labels[n] in best_labels(n) for n in nodes):
            break

    groups: dict = defaultdict(set)
    for n, lab in labels.items():
        groups[lab].add(n)
    kept = [frozenset(g) for g in groups.values() if len(g) >= min_size]
    return GroupingResult(s.index, _ordered_communities(s.index, kept), False, "lpa", None)


# -- clique percolation ---------------------------------------------------------


def k_clique_communities(graph: nx.Graph, k: int) -> list[frozenset]:
    """Node sets of k-clique percolation clusters.

    Two maximal cliques of size >= k percolate into the same cluster when they
    share at least k-1 nodes; this is equivalent to adjacency of k-cliques
    sharing k-1 nodes.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    cliques = [frozenset(c) for c in nx.find_cliques(graph) if len(c) >= k]
    cliques.sort(key=lambda c: sorted(natural_key(n) for n in c))
    parent = list(range(len(cliques)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    by_node: dict = defaultdict(list)
    for i, c in enumerate(cliques):
        for n in c:
            by_node[n].append(i)
    for i, c in enumerate(cliques):
        candidates = set()
        for n in c:
            candidates.update(j for j in by_node[n] if j > i)
        for j in candidates:
            if len(c & cliques[j]) >= k - 1:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri

    clusters: dict = defaultdict(set)
    for i, c in enumerate(cliques):
        clusters[find(i)].update(c)
    return [frozenset(c) for c in clusters.values()]


def detect_clique_percolation(s: Snapshot, k: int = 3, min_size: int = 3) -> GroupingResult:
    if k < 3:
        raise ValueError("clique percolation needs k >= 3")
    found = [c for c in k_clique_communities(s.to_networkx(), k) if len(c) >= min_size]
    comms = _ordered_communities(s.index, found)
    return GroupingResult(s.index, comms, _has_overlap(comms), "cpm", k)


def detect_all(tsn: TemporalSocialNetwork, detector: str = "lpa", *, k: int = 3, min_size: int = 3,
               seed: int = 0) -> list[GroupingResult]:
    """Run one detector on every snapshot."""
    if detector == "lpa":
        return [detect_label_propagation(s, seed=seed, min_size=min_size) for s in tsn]
    if detector == "cpm":
        return [detect_clique_percolation(s, k=k, min_size=min_size) for s in tsn]
    raise ValueError(f"unknown detector {detector!r}")


# -- grouping files ---------------------------------------------------------------


def import_groupings(source: TextSource, tsn: TemporalSocialNetwork) -> list[GroupingResult]:
    """Read ``timeframe group_id node`` lines into one grouping per timeframe of ``tsn``."""
    members: dict = defaultdict(lambda: defaultdict(set))
    order: dict = defaultdict(list)
    bad_frames, bad_nodes, malformed = [], [], []
    with open_lines(source) as lines:
        for lineno, fields in iter_records(lines):
            if len(fields) != 3:
                malformed.append(lineno)
                continue
            try:
                frame = int(fields[0])
            except ValueError:
                malformed.append(lineno)
                continue
            gid, node = fields[1], fields[2]
            if not 1 <= frame <= tsn.m:
                bad_frames.append((lineno, frame))
                continue
            if node not in tsn.snapshots[frame - 1].nodes:
                bad_nodes.append((lineno, frame, node))
                continue
            if gid not in members[frame]:
                order[frame].append(gid)
            members[frame][gid].add(node)
    if malformed:
        raise GroupingValidationError(f"malformed grouping lines: {malformed}", malformed)
    if bad_frames:
        raise GroupingValidationError(
            f"unknown timeframe(s) {sorted({f for _, f in bad_frames})} for a {tsn.m}-frame network", bad_frames
        )
    if bad_nodes:
        shown = ", ".join(f"{n}@T{f} (line {ln})" for ln, f, n in bad_nodes[:10])
        raise GroupingValidationError(f"nodes absent from their snapshot: {shown}", bad_nodes)

    out = []
    for frame in range(1, tsn.m + 1):
        comms = tuple(Community(g, frame, frozenset(members[frame][g])) for g in order[frame])
        out.append(GroupingResult(frame, comms, _has_overlap(comms), "import", None))
    return out


def read_groupings(source: TextSource, n_frames: Optional[int] = None) -> list[GroupingResult]:
    """Grouping file without a network to check against; frames with no lines come back empty."""
    members: dict = defaultdict(lambda: defaultdict(set))
    order: dict = defaultdict(list)
    with open_lines(source) as lines:
        for lineno, fields in iter_records(lines):
            if len(fields) != 3:
                raise GroupingValidationError(f"line {lineno}: expected 'timeframe group_id node'", [lineno])
            frame, gid, node = int(fields[0]), fields[1], fields[2]
            if frame < 1:
                raise GroupingValidationError(f"line {lineno}: timeframes start at 1", [lineno])
            if gid not in members[frame]:
                order[frame].append(gid)
            members[frame][gid].add(node)
    m = max([n_frames or 0, *members.keys()])
    out = []
    for frame in range(1, m + 1):
        comms = tuple(Community(g, frame, frozenset(members[frame][g])) for g in order[frame])
        out.append(GroupingResult(frame, comms, _has_overlap(comms), "import", None))
    return out


def format_groupings(groupings: Iterable[GroupingResult]) -> str:
    lines = []
    for g in groupings:
        for c in g.communities:
            for n in sorted(c.members, key=natural_key):
                lines.append(f"{g.timeframe} {c.id} {n}\n")
    return "".join(lines)


def groupings_to_json(groupings: Iterable[GroupingResult]) -> str:
    payload = [
        {
            "timeframe": g.timeframe,
            "overlapping": g.overlapping,
            "detector": g.detector,
            "k": g.k,
            "communities": {str(c.id): sorted((str(n) for n in c.members), key=natural_key) for c in g},
        }
        for g in groupings
    ]
    return json.dumps(payload, indent=2) + "\n"


# -- node importance ---------------------------------------------------------------


class NodeImportanceMap(Mapping):
    """Read-only ``node -> importance`` map for one community."""

    def __init__(self, community_id, values: Mapping):
        for n, v in values.items():
            if not v > 0:
                raise ValueError(f"importance of {n!r} must be positive, got {v!r}")
        self.community_id = community_id
        self._values = dict(values)

    def __getitem__(self, node):
        return self._values[node]

    def __iter__(self):
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        return f"NodeImportanceMap({self.community_id!r}, {self._values!r})"


def compute_node_importance(s: Optional[Snapshot], c: Community, measure: str = "uniform") -> NodeImportanceMap:
    """Importance of each member of ``c`` within snapshot ``s``.

    ``in_group_degree`` is 1 plus the number of fellow members adjacent to the
    node in the undirected view, so isolated members still weigh 1.
    """
    if measure == "uniform":
        return NodeImportanceMap(c.id, {n: 1.0 for n in c.members})
    if measure in ("in_group_degree", "degree"):
        if s is None:
            raise ValueError("in_group_degree importance needs the snapshot")
        neighbours: dict = defaultdict(set)
        for (u, v) in s.edges:
            if u in c.members and v in c.members:
                neighbours[u].add(v)
                neighbours[v].add(u)
        return NodeImportanceMap(c.id, {n: 1.0 + len(neighbours[n]) for n in c.members})
    raise ValueError(f"unknown importance measure {measure!r}")
