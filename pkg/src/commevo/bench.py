"""Synthetic temporal networks with scripted evolution events, and recovery scoring.

A script holds one directive per line; ``Tk`` names the timeframe the directive
produces::

    T1 form a 30
    T2 grow a +15
    T3 shrink a -5
    T4 split a -> b:20 c:15
    T5 merge b c -> d
    T6 dissolve d
    T3 continue x

Live groups that a frame does not mention continue unchanged. Members that
leave a group (shrink, split remainders) leave the network; node ids are never
reused.
"""
from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from ._util import TextSource, natural_key, open_lines
from .communities import Community, GroupingResult
from .events import EventRecord, EventType, sort_events
from .temporal import SlicingPolicy, TemporalEdge, TemporalSocialNetwork, network_from_frames, slice_edges

OPS = ("form", "grow", "shrink", "split", "merge", "continue", "dissolve")

SEVEN_EVENTS_SCRIPT = """\
# every GED event type, 10 frames, about 200 nodes per frame
T1 form a 30
T1 form b 40
T1 form c 50
T1 form d 40
T1 form e 40
T2 grow a +15
T3 shrink b -10
T4 split c -> c1:30 c2:20
T5 merge d e -> de
T6 dissolve b
T6 form f 35
T8 split de -> x:40 y:40
T9 merge c1 c2 -> cc
T10 dissolve a
T10 form g 30
"""


class ScriptError(ValueError):
    pass


@dataclass(frozen=True)
class Directive:
    frame: int
    op: str
    group: str = ""
    size: int = 0
    sources: tuple = ()
    parts: tuple = ()  # (id, size) pairs for split
    line: int = 0


@dataclass(frozen=True)
class EventScript:
    directives: tuple
    n_frames: int

    @classmethod
    def parse(cls, source: TextSource) -> "EventScript":
        return parse_script(source)


_FRAME = re.compile(r"^[Tt](\d+)$")


def parse_script(source: TextSource) -> EventScript:
    if isinstance(source, str) and "\n" in source:
        source = source.splitlines()
    directives = []
    n_frames = 0
    with open_lines(source) as lines:
        for lineno, raw in enumerate(lines, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if fields[0] == "frames" and len(fields) == 2:
                n_frames = max(n_frames, int(fields[1]))
                continue
            m = _FRAME.match(fields[0])
            if not m or len(fields) < 3:
                raise ScriptError(f"line {lineno}: expected 'T<k> <op> ...', got {raw.strip()!r}")
            frame, op, rest = int(m.group(1)), fields[1], fields[2:]
            if frame < 1:
                raise ScriptError(f"line {lineno}: frames start at T1")
            try:
                directives.append(_parse_directive(frame, op, rest, lineno))
            except (ValueError, IndexError) as exc:
                raise ScriptError(f"line {lineno}: {exc}") from None
            n_frames = max(n_frames, frame)
    return EventScript(tuple(directives), n_frames)


def _parse_directive(frame: int, op: str, rest: list, lineno: int) -> Directive:
    if op not in OPS:
        raise ValueError(f"unknown directive {op!r}")
    if op in ("form", "grow", "shrink"):
        if len(rest) != 2:
            raise ValueError(f"{op} takes a group id and a size")
        return Directive(frame, op, rest[0], abs(int(rest[1])), line=lineno)
    if op in ("continue", "dissolve"):
        if len(rest) != 1:
            raise ValueError(f"{op} takes one group id")
        return Directive(frame, op, rest[0], line=lineno)
    if "->" not in rest:
        raise ValueError(f"{op} needs '->'")
    arrow = rest.index("->")
    left, right = rest[:arrow], rest[arrow + 1:]
    if op == "split":
        if len(left) != 1 or len(right) < 2:
            raise ValueError("split takes 'g -> a:n b:m ...' with at least two parts")
        parts = tuple((p.split(":")[0], int(p.split(":")[1])) for p in right)
        return Directive(frame, op, left[0], parts=parts, line=lineno)
    if len(left) < 2 or len(right) != 1:
        raise ValueError("merge takes 'a b ... -> m' with at least two sources")
    return Directive(frame, op, right[0], sources=tuple(left), line=lineno)


@dataclass
class PlantedScenario:
    tsn: TemporalSocialNetwork
    truth_groupings: list
    expected_events: list
    edges: list = field(default_factory=list)
    planted: list = field(default_factory=list)  # per-frame {group id: member list}

    def expected_for(self, method: str = "ged") -> list[EventRecord]:
        if method == "ged":
            return list(self.expected_events)
        if method == "asur":
            return asur_expectation(self.expected_events)
        raise ValueError(f"no planted expectation for method {method!r}")


def _node(n: int) -> str:
    return f"n{n}"


def generate_scenario(script: EventScript | str, p_in: float = 1.0, p_out: float = 0.0, seed: int = 0, *,
                      min_size: int = 3, node_budget: Optional[int] = None) -> PlantedScenario:
    """Sample a planted temporal network from ``script``.

    Within a frame every ordered pair of members of the same group is linked
    with probability ``p_in`` and every other ordered pair with ``p_out``. All
    randomness comes from one ``numpy`` generator seeded with ``seed``.
    """
    if isinstance(script, str):
        script = parse_script(script)
    if not (0 <= p_out < p_in <= 1):
        raise ValueError(f"need 0 <= p_out < p_in <= 1, got p_in={p_in}, p_out={p_out}")
    rng = np.random.default_rng(seed)

    by_frame: dict = defaultdict(list)
    for d in script.directives:
        by_frame[d.frame].append(d)

    live: dict = {}
    next_node = 0
    planted: list = []
    expected: list = []

    def fail(d: Directive, msg: str):
        raise ScriptError(f"line {d.line} (T{d.frame} {d.op}): {msg}")

    def fresh(n: int) -> list:
        nonlocal next_node
        out = list(range(next_node, next_node + n))
        next_node += n
        if node_budget is not None and next_node > node_budget:
            raise ScriptError(f"node budget {node_budget} exceeded")
        return out

    def need_live(d: Directive, gid: str):
        if gid not in live:
            fail(d, f"group {gid!r} is not alive")

    for k in range(1, script.n_frames + 1):
        prev = dict(live)
        pair = (k - 1, k)
        touched: set = set()
        for d in by_frame.get(k, ()):
            if d.op == "form":
                if d.group in live:
                    fail(d, f"group {d.group!r} already exists")
                if d.size < min_size:
                    fail(d, f"size {d.size} below minimum {min_size}")
                live[d.group] = fresh(d.size)
                touched.add(d.group)
                if k > 1:
                    expected.append(EventRecord(EventType.FORMING, pair, (), (d.group,)))
                continue
            if k == 1:
                fail(d, "only 'form' can appear in the first frame")
            if d.op in ("grow", "shrink", "continue", "dissolve"):
                need_live(d, d.group)
                if d.group not in prev or d.group in touched:
                    fail(d, f"group {d.group!r} is changed twice in one frame")
                touched.add(d.group)
            if d.op == "grow":
                live[d.group] = live[d.group] + fresh(d.size)
                expected.append(EventRecord(EventType.GROWING, pair, (d.group,), (d.group,)))
            elif d.op == "shrink":
                members = live[d.group]
                if len(members) - d.size < min_size or d.size < 1:
                    fail(d, f"cannot shrink a group of {len(members)} by {d.size}")
                leaving = set(rng.choice(members, size=d.size, replace=False).tolist())
                live[d.group] = [n for n in members if n not in leaving]
                expected.append(EventRecord(EventType.SHRINKING, pair, (d.group,), (d.group,)))
            elif d.op == "continue":
                expected.append(EventRecord(EventType.CONTINUING, pair, (d.group,), (d.group,)))
            elif d.op == "dissolve":
                del live[d.group]
                expected.append(EventRecord(EventType.DISSOLVING, pair, (d.group,), ()))
            elif d.op == "split":
                need_live(d, d.group)
                if d.group not in prev or d.group in touched:
                    fail(d, f"group {d.group!r} is changed twice in one frame")
                members = live.pop(d.group)
                sizes = [s for _, s in d.parts]
                if sum(sizes) > len(members):
                    fail(d, f"parts need {sum(sizes)} members, group has {len(members)}")
                if min(sizes) < min_size:
                    fail(d, f"part smaller than minimum size {min_size}")
                order = rng.permutation(members).tolist()
                start = 0
                for pid, size in d.parts:
                    if pid in live or pid in touched:
                        fail(d, f"part id {pid!r} is already in use")
                    live[pid] = sorted(order[start:start + size])
                    start += size
                    touched.add(pid)
                    expected.append(EventRecord(EventType.SPLITTING, pair, (d.group,), (pid,)))
                touched.add(d.group)
            elif d.op == "merge":
                merged = []
                for src in d.sources:
                    need_live(d, src)
                    if src not in prev or src in touched:
                        fail(d, f"group {src!r} is changed twice in one frame")
                for src in d.sources:
                    merged.extend(live.pop(src))
                    touched.add(src)
                if d.group in live:
                    fail(d, f"merge target {d.group!r} is already in use")
                live[d.group] = sorted(merged)
                touched.add(d.group)
                for src in d.sources:
                    expected.append(EventRecord(EventType.MERGING, pair, (src,), (d.group,)))
        if k > 1:
            for gid in prev:
                if gid not in touched and gid in live:
                    expected.append(EventRecord(EventType.CONTINUING, pair, (gid,), (gid,)))
        planted.append({gid: list(m) for gid, m in live.items()})

    edges = _sample_edges(planted, p_in, p_out, rng)
    policy = SlicingPolicy("disjoint", window=1.0, origin=0.0, horizon=float(script.n_frames))
    if edges:
        tsn = slice_edges(edges, policy)
    else:
        tsn = network_from_frames([[] for _ in range(script.n_frames)], policy)

    truth = []
    for k, groups in enumerate(planted, start=1):
        present = tsn.snapshots[k - 1].nodes
        comms = []
        for gid in sorted(groups, key=natural_key):
            members = frozenset(_node(n) for n in groups[gid]) & present
            if members:
                comms.append(Community(gid, k, members))
        truth.append(GroupingResult(k, tuple(comms), False, "planted", None))

    return PlantedScenario(tsn, truth, sort_events(expected), edges, planted)


def _sample_edges(planted: list, p_in: float, p_out: float, rng: np.random.Generator) -> list[TemporalEdge]:
    edges = []
    for k, groups in enumerate(planted, start=1):
        nodes, labels = [], []
        for lab, gid in enumerate(sorted(groups, key=natural_key)):
            for n in sorted(groups[gid]):
                nodes.append(n)
                labels.append(lab)
        if not nodes:
            continue
        labels = np.asarray(labels)
        prob = np.where(labels[:, None] == labels[None, :], p_in, p_out)
        np.fill_diagonal(prob, 0.0)
        hit = rng.random(prob.shape) < prob
        rows, cols = np.nonzero(hit)
        times = (k - 1) + rng.random(rows.size)
        for r, c, t in zip(rows.tolist(), cols.tolist(), times.tolist()):
            edges.append(TemporalEdge(_node(nodes[r]), _node(nodes[c]), t))
    return edges


def asur_expectation(expected: Iterable[EventRecord]) -> list[EventRecord]:
    """Translate planted events into the five-event vocabulary of Asur et al.

    Growth and shrinkage have no counterpart. Splits and merges become one
    record per unordered pair of fragments, as the Asur predicates are binary.
    """
    out = []
    splits: dict = defaultdict(list)
    merges: dict = defaultdict(list)
    for ev in expected:
        if ev.type in (EventType.CONTINUING, EventType.FORMING, EventType.DISSOLVING):
            out.append(EventRecord(ev.type, ev.frames, ev.sources, ev.targets, method="asur"))
        elif ev.type is EventType.SPLITTING:
            splits[(ev.frames, ev.sources[0])].extend(ev.targets)
        elif ev.type is EventType.MERGING:
            merges[(ev.frames, ev.targets[0])].extend(ev.sources)
    for (frames, src), tgts in splits.items():
        for a, b in combinations(tgts, 2):
            out.append(EventRecord(EventType.SPLITTING, frames, (src,), (a, b), method="asur"))
    for (frames, tgt), srcs in merges.items():
        for a, b in combinations(srcs, 2):
            out.append(EventRecord(EventType.MERGING, frames, (a, b), (tgt,), method="asur"))
    return sort_events(out)


# -- scoring -----------------------------------------------------------------------


@dataclass(frozen=True)
class TypeScore:
    precision: float
    recall: float
    n_expected: int
    n_observed: int
    n_matched: int

    @property
    def vacuous(self) -> bool:
        """Either ratio had an empty denominator and was set to 1.0 by convention."""
        return self.n_expected == 0 or self.n_observed == 0


@dataclass(frozen=True)
class RecoveryReport:
    per_type: Mapping
    exact_match: bool

    def format(self) -> str:
        lines = ["event\tprecision\trecall\texpected\tobserved\tmatched\tvacuous\n"]
        for t in EventType:
            s = self.per_type[t]
            lines.append(
                f"{t.value}\t{s.precision:.4f}\t{s.recall:.4f}\t{s.n_expected}\t{s.n_observed}\t{s.n_matched}\t{str(s.vacuous).lower()}\n"
            )
        lines.append(f"exact_match\t{str(self.exact_match).lower()}\n")
        return "".join(lines)

    def to_dict(self) -> dict:
        return {
            "exact_match": self.exact_match,
            "per_type": {
                t.value: {
                    "precision": s.precision,
                    "recall": s.recall,
                    "expected": s.n_expected,
                    "observed": s.n_observed,
                    "matched": s.n_matched,
                    "vacuous": s.vacuous,
                }
                for t, s in self.per_type.items()
            },
        }


def map_communities(truth: Sequence[GroupingResult], observed: Sequence[GroupingResult]) -> dict:
    """``(frame, observed id) -> truth id`` by largest member overlap (ties by truth id)."""
    mapping = {}
    truth_by_frame = {g.timeframe: g for g in truth}
    for g in observed:
        t = truth_by_frame.get(g.timeframe)
        for c in g:
            best, best_ov = None, 0
            if t is not None:
                for tc in sorted(t, key=lambda x: natural_key(x.id)):
                    ov = len(c.members & tc.members)
                    if ov > best_ov:
                        best, best_ov = tc.id, ov
            mapping[(g.timeframe, c.id)] = best if best is not None else ("unmapped", c.id)
    return mapping


def _remap(ev: EventRecord, mapping: dict) -> EventRecord:
    fi, fj = ev.frames
    return EventRecord(
        ev.type,
        ev.frames,
        tuple(mapping.get((fi, s), s) for s in ev.sources),
        tuple(mapping.get((fj, t), t) for t in ev.targets),
        ev.measures,
        ev.method,
    )


def score_recovery(expected: Iterable[EventRecord], observed: Iterable[EventRecord],
                   truth_groupings: Optional[Sequence[GroupingResult]] = None,
                   observed_groupings: Optional[Sequence[GroupingResult]] = None) -> RecoveryReport:
    """Per-type precision and recall of ``observed`` against ``expected``.

    Events match on frame pair, type and source/target id sets. When both
    groupings are given, observed ids are first renamed to the truth community
    they overlap most.
    """
    observed = list(observed)
    if truth_groupings is not None and observed_groupings is not None:
        mapping = map_communities(truth_groupings, observed_groupings)
        observed = [_remap(ev, mapping) for ev in observed]
    exp_keys = Counter(ev.key() for ev in expected)
    obs_keys = Counter(ev.key() for ev in observed)

    per_type = {}
    for t in EventType:
        e = Counter({k: v for k, v in exp_keys.items() if k[1] is t})
        o = Counter({k: v for k, v in obs_keys.items() if k[1] is t})
        matched = sum((e & o).values())
        n_e, n_o = sum(e.values()), sum(o.values())
        per_type[t] = TypeScore(
            precision=matched / n_o if n_o else 1.0,
            recall=matched / n_e if n_e else 1.0,
            n_expected=n_e,
            n_observed=n_o,
            n_matched=matched,
        )
    return RecoveryReport(per_type, exp_keys == obs_keys)

