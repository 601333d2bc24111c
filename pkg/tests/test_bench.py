import io

import pytest

from commevo.asur import run_asur
from commevo.bench import (
    SEVEN_EVENTS_SCRIPT,
    ScriptError,
    asur_expectation,
    generate_scenario,
    map_communities,
    parse_script,
    score_recovery,
)
from commevo.communities import make_grouping
from commevo.events import EventRecord, EventType as E
from commevo.ged import run_ged
from commevo.temporal import format_edges

from conftest import DATA


def kinds(events):
    return [(e.frames, e.type, e.sources, e.targets) for e in events]


def test_parse_script_directives():
    script = parse_script(io.StringIO("# demo\nT1 form g 6\nT2 split g -> a:4 b:2\n"))
    assert script.n_frames == 2
    split = script.directives[1]
    assert (split.op, split.group, split.parts) == ("split", "g", (("a", 4), ("b", 2)))


def test_script_file_matches_builtin():
    assert parse_script(DATA / "seven_events.txt") == parse_script(SEVEN_EVENTS_SCRIPT)


@pytest.mark.parametrize("text", ["T1 explode g 3\n", "X1 form g 3\n", "T1 form g\n", "T2 merge a -> b\n"])
def test_bad_script_lines(text):
    with pytest.raises(ScriptError):
        parse_script(text)


def test_form_then_continue():
    sc = generate_scenario("T1 form g 5\nT2 continue g\n", 1.0, 0.0, seed=1)
    s1, s2 = sc.tsn.snapshots
    assert s1.nodes == s2.nodes and len(s1.nodes) == 5
    assert len(s1.edges) == len(s2.edges) == 20  # directed 5-clique
    assert kinds(sc.expected_events) == [((1, 2), E.CONTINUING, ("g",), ("g",))]


def test_split_semantics():
    sc = generate_scenario("T1 form g 6\nT2 split g -> a:4 b:2\n", 1.0, 0.0, seed=4, min_size=2)
    assert kinds(sc.expected_events) == [
        ((1, 2), E.SPLITTING, ("g",), ("a",)),
        ((1, 2), E.SPLITTING, ("g",), ("b",)),
    ]
    t1, t2 = sc.truth_groupings
    (g,) = t1.communities
    a, b = t2.communities
    assert (len(a), len(b)) == (4, 2)
    assert a.members | b.members == g.members and not a.members & b.members


def test_grow_uses_fresh_nodes_and_dissolved_ids_never_return():
    sc = generate_scenario("T1 form g 4\nT2 grow g 3\nT3 dissolve g\nT3 form h 4\n", seed=0)
    t1, t2, t3 = sc.truth_groupings
    assert t1.communities[0].members < t2.communities[0].members
    assert not t3.communities[0].members & t2.communities[0].members


def test_p_out_not_below_p_in():
    with pytest.raises(ValueError):
        generate_scenario("T1 form g 5\n", p_in=0.3, p_out=0.3)


@pytest.mark.parametrize(
    "text",
    [
        "T1 form g 5\nT2 shrink g 3\n",
        "T1 form g 5\nT2 grow h 3\n",
        "T1 form g 5\nT2 split g -> a:3 b:3\n",
        "T1 form g 2\n",
        "T1 form g 5\nT2 grow g 2\nT2 shrink g 1\n",
        "T2 continue g\n",
    ],
)
def test_infeasible_directives(text):
    with pytest.raises(ScriptError):
        generate_scenario(text)


def test_node_budget():
    with pytest.raises(ScriptError):
        generate_scenario("T1 form g 5\nT2 grow g 5\n", node_budget=8)


def test_replayable_bytes():
    a = generate_scenario(SEVEN_EVENTS_SCRIPT, 0.7, 0.02, seed=42)
    b = generate_scenario(SEVEN_EVENTS_SCRIPT, 0.7, 0.02, seed=42)
    c = generate_scenario(SEVEN_EVENTS_SCRIPT, 0.7, 0.02, seed=43)
    assert format_edges(a.edges) == format_edges(b.edges)
    assert format_edges(a.edges) != format_edges(c.edges)


def test_seven_event_script_covers_every_type():
    sc = generate_scenario(SEVEN_EVENTS_SCRIPT, seed=7)
    assert {e.type for e in sc.expected_events} == set(E)
    assert sc.tsn.m == 10


def test_clean_plant_recovered_by_ged_and_asur():
    sc = generate_scenario(SEVEN_EVENTS_SCRIPT, seed=7)
    ged = score_recovery(sc.expected_for("ged"), run_ged(sc.truth_groupings, sc.tsn))
    assert ged.exact_match
    asur = score_recovery(sc.expected_for("asur"), run_asur(sc.truth_groupings))
    assert asur.exact_match


def test_asur_expectation_pairs_fragments():
    exp = [
        EventRecord(E.MERGING, (1, 2), (s,), ("m",)) for s in ("a", "b", "c")
    ] + [EventRecord(E.GROWING, (1, 2), ("x",), ("x",))]
    out = asur_expectation(exp)
    assert [(e.type, e.sources) for e in out] == [
        (E.MERGING, ("a", "b")),
        (E.MERGING, ("a", "c")),
        (E.MERGING, ("b", "c")),
    ]


# -- scoring ---------------------------------------------------------------------------


def split_pair():
    return [EventRecord(E.SPLITTING, (1, 2), ("g",), (t,)) for t in ("a", "b")]


def test_score_identical():
    rep = score_recovery(split_pair(), split_pair())
    assert rep.exact_match
    assert all(s.precision == s.recall == 1.0 for s in rep.per_type.values())
    assert rep.per_type[E.SPLITTING].vacuous is False
    assert rep.per_type[E.MERGING].vacuous is True


def test_score_empty_observed():
    rep = score_recovery(split_pair(), [])
    assert rep.per_type[E.SPLITTING].recall == 0.0
    assert not rep.exact_match


def test_score_spurious_merge():
    spurious = EventRecord(E.MERGING, (1, 2), ("a",), ("b",))
    rep = score_recovery(split_pair(), split_pair() + [spurious])
    assert rep.per_type[E.SPLITTING].precision == rep.per_type[E.SPLITTING].recall == 1.0
    assert rep.per_type[E.MERGING].precision == 0.0
    assert not rep.exact_match
    assert "exact_match\tfalse" in rep.format()
    assert rep.to_dict()["per_type"]["merging"]["observed"] == 1


def test_score_maps_detected_ids():
    truth = [make_grouping(1, [{"a", "b", "c"}], ids=["g"]), make_grouping(2, [{"a", "b", "c"}], ids=["g"])]
    found = [make_grouping(1, [{"a", "b"}]), make_grouping(2, [{"a", "b", "c", "z"}])]
    assert map_communities(truth, found) == {(1, "c1"): "g", (2, "c1"): "g"}
    observed = [EventRecord(E.CONTINUING, (1, 2), ("c1",), ("c1",))]
    expected = [EventRecord(E.CONTINUING, (1, 2), ("g",), ("g",))]
    assert score_recovery(expected, observed, truth, found).exact_match
    assert not score_recovery(expected, observed).exact_match
