import io
import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commevo import SlicingPolicy, slice_edges
from commevo.communities import (
    Community,
    GroupingResult,
    GroupingValidationError,
    compute_node_importance,
    detect_clique_percolation,
    detect_label_propagation,
    format_groupings,
    import_groupings,
    k_clique_communities,
    make_grouping,
    read_groupings,
)
from commevo.temporal import Snapshot, TemporalEdge

from conftest import brute_force_cpm, clique_snapshot


def random_snapshot(rng, n_nodes, p):
    edges = [
        TemporalEdge(f"v{u}", f"v{v}", 0.0)
        for u, v in combinations(range(n_nodes), 2)
        if rng.random() < p
    ]
    return Snapshot.from_edges(1, edges)


# -- label propagation ----------------------------------------------------------------


def test_lpa_two_cliques_match_components():
    s = clique_snapshot(1, range(1, 5), range(5, 9))
    g = detect_label_propagation(s, seed=3)
    assert len(g) == 2
    components = {frozenset(c) for c in nx.connected_components(s.to_networkx())}
    assert {c.members for c in g} == components
    assert not g.overlapping


def test_lpa_single_clique():
    g = detect_label_propagation(clique_snapshot(1, range(5)), seed=0)
    assert [len(c) for c in g] == [5]


def test_lpa_isolated_nodes():
    s = Snapshot(1, frozenset({"a", "b", "c"}), {})
    assert len(detect_label_propagation(s)) == 0


def test_lpa_min_size_filter():
    s = clique_snapshot(1, range(5), range(10, 12))
    g = detect_label_propagation(s, min_size=3)
    assert [len(c) for c in g] == [5]
    assert len(detect_label_propagation(s, min_size=2)) == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 100))
def test_lpa_deterministic(graph_seed, seed):
    rng = random.Random(graph_seed)
    s = random_snapshot(rng, 15, 0.3)
    a = detect_label_propagation(s, seed=seed)
    b = detect_label_propagation(s, seed=seed)
    assert format_groupings([a]) == format_groupings([b])
    assert a == b


# -- clique percolation -----------------------------------------------------------------


def test_cpm_adjacent_cliques_percolate():
    s = clique_snapshot(1, [1, 2, 3, 4], [2, 3, 4, 5])
    g = detect_clique_percolation(s, k=4)
    assert [sorted(c.members) for c in g] == [["v1", "v2", "v3", "v4", "v5"]]


def test_cpm_two_shared_nodes_stay_apart():
    s = clique_snapshot(1, [1, 2, 3, 4], [3, 4, 5, 6])
    g = detect_clique_percolation(s, k=4)
    assert len(g) == 2
    assert g.overlapping
    a, b = g.communities
    assert a.members & b.members == {"v3", "v4"}


def test_cpm_triangle_has_no_4_cliques():
    assert len(detect_clique_percolation(clique_snapshot(1, [1, 2, 3]), k=4)) == 0


def test_cpm_needs_k3():
    with pytest.raises(ValueError):
        detect_clique_percolation(clique_snapshot(1, [1, 2, 3]), k=2)


def test_cpm_matches_brute_force_oracle():
    rng = random.Random(2024)
    for trial in range(150):
        n = rng.randint(3, 12)
        s = random_snapshot(rng, n, rng.uniform(0.2, 0.8))
        k = rng.choice([3, 4, 5])
        ours = sorted(sorted(c) for c in k_clique_communities(s.to_networkx(), k))
        oracle = brute_force_cpm(s.nodes, s.undirected_edges(), k)
        assert ours == oracle, (trial, k)


def test_cpm_members_lie_in_a_community_clique():
    rng = random.Random(7)
    for _ in range(60):
        s = random_snapshot(rng, rng.randint(4, 20), 0.45)
        k = rng.choice([3, 4])
        adj = s.adjacency()
        for c in detect_clique_percolation(s, k=k, min_size=k):
            for node in c.members:
                others = sorted(c.members - {node})
                assert any(
                    all(b in adj[a] for a, b in combinations((node, *rest), 2))
                    for rest in combinations(others, k - 1)
                )


# -- grouping files ---------------------------------------------------------------------


@pytest.fixture
def three_frames():
    edges = [TemporalEdge("a", "b", 0.5), TemporalEdge("b", "c", 0.5), TemporalEdge("c", "d", 1.5),
             TemporalEdge("a", "e", 2.5)]
    return slice_edges(edges, SlicingPolicy("disjoint", 1, origin=0))


def test_import_disjoint(three_frames):
    gs = import_groupings(io.StringIO("1 g1 a\n1 g1 b\n1 g2 c\n"), three_frames)
    assert len(gs) == 3
    assert [sorted(c.members) for c in gs[0]] == [["a", "b"], ["c"]]
    assert not gs[0].overlapping
    assert len(gs[1]) == 0


def test_import_overlapping_flag(three_frames):
    gs = import_groupings(io.StringIO("1 g1 a\n1 g1 b\n1 g2 a\n1 g2 c\n"), three_frames)
    assert gs[0].overlapping


def test_import_unknown_timeframe(three_frames):
    with pytest.raises(GroupingValidationError, match="unknown timeframe"):
        import_groupings(io.StringIO("9 g1 a\n"), three_frames)


def test_import_absent_node_listed(three_frames):
    with pytest.raises(GroupingValidationError) as err:
        import_groupings(io.StringIO("1 g1 a\n2 g1 a\n2 g1 zz\n"), three_frames)
    assert [o[2] for o in err.value.offenders] == ["a", "zz"]


def test_grouping_file_roundtrip(three_frames):
    text = "1 g1 a\n1 g1 b\n1 g2 c\n2 x c\n2 x d\n"
    gs = import_groupings(io.StringIO(text), three_frames)
    again = read_groupings(io.StringIO(format_groupings(gs)), 3)
    assert [[(c.id, c.members) for c in g] for g in again] == [[(c.id, c.members) for c in g] for g in gs]


def test_disjoint_grouping_validates():
    with pytest.raises(ValueError):
        GroupingResult(1, (Community("a", 1, {"x", "y"}), Community("b", 1, {"y"})), overlapping=False)
    with pytest.raises(ValueError):
        Community("a", 1, set())
    assert make_grouping(1, [{"x", "y"}, {"y", "z"}]).overlapping


# -- node importance ------------------------------------------------------------------------


def test_uniform_importance():
    c = Community("g", 1, {"a", "b", "c"})
    assert dict(compute_node_importance(None, c, "uniform")) == {"a": 1, "b": 1, "c": 1}


def test_in_group_degree_path():
    s = Snapshot.from_edges(1, [TemporalEdge("a", "b", 0), TemporalEdge("c", "b", 0)])
    ni = compute_node_importance(s, Community("g", 1, {"a", "b", "c"}), "in_group_degree")
    assert dict(ni) == {"a": 2, "b": 3, "c": 2}


def test_in_group_degree_floor_for_isolated_member():
    s = Snapshot.from_edges(
        1,
        [TemporalEdge("a", "b", 0), TemporalEdge("b", "c", 0), TemporalEdge("c", "a", 0), TemporalEdge("d", "x", 0)],
    )
    ni = compute_node_importance(s, Community("g", 1, {"a", "b", "c", "d"}), "in_group_degree")
    assert ni["d"] == 1
    assert ni["a"] == 3


def test_in_group_degree_ignores_outside_edges_and_direction():
    s = Snapshot.from_edges(1, [TemporalEdge("a", "b", 0), TemporalEdge("b", "a", 0), TemporalEdge("a", "z", 0)])
    ni = compute_node_importance(s, Community("g", 1, {"a", "b"}), "in_group_degree")
    assert dict(ni) == {"a": 2, "b": 2}


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_importance_strictly_positive(seed):
    rng = random.Random(seed)
    s = random_snapshot(rng, 10, 0.3)
    members = rng.sample(sorted(s.nodes), min(len(s.nodes), 4)) if s.nodes else []
    if not members:
        return
    ni = compute_node_importance(s, Community("g", 1, members), "in_group_degree")
    assert set(ni) == set(members)
    assert all(v > 0 for v in ni.values())
