from __future__ import annotations

from itertools import combinations
from pathlib import Path

import pytest

from commevo import SlicingPolicy, import_groupings, ingest_edges, slice_edges
from commevo.temporal import Snapshot, TemporalEdge

DATA = Path(__file__).parent / "data"

# criterion number -> (description, passed, detail); filled by test_acceptance
ACCEPTANCE_RESULTS: dict = {}


def clique_edges(nodes, t=0.0):
    return [TemporalEdge(f"v{u}", f"v{v}", t) for u, v in combinations(nodes, 2)]


def clique_snapshot(index, *cliques, extra=()):
    edges = [e for c in cliques for e in clique_edges(c, float(index))]
    edges += [TemporalEdge(f"v{u}", f"v{v}", float(index)) for u, v in extra]
    return Snapshot.from_edges(index, edges)


def brute_force_cpm(nodes, edge_set, k):
    """Every k-subset that is a clique; adjacent when sharing k-1 nodes; components."""
    adj = {n: set() for n in nodes}
    for u, v in edge_set:
        adj[u].add(v)
        adj[v].add(u)
    cliques = [
        frozenset(c)
        for c in combinations(sorted(nodes), k)
        if all(b in adj[a] for a, b in combinations(c, 2))
    ]
    parent = list(range(len(cliques)))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i, j in combinations(range(len(cliques)), 2):
        if len(cliques[i] & cliques[j]) == k - 1:
            parent[find(j)] = find(i)
    comps = {}
    for i, c in enumerate(cliques):
        comps.setdefault(find(i), set()).update(c)
    return sorted(sorted(c) for c in comps.values())


@pytest.fixture
def lifecycle_paths():
    return DATA / "lifecycle_edges.txt", DATA / "lifecycle_groups.txt"


@pytest.fixture
def lifecycle(lifecycle_paths):
    edges_path, groups_path = lifecycle_paths
    tsn = slice_edges(ingest_edges(edges_path), SlicingPolicy("disjoint", 1.0, origin=0.0))
    return tsn, import_groupings(groups_path, tsn)


def pytest_runtest_logreport(report):
    # a criterion whose inner assertion fails before it records itself still gets a FAIL line
    name = report.nodeid.rsplit("::", 1)[-1]
    if report.when == "call" and report.failed and name.startswith("test_criterion_"):
        num = int(name.split("_")[2])
        if num not in ACCEPTANCE_RESULTS or ACCEPTANCE_RESULTS[num][1]:
            desc = " ".join(name.split("_")[3:])
            ACCEPTANCE_RESULTS[num] = (desc, False, str(report.longrepr.reprcrash.message) if hasattr(report.longrepr, "reprcrash") else "")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        desc, passed, detail = ACCEPTANCE_RESULTS[num]
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] criterion {num}: {desc}" + (f" ({detail})" if detail else ""))
