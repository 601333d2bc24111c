# %% [markdown]
# # Two other matchers
# Asur et al. define events as set predicates with a joint-overlap threshold
# kappa. Palla et al. run clique percolation on the union of two consecutive
# snapshots and pair communities that sit in the same joint group.

# %%
from commevo.asur import AsurParams, asur_merge_test, run_asur
from commevo.communities import detect_clique_percolation, make_grouping
from commevo.palla import PallaParams, joint_graph, relative_overlap, run_palla
from commevo.temporal import Snapshot, TemporalEdge

print(asur_merge_test({1, 2, 3}, {4, 5, 6}, {1, 2, 3, 4, 5}, kappa=0.5))
print(asur_merge_test({1, 2, 3}, {4, 5, 6}, {1, 2, 4}, kappa=0.5))

# %%
before = make_grouping(1, [{1, 2, 3}, {4, 5, 6}, {7, 8, 9}])
after = make_grouping(2, [{1, 2, 3, 4, 5}, {7, 8, 9}, {20, 21, 22}])
for ev in run_asur([before, after], AsurParams(kappa=0.5)):
    print(ev.type.value, ev.sources, ev.targets)

# %% [markdown]
# Palla: a 5-clique and a 4-clique in one frame become a single 9-clique in
# the next. Communities are found with k = 4 on both frames.

# %%
from itertools import combinations


def cliques(index, *groups):
    return Snapshot.from_edges(
        index, [TemporalEdge(f"v{u}", f"v{v}", float(index)) for g in groups for u, v in combinations(g, 2)]
    )


s1 = cliques(1, range(1, 6), range(6, 10))
s2 = cliques(2, range(1, 10))
q = joint_graph(s1, s2)
print(len(q.nodes), len(q.undirected_edges()))

g1 = detect_clique_percolation(s1, k=4, min_size=4)
g2 = detect_clique_percolation(s2, k=4, min_size=4)
for ev in run_palla(s1, s2, g1, g2, PallaParams(k=4)):
    print(ev.type.value, ev.sources, ev.targets, round(ev.measures[0], 3))

# %%
relative_overlap("abc", "bcd")
