# %% [markdown]
# # Communities per snapshot
# Two detectors ship with the package: seeded label propagation (disjoint
# groups) and clique percolation (overlapping groups). Groupings can also be
# imported from a file.

# %%
from itertools import combinations

from commevo.communities import (
    compute_node_importance,
    detect_clique_percolation,
    detect_label_propagation,
    format_groupings,
)
from commevo.temporal import Snapshot, TemporalEdge


def clique(nodes):
    return [TemporalEdge(u, v, 0.0) for u, v in combinations(nodes, 2)]


# two 4-cliques that share the pair c-d, plus a loose triangle
edges = clique("abcd") + clique("cdef") + clique("xyz") + [TemporalEdge("f", "x", 0.0)]
snap = Snapshot.from_edges(1, edges)

# %%
lpa = detect_label_propagation(snap, seed=0)
for c in lpa:
    print(c.id, sorted(c.members))

# %% [markdown]
# Label propagation is deterministic for a fixed seed.

# %%
assert format_groupings([lpa]) == format_groupings([detect_label_propagation(snap, seed=0)])

# %% [markdown]
# With k = 4 the two 4-cliques share only two nodes, fewer than k - 1, so they stay
# separate communities that overlap on c and d.

# %%
cpm = detect_clique_percolation(snap, k=4)
print(cpm.overlapping, [sorted(c.members) for c in cpm])

# with k = 3 the triangles chain through c-d and everything in the two cliques percolates
[sorted(c.members) for c in detect_clique_percolation(snap, k=3)]

# %% [markdown]
# Node importance inside a community: uniform, or one plus the number of
# neighbours that belong to the same community.

# %%
first = cpm.communities[0]
dict(compute_node_importance(snap, first, "in_group_degree"))
