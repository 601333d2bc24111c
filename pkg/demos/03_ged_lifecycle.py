# %% [markdown]
# # Tracking one group's life with GED
# An eight-frame fixture: a group forms, grows, splits in two, one half
# shrinks, a newcomer appears, all three merge, and the merged group vanishes.

# %%
from pathlib import Path

from commevo import SlicingPolicy, import_groupings, ingest_edges, slice_edges
from commevo.chains import build_lineage, export_chain_table, extract_chains
from commevo.events import format_events
from commevo.ged import GedParams, inclusion, run_ged

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
tsn = slice_edges(ingest_edges(DATA / "lifecycle_edges.txt"), SlicingPolicy("disjoint", 1.0, origin=0.0))
groupings = import_groupings(DATA / "lifecycle_groups.txt", tsn)
[len(g) for g in groupings]

# %% [markdown]
# The inclusion of one group in another weighs the shared fraction by how
# important the shared members are.

# %%
g1 = set("abcdef")
g2 = set("abcd")
print(inclusion(g1, g2))  # (4/6) ** 2 with uniform importance
print(inclusion(g1, g2, quantity_only=True))  # plain member fraction
print(inclusion(g1, g2, {"a": 5, "b": 1, "c": 1, "d": 1, "e": 1, "f": 1}))

# %%
events = run_ged(groupings, tsn, GedParams(alpha=0.5, beta=0.5))
print(format_events(events))

# %% [markdown]
# Chains follow arcs from a community's first appearance to its last. A split
# forks the chain and a merge lets several chains run into one group.

# %%
chains = extract_chains(build_lineage(events, groupings))
print(export_chain_table(chains, tsn.m))

# %% [markdown]
# Raising the thresholds turns the unequal halves of the split into weaker matches.

# %%
strict = run_ged(groupings, tsn, GedParams(alpha=0.9, beta=0.9))
sorted({e.type.short for e in strict})
