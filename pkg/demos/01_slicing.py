# %% [markdown]
# # Cutting an interaction log into snapshots
# Every edge carries a timestamp. A slicing policy turns the log into a
# sequence of weighted snapshot graphs.

# %%
import io

from commevo import SlicingPolicy, ingest_edges, slice_edges
from commevo.temporal import format_snapshot_summary

log = io.StringIO(
    "# src dst t [weight]\n"
    + "".join(f"u{t} w{t} {t}\n" for t in range(10))
    + "u1 w1 1.5 2.0\n"
)
edges = ingest_edges(log)
len(edges)

# %% [markdown]
# Disjoint windows of width 5: every edge lands in exactly one snapshot.
# The repeated u1-w1 edge is aggregated into one weighted edge.

# %%
tsn = slice_edges(edges, SlicingPolicy("disjoint", window=5))
print(format_snapshot_summary(tsn))
print(tsn.snapshots[0].edges[("u1", "w1")])  # 1 + 2

# %% [markdown]
# Sliding windows overlap, so an edge can show up in several snapshots.

# %%
sliding = slice_edges(edges, SlicingPolicy("sliding", window=5, step=2))
for s in sliding:
    print(s.index, s.interval, sorted(s.sorted_nodes())[:4], len(s.edges))

# %% [markdown]
# Cumulative snapshots only ever grow.

# %%
cumulative = slice_edges(edges, SlicingPolicy("cumulative", window=5, step=5))
[len(s.edges) for s in cumulative]

# %% [markdown]
# Bad lines are reported together with their line numbers. Lenient mode skips them.

# %%
from commevo.temporal import EdgeParseError

try:
    ingest_edges(io.StringIO("a b 1\na a 2\nc d x\n"))
except EdgeParseError as err:
    for lineno, msg in err.diagnostics:
        print(lineno, msg)

ingest_edges(io.StringIO("a b 1\na a 2\n"), lenient=True)
