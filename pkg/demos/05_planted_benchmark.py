# %% [markdown]
# # Planted events and recovery scores
# A script plants group events frame by frame. The generator samples edges
# inside groups with p_in and between groups with p_out, and records the
# events a perfect matcher should report.

# %%
from commevo.asur import run_asur
from commevo.bench import SEVEN_EVENTS_SCRIPT, generate_scenario, score_recovery
from commevo.communities import detect_all
from commevo.ged import run_ged

print(SEVEN_EVENTS_SCRIPT)

# %% [markdown]
# Clean plant: full cliques, no noise, true groupings handed straight to the matchers.

# %%
clean = generate_scenario(SEVEN_EVENTS_SCRIPT, p_in=1.0, p_out=0.0, seed=7)
report = score_recovery(clean.expected_for("ged"), run_ged(clean.truth_groupings, clean.tsn))
print(report.format())

asur = score_recovery(clean.expected_for("asur"), run_asur(clean.truth_groupings))
asur.exact_match

# %% [markdown]
# Noisy plant with detected communities. Detected ids are renamed to the
# planted group they overlap most before scoring.

# %%
noisy = generate_scenario(SEVEN_EVENTS_SCRIPT, p_in=0.6, p_out=0.01, seed=7)
found = detect_all(noisy.tsn, "lpa", seed=1)
observed = run_ged(found, noisy.tsn)
print(score_recovery(noisy.expected_for("ged"), observed, noisy.truth_groupings, found).format())

# %% [markdown]
# Same on the command line:
#
#     commevo bench --seed 7 --out bench
#     commevo track --input bench/edges.txt --origin 0 --detector import --groups bench/groups.txt --out run
#     commevo score --expected bench/expected_events.tsv --observed run/events.tsv --out score
