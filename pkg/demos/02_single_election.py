"""One election on one random network, with and without the media prior."""
from surprise_sim.electorate import build_electorate
from surprise_sim.media import MediaSpec, build_prior
from surprise_sim.netgen import BlockProbs, sample_counts
from surprise_sim.perception import evaluate_election

e = build_electorate(5200, 4800)
counts = sample_counts(e, BlockProbs(0.2, 0.18), seed=7)
n1_obs, n2_obs = counts.observed(e)
print("mean friends seen for a1 / a2:", n1_obs.mean(), n2_obs.mean())

for label, media in [
    ("no media", MediaSpec()),
    ("neutral media, c=0.5", MediaSpec("influential", c=0.5)),
    ("media leaning a2, c=0.5", MediaSpec("influential", c=0.5, delta=0.1)),
]:
    out = evaluate_election(e, counts, build_prior(media, e))
    print(f"{label:<26} majority {out.majority_fraction:.4f}  minority {out.minority_fraction:.4f}")
