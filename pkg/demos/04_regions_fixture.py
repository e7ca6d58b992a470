"""Load the bundled regional data, sample voters, and rebuild the fixture.

The bundled regions are synthetic but carry the real national totals, so the
sampled margin matches a 51.9 / 48.1 split.
"""
import sys
import tempfile
from pathlib import Path

import numpy as np

from surprise_sim.ingest import (
    fixture_paths, load_fixture, load_regions, region_summary, sample_voters,
    synthetic_regions, write_regions,
)
from surprise_sim.netgen import haversine

records = load_fixture()
print(region_summary(records))

sample = sample_voters(records, 10_000, seed=0)
e = sample.electorate
print(f"sample n1={e.n1} n2={e.n2} epsilon={e.epsilon:.4f}")
print("regions represented:", np.unique(sample.source_region).size)

#%% distance kernel over the sample
# mean kernel factor over random voter pairs, km vs degrees of arc
rng = np.random.default_rng(1)
i, j = rng.integers(0, e.n, size=(2, 5000))
for label, radius in [("km", 6371.0), ("degrees", 180 / np.pi)]:
    gk = sample.geo_kernel(weight=0.1, radius=radius)
    d = haversine(sample.lat[i], sample.lon[i], sample.lat[j], sample.lon[j], radius)
    print(f"mean pair factor ({label}): {gk.factor(d).mean():.4f}")

#%% regenerate and compare with what ships in the package
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
votes, coords = out / "votes.csv", out / "coords.csv"
write_regions(synthetic_regions(), votes, coords)
same = all(a.read_bytes() == b.read_bytes() for a, b in zip((votes, coords), fixture_paths()))
print("regenerated fixture identical to bundled copy:", same)
print("reload ok:", len(load_regions(votes, coords)) == len(records))
