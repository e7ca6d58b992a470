"""First-experiment sweep with the distance kernel measured in degrees of arc
instead of kilometres (same weight 0.1).  Not an exit criterion: it records how
the trends look when each voter's neighbourhood spans most of the country."""
import math

import numpy as np
import pytest

from surprise_sim.harness import ElectorateSource, NetConfig, SweepSpec, run_sweep
from surprise_sim.media import MediaSpec

DEGREES = 180 / math.pi


@pytest.mark.slow
def test_angular_kernel_trends():
    spec = SweepSpec(
        source=ElectorateSource(fixture=True, sample_size=10_000),
        net=NetConfig(0.1, 0.08, geo=True, geo_radius=DEGREES),
        media=MediaSpec("influential"),
        axis="c",
        values=[round(0.1 * i, 1) for i in range(11)],
        series=[{"delta": -0.1}, {"delta": 0.0}, {"delta": 0.1}],
        trials=20,
        master_seed=0,
    )
    res = run_sweep(spec)
    falling = [r.min_frac for r in res.series("delta=-0.1")]
    assert np.all(np.diff(falling) <= 0)
    assert falling[0] > 0.9 and falling[-1] == 0.0
    assert all(r.min_frac >= 0.9 for r in res.series("delta=0.1"))
    for name in ("delta=-0.1", "delta=0.0"):
        assert all(r.maj_frac <= 0.1 for r in res.series(name))
