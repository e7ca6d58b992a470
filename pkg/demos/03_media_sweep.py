"""Sweep the global media weight over the regional sample and write a CSV.

Runs the config next to this file.  Expect ~40 s on one core.
"""
import sys
from pathlib import Path

from surprise_sim.harness import emit_csv, load_config, run_sweep

here = Path(__file__).parent
spec = load_config(here / "sweep_c.toml")
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("sweep_c.csv")

result = run_sweep(spec)
emit_csv(result, out)
for name in result.series_names:
    rows = result.series(name)
    print(name)
    for r in rows:
        print(f"  c={r.axis_value:<4} maj {r.maj_frac:.3f}±{r.maj_se:.3f}  "
              f"min {r.min_frac:.3f}±{r.min_se:.3f}")
print("wrote", out)
