"""Analytic verdicts across electorate sizes.

For a fixed margin and community structure, walk n upward and watch each class
leave the near-critical window once its expected vote gap outgrows (n-1)^(3/4).
"""
import numpy as np

from surprise_sim.theory import (
    MAJORITY, MINORITY, RegimeParams, classify_regime, corollary_range,
    exact_expectation, surprise_probability,
)

eps, p, q = 0.02, 0.2, 0.18

rp = RegimeParams(n=10_000, epsilon=eps, p=p, q=q, regime="influential", c=0.5)
print("weights c that keep both classes unsurprised:", corollary_range(rp))

#%% sweep the electorate size
print(f"{'n':>12} {'E[maj]':>12} {'E[min]':>12} {'(n-1)^.75':>11}  majority / minority")
for n in np.logspace(3, 8, 6).astype(int):
    rp = RegimeParams(n=int(n), epsilon=eps, p=p, q=q, regime="influential", c=0.5)
    v = classify_regime(rp)
    print(f"{n:>12d} {exact_expectation(rp, MAJORITY):>12.1f} "
          f"{exact_expectation(rp, MINORITY):>12.1f} {(n - 1) ** 0.75:>11.1f}  "
          f"{v.majority_prediction} / {v.minority_prediction}")

#%% exact per-voter surprise probability at n = 10^4
# the window label is conservative; the exact rate tells how rare surprise is
n1, n2 = 5200, 4800
shift = (0.5 * 10_000) * 2 * eps  # alpha - beta = t * 2(eps - delta)
for cls in (MAJORITY, MINORITY):
    print(cls, f"{surprise_probability(n1, n2, p, q, shift, cls):.3e}")
