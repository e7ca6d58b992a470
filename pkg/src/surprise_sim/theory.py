"""Closed-form predictions for the homogeneous (no geography) model.

For a voter i write Y_i = N_i2 - N_i1 and let ``shift = alpha - beta``.
Voter i is surprised exactly when

    majority (i in H1):  X_i = Y_i - (shift + 1) >= 0
    minority (i in H2):  X_i = Y_i - (shift - 1) >= 0

Hoeffding's inequality with deviation (n-1)**0.75 makes each voter's outcome
certain up to exp(-2 sqrt(n-1)) once |E[X_i]| clears that deviation.  Points
closer to the threshold are labelled ``near-critical``; simulation, or the
exact convolution in ``surprise_probability``, is the arbiter there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

from .electorate import Electorate
from .media import ABSENT, INFLUENTIAL, UNINFLUENTIAL, MediaSpec

MAJORITY = "majority"
MINORITY = "minority"

UNSURPRISED = "unsurprised-whp"
SURPRISED = "surprised-whp"
NEAR_CRITICAL = "near-critical"


@dataclass(frozen=True)
class RegimeParams:
    n: int
    epsilon: float
    p: float
    q: float
    regime: str = INFLUENTIAL
    c: float = 0.0
    a: float = 0.0
    gamma: Optional[float] = None
    delta: float = 0.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("theory needs at least two voters")
        if self.regime not in (INFLUENTIAL, UNINFLUENTIAL, ABSENT):
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.regime == UNINFLUENTIAL and self.gamma is None:
            raise ValueError("uninfluential regime needs gamma")

    @classmethod
    def from_model(cls, e: Electorate, p: float, q: float, media: MediaSpec):
        return cls(
            n=e.n, epsilon=e.epsilon, p=p, q=q, regime=media.regime,
            c=media.c, a=media.a, gamma=media.gamma, delta=media.delta,
        )

    @property
    def n1(self) -> float:
        return self.n * (0.5 + self.epsilon)

    @property
    def n2(self) -> float:
        return self.n * (0.5 - self.epsilon)

    @property
    def weight(self) -> float:
        """Prior mass per voter, (alpha + beta) / n."""
        if self.regime == INFLUENTIAL:
            return self.c
        if self.regime == UNINFLUENTIAL:
            return self.a * self.n ** (self.gamma - 1.0)
        return 0.0

    @property
    def shift(self) -> float:
        """alpha - beta."""
        return 2.0 * self.weight * self.n * (self.epsilon - self.delta)

    @property
    def bias_term(self) -> float:
        # 4c(eps - delta), with c replaced by a n^(gamma-1) when uninfluential
        return 4.0 * self.weight * (self.epsilon - self.delta)


def majority_threshold(rp: RegimeParams) -> float:
    """Critical p for the majority: above it they are unsurprised."""
    e = rp.epsilon
    return (rp.q * (1 - 2 * e) - rp.bias_term) / (1 + 2 * e)


def minority_threshold(rp: RegimeParams) -> float:
    """Critical p for the minority: below it they are unsurprised."""
    e = rp.epsilon
    return (rp.q * (1 + 2 * e) + rp.bias_term) / (1 - 2 * e)


def corollary_range(rp: RegimeParams) -> Optional[tuple[float, float]]:
    """Open interval of p for which every voter is unsurprised, or None."""
    lo, hi = majority_threshold(rp), minority_threshold(rp)
    return (lo, hi) if lo < hi else None


def exact_expectation(rp: RegimeParams, cls: str) -> float:
    """E[X_i] at finite n, including the self-exclusion correction."""
    p, q = rp.p, rp.q
    if cls == MAJORITY:
        return rp.n2 * q - (rp.n1 - 1) * p - (rp.shift + 1)
    if cls == MINORITY:
        return (rp.n2 - 1) * p - rp.n1 * q - (rp.shift - 1)
    raise ValueError(f"class must be {MAJORITY!r} or {MINORITY!r}")


def deviation_scale(n: int) -> float:
    return (n - 1) ** 0.75


def per_voter_bound(n: int) -> float:
    return math.exp(-2.0 * math.sqrt(n - 1))


@dataclass(frozen=True)
class ProbabilityBounds:
    per_voter: float
    majority_unsurprised: float
    majority_surprised: float
    minority_unsurprised: float
    minority_surprised: float
    minority_surprised_tight: float
    all_voters_unsurprised: float


def probability_bounds(rp: RegimeParams) -> ProbabilityBounds:
    """Union-bound floors on the probability that a whole class shares one
    outcome.  Values below zero are vacuous and reported as is.

    ``minority_surprised`` uses the majority-sized coefficient (1 + 2 eps) n
    for both classes; ``minority_surprised_tight`` uses twice the minority's
    own size, (1 - 2 eps) n.
    """
    b = per_voter_bound(rp.n)
    n, e = rp.n, rp.epsilon
    return ProbabilityBounds(
        per_voter=b,
        majority_unsurprised=1 - (0.5 + e) * n * b,
        majority_surprised=1 - (1 + 2 * e) * n * b,
        minority_unsurprised=1 - (0.5 - e) * n * b,
        minority_surprised=1 - (1 + 2 * e) * n * b,
        minority_surprised_tight=1 - (1 - 2 * e) * n * b,
        all_voters_unsurprised=1 - n * b,
    )


def _label(expectation: float, n: int) -> str:
    if abs(expectation) < deviation_scale(n):
        return NEAR_CRITICAL
    return SURPRISED if expectation > 0 else UNSURPRISED


@dataclass(frozen=True)
class TheoryVerdict:
    majority_threshold: float
    minority_threshold: float
    majority_prediction: str
    minority_prediction: str
    all_unsurprised_range: Optional[tuple[float, float]]
    per_voter_bound: float
    union_bound_majority: float
    union_bound_minority: float
    union_bound_minority_tight: float
    exact_expectation_majority: float
    exact_expectation_minority: float
    deviation_scale: float

    def as_row(self) -> dict:
        lo, hi = self.all_unsurprised_range or (float("nan"), float("nan"))
        return {
            "majority_threshold": self.majority_threshold,
            "minority_threshold": self.minority_threshold,
            "majority_prediction": self.majority_prediction,
            "minority_prediction": self.minority_prediction,
            "range_lo": lo,
            "range_hi": hi,
            "per_voter_bound": self.per_voter_bound,
            "union_bound_majority": self.union_bound_majority,
            "union_bound_minority": self.union_bound_minority,
            "union_bound_minority_tight": self.union_bound_minority_tight,
            "exact_expectation_majority": self.exact_expectation_majority,
            "exact_expectation_minority": self.exact_expectation_minority,
            "deviation_scale": self.deviation_scale,
        }


def classify_regime(rp: RegimeParams) -> TheoryVerdict:
    ex_maj = exact_expectation(rp, MAJORITY)
    ex_min = exact_expectation(rp, MINORITY)
    bounds = probability_bounds(rp)
    # the union bound that applies depends on which side of zero E[X_i] is
    maj_bound = bounds.majority_surprised if ex_maj > 0 else bounds.majority_unsurprised
    if ex_min > 0:
        min_bound, min_tight = bounds.minority_surprised, bounds.minority_surprised_tight
    else:
        min_bound = min_tight = bounds.minority_unsurprised
    return TheoryVerdict(
        majority_threshold=majority_threshold(rp),
        minority_threshold=minority_threshold(rp),
        majority_prediction=_label(ex_maj, rp.n),
        minority_prediction=_label(ex_min, rp.n),
        all_unsurprised_range=corollary_range(rp),
        per_voter_bound=bounds.per_voter,
        union_bound_majority=maj_bound,
        union_bound_minority=min_bound,
        union_bound_minority_tight=min_tight,
        exact_expectation_majority=ex_maj,
        exact_expectation_minority=ex_min,
        deviation_scale=deviation_scale(rp.n),
    )


def surprise_probability(
    n1: int, n2: int, p: float, q: float, shift: float, cls: str
) -> float:
    """Exact per-voter probability of surprise in the homogeneous model,
    by convolving the two binomial tallies.  Assumes class 1 wins (n1 > n2).
    """
    # Y = N_i2 - N_i1, split into the tally that raises Y and the one that lowers it
    if cls == MAJORITY:
        pos, neg, thresh = (n2, q), (n1 - 1, p), shift + 1
    elif cls == MINORITY:
        pos, neg, thresh = (n2 - 1, p), (n1, q), shift - 1
    else:
        raise ValueError(f"class must be {MAJORITY!r} or {MINORITY!r}")
    k = np.arange(pos[0] + 1)
    pmf = stats.binom.pmf(k, pos[0], pos[1])
    # Y >= thresh  <=>  N_neg <= k - thresh
    cdf = stats.binom.cdf(np.floor(k - thresh), neg[0], neg[1])
    return float(np.sum(pmf * cdf))
