"""Each voter's MAP estimate of the a1 vote share and the winner it implies.

All functions broadcast over numpy arrays of counts and classes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .electorate import A1, A2, Electorate
from .media import MediaPrior
from .netgen import NeighborCounts


def map_estimate(prior: MediaPrior, i_class, n1_obs, n2_obs):
    """Posterior mode of the a1 share under a Beta(alpha, beta) prior:

        (alpha + N_i1 + [i in H1] - 1) / (alpha + beta + N_i - 1)

    The voter counts themselves as one observed class member.
    """
    own = np.asarray(i_class) == A1
    n1_obs = np.asarray(n1_obs)
    n2_obs = np.asarray(n2_obs)
    num = prior.alpha + n1_obs + own - 1.0
    den = prior.alpha + prior.beta + n1_obs + n2_obs - 1.0
    if np.any(den <= 0):
        raise ValueError("MAP estimate undefined: alpha + beta + N_i - 1 <= 0")
    out = num / den
    return float(out) if np.ndim(out) == 0 else out


def predict(prior: MediaPrior, i_class, n1_obs, n2_obs):
    """A1 where the MAP estimate is strictly above 1/2, else A2."""
    q1 = map_estimate(prior, i_class, n1_obs, n2_obs)
    out = np.where(np.asarray(q1) > 0.5, A1, A2)
    return int(out) if out.ndim == 0 else out


def predict_linear(prior: MediaPrior, i_class, n1_obs, n2_obs):
    """Division-free form of ``predict``:
    a1 iff alpha + 2[i in H1] - beta > N_i2 + 1 - N_i1."""
    own = np.asarray(i_class) == A1
    lhs = prior.alpha + 2.0 * own - prior.beta
    rhs = np.asarray(n2_obs) + 1 - np.asarray(n1_obs)
    out = np.where(lhs > rhs, A1, A2)
    return int(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ElectionOutcome:
    q1_hat: np.ndarray
    z: np.ndarray
    surprised: np.ndarray
    majority_fraction: float
    minority_fraction: float

    @property
    def fractions(self) -> tuple[float, float]:
        return self.majority_fraction, self.minority_fraction


def surprised_fractions(e: Electorate, counts: NeighborCounts, prior: MediaPrior):
    """(majority, minority) surprised fractions without the per-voter arrays."""
    n1_obs, n2_obs = counts.observed(e)
    surprised = predict_linear(prior, e.sigma, n1_obs, n2_obs) != e.winner
    return _class_fractions(e, surprised)


def _class_fractions(e: Electorate, surprised: np.ndarray) -> tuple[float, float]:
    out = []
    for cls in (e.majority_class, e.minority_class):
        size = e.class_size(cls)
        # an empty class has nobody to surprise
        out.append(float(surprised[e.sigma == cls].sum()) / size if size else 0.0)
    return out[0], out[1]


def evaluate_election(
    e: Electorate, counts: NeighborCounts, prior: MediaPrior
) -> ElectionOutcome:
    if len(counts.n_same) != e.n:
        raise ValueError("neighbour counts were generated for another electorate")
    n1_obs, n2_obs = counts.observed(e)
    q1 = np.asarray(map_estimate(prior, e.sigma, n1_obs, n2_obs), dtype=float)
    z = np.asarray(predict_linear(prior, e.sigma, n1_obs, n2_obs))
    surprised = z != e.winner
    maj, mino = _class_fractions(e, surprised)
    return ElectionOutcome(q1, z, surprised, maj, mino)
