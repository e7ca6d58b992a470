import itertools

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from surprise_sim.electorate import A1, A2, Electorate, build_electorate
from surprise_sim.media import MediaPrior, UNIFORM, prior_from_influence
from surprise_sim.netgen import BlockProbs, NeighborCounts, sample_counts_homogeneous
from surprise_sim.perception import (
    evaluate_election, map_estimate, predict, predict_linear, surprised_fractions,
)


def test_map_estimate_examples():
    assert map_estimate(UNIFORM, A2, 0, 0) == 0.0
    assert map_estimate(MediaPrior(52, 48), A1, 30, 20) == pytest.approx(82 / 149)
    assert 82 / 149 == pytest.approx(0.55034, abs=1e-5)


@pytest.mark.parametrize("alpha", [1.0, 2.5, 40.0])
@pytest.mark.parametrize("k", [0, 1, 7, 60])
def test_symmetric_minority_voter_below_half(alpha, k):
    prior = MediaPrior(alpha, alpha)
    assert map_estimate(prior, A2, k, k) < 0.5
    assert predict(prior, A2, k, k) == A2
    assert predict_linear(prior, A2, k, k) == A2


def test_predict_examples():
    assert predict(MediaPrior(52, 48), A1, 30, 20) == A1
    # exact 1/2 goes to a2
    assert map_estimate(MediaPrior(2, 2), A2, 1, 0) == 0.5
    assert predict(MediaPrior(2, 2), A2, 1, 0) == A2


def test_predict_linear_examples():
    assert predict_linear(MediaPrior(3, 3), A1, 5, 3) == A1
    # boundary: lhs = rhs
    assert predict_linear(MediaPrior(4, 3), A2, 0, 0) == A2
    assert predict_linear(MediaPrior(4.5, 3), A2, 0, 0) == A1


def test_vectorised_matches_scalar():
    cls = np.array([1, 2, 1, 2])
    n1 = np.array([3, 0, 9, 4])
    n2 = np.array([1, 5, 2, 4])
    prior = MediaPrior(3.0, 2.0)
    vec = predict(prior, cls, n1, n2)
    assert vec.tolist() == [predict(prior, *args) for args in zip(cls, n1, n2)]


def test_equivalence_small_grid():
    priors = [MediaPrior(a, b) for a, b in itertools.product([1, 1.5, 2, 3, 7.25], repeat=2)]
    n = np.arange(31)
    n1, n2 = np.meshgrid(n, n)
    for prior in priors:
        for cls in (A1, A2):
            assert (predict(prior, cls, n1, n2) == predict_linear(prior, cls, n1, n2)).all()


@given(
    alpha=st.floats(1, 500), beta=st.floats(1, 500),
    cls=st.sampled_from([A1, A2]), n1=st.integers(0, 200), n2=st.integers(0, 200),
)
def test_monotone_in_evidence(alpha, beta, cls, n1, n2):
    prior = MediaPrior(alpha, beta)
    z = predict_linear(prior, cls, n1, n2)
    if z == A1:
        assert predict_linear(prior, cls, n1 + 1, n2) == A1
    else:
        assert predict_linear(prior, cls, n1, n2 + 1) == A2


@given(
    t=st.floats(10, 1e5), eps=st.floats(0, 0.2), d1=st.floats(-0.2, 0.4), d2=st.floats(-0.2, 0.4),
    cls=st.sampled_from([A1, A2]), n1=st.integers(0, 500), n2=st.integers(0, 500),
)
def test_monotone_in_bias(t, eps, d1, d2, cls, n1, n2):
    assume(d1 < d2 and abs(eps - d1) <= 0.4 and abs(eps - d2) <= 0.4)
    lo = prior_from_influence(t, eps, d1)
    hi = prior_from_influence(t, eps, d2)
    if predict_linear(lo, cls, n1, n2) == A2:
        assert predict_linear(hi, cls, n1, n2) == A2


@given(alpha=st.floats(1, 1e6), beta=st.floats(1, 1e6), cls=st.sampled_from([A1, A2]),
       n1=st.integers(0, 10**6), n2=st.integers(0, 10**6))
def test_estimate_is_a_probability(alpha, beta, cls, n1, n2):
    q = map_estimate(MediaPrior(alpha, beta), cls, n1, n2)
    assert 0.0 <= q <= 1.0


def test_evaluate_all_correct():
    e = build_electorate(3, 2)
    counts = NeighborCounts([2, 2, 2, 0, 0], [0, 0, 0, 3, 3])
    out = evaluate_election(e, counts, UNIFORM)
    assert out.fractions == (0.0, 0.0)
    assert out.z.tolist() == [A1] * 5


def test_evaluate_tie_electorate():
    e = build_electorate(1, 1)
    out = evaluate_election(e, NeighborCounts([0, 0], [0, 0]), UNIFORM)
    assert out.q1_hat.tolist() == [1.0, 0.0]
    assert out.fractions == (1.0, 0.0)


def test_heavy_prior_overrides_counts():
    e = build_electorate(60, 40)
    counts = sample_counts_homogeneous(e, BlockProbs(1.0, 0.0), 0)
    # alpha - beta > n beats any possible right-hand side
    prior = prior_from_influence(1000.0, e.epsilon, -0.2)
    assert prior.shift > e.n
    out = evaluate_election(e, counts, prior)
    assert (out.z == A1).all() and out.minority_fraction == 0.0


def test_absent_media_filter_bubble(brexit_like):
    for seed in range(3):
        counts = sample_counts_homogeneous(brexit_like, BlockProbs(0.3, 0.1), seed)
        assert surprised_fractions(brexit_like, counts, UNIFORM) == (0.0, 1.0)


def test_fractions_invariant_under_relabelling():
    rng = np.random.default_rng(3)
    e = build_electorate(70, 50)
    counts = sample_counts_homogeneous(e, BlockProbs(0.2, 0.15), 11)
    prior = MediaPrior(3.0, 2.0)
    perm = rng.permutation(e.n)
    e2 = Electorate(70, 50, sigma=e.sigma[perm])
    c2 = NeighborCounts(counts.n_same[perm], counts.n_other[perm])
    assert surprised_fractions(e, counts, prior) == surprised_fractions(e2, c2, prior)
    assert evaluate_election(e, counts, prior).fractions == surprised_fractions(e, counts, prior)


def test_counts_must_match_electorate():
    with pytest.raises(ValueError):
        evaluate_election(build_electorate(2, 2), NeighborCounts([0], [0]), UNIFORM)
