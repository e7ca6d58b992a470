"""Directed two-block random graphs, reduced to per-voter neighbour tallies.

Only the number of same-class and other-class voters each voter observes is
kept; the edge set itself is never materialised.  Two samplers are provided:

* ``sample_counts_homogeneous`` draws the two tallies directly as binomials
  (valid when every pair of a given class combination has the same edge
  probability), in O(n) time and memory;
* ``sample_counts_edgewise`` flips one coin per ordered pair, optionally
  damped by a geographic kernel, in O(n^2) time and O(n) memory.

Both split voters into fixed-size blocks, each with its own substream of the
seed, so the output does not depend on the number of worker threads.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .electorate import A1, Electorate
from .rng import Seed, generator

EARTH_RADIUS_KM = 6371.0
HOMOGENEOUS_BLOCK = 4096
EDGEWISE_BLOCK = 128
# largest number of distinct positions for which the pairwise kernel is tabulated
KERNEL_TABLE_MAX = 4096

BACKENDS = ("auto", "homogeneous", "edgewise")


def default_workers() -> int:
    env = os.environ.get("SURPRISE_SIM_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"SURPRISE_SIM_THREADS must be an integer, got {env!r}")
        if value < 1:
            raise ValueError("SURPRISE_SIM_THREADS must be at least 1")
        return value
    return os.cpu_count() or 1


def _map(fn, items, workers):
    if workers is None:
        workers = default_workers()
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class BlockProbs:
    p: float
    q: float
    allow_inverted: bool = False

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} is not a probability")
        if self.p < self.q and not self.allow_inverted:
            raise ValueError(
                f"p={self.p} < q={self.q}: set allow_inverted=True to sample "
                "graphs without a filter bubble"
            )


def validate_coordinates(lat, lon) -> None:
    lat = np.asarray(lat, dtype=float)
    lon = np.asarray(lon, dtype=float)
    if not (np.isfinite(lat).all() and np.isfinite(lon).all()):
        raise ValueError("coordinates must be finite")
    if (np.abs(lat) > 90).any():
        raise ValueError("latitude outside [-90, 90]")
    if (np.abs(lon) > 180).any():
        raise ValueError("longitude outside [-180, 180]")


def haversine(lat1, lon1, lat2, lon2, radius: float = EARTH_RADIUS_KM):
    """Great-circle distance, broadcasting over array arguments."""
    phi1, phi2 = np.radians(lat1), np.radians(lat2)
    dphi = phi2 - phi1
    dlmb = np.radians(lon2) - np.radians(lon1)
    h = np.sin(dphi / 2) ** 2 + np.cos(phi1) * np.cos(phi2) * np.sin(dlmb / 2) ** 2
    return 2 * radius * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))


def pair_distance(a, b, radius: float = EARTH_RADIUS_KM) -> float:
    """Haversine distance between two ``(lat, lon)`` points in degrees."""
    validate_coordinates([a[0], b[0]], [a[1], b[1]])
    return float(haversine(a[0], a[1], b[0], b[1], radius))


@dataclass(frozen=True)
class GeoKernel:
    """Edge damping ``exp(-weight * distance)`` between voter positions.

    ``radius`` sets the distance unit: 6371 gives kilometres, and
    ``180 / pi`` gives degrees of arc.
    """

    lat: np.ndarray = field(repr=False)
    lon: np.ndarray = field(repr=False)
    weight: float = 0.1
    radius: float = EARTH_RADIUS_KM

    def __post_init__(self):
        lat = np.asarray(self.lat, dtype=float)
        lon = np.asarray(self.lon, dtype=float)
        if lat.shape != lon.shape or lat.ndim != 1:
            raise ValueError("lat and lon must be 1-d arrays of equal length")
        validate_coordinates(lat, lon)
        if self.weight < 0:
            raise ValueError("kernel weight must be non-negative")
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "lat", lat)
        object.__setattr__(self, "lon", lon)

    def factor(self, distance):
        return np.exp(-self.weight * np.asarray(distance, dtype=float))

    def pair_factor(self, i: int, j: int) -> float:
        d = haversine(self.lat[i], self.lon[i], self.lat[j], self.lon[j], self.radius)
        return float(self.factor(d))


@dataclass(frozen=True)
class NeighborCounts:
    """Observed same-class and other-class tallies, one entry per voter."""

    n_same: np.ndarray
    n_other: np.ndarray

    def __post_init__(self):
        for name in ("n_same", "n_other"):
            arr = np.asarray(getattr(self, name), dtype=np.int64).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.n_same.shape != self.n_other.shape:
            raise ValueError("tally arrays differ in length")

    def observed(self, e: Electorate) -> tuple[np.ndarray, np.ndarray]:
        """Per-voter (N_i1, N_i2): observed class-1 and class-2 voters."""
        in_h1 = e.sigma == A1
        n1_obs = np.where(in_h1, self.n_same, self.n_other)
        n2_obs = np.where(in_h1, self.n_other, self.n_same)
        return n1_obs, n2_obs

    def __eq__(self, other):
        if not isinstance(other, NeighborCounts):
            return NotImplemented
        return np.array_equal(self.n_same, other.n_same) and np.array_equal(
            self.n_other, other.n_other
        )

    __hash__ = None


def _blocks(n: int, size: int):
    return [(b, b * size, min(n, (b + 1) * size)) for b in range(-(-n // size))]


def sample_counts_homogeneous(
    e: Electorate, bp: BlockProbs, seed: Seed, workers: Optional[int] = None
) -> NeighborCounts:
    in_h1 = e.sigma == A1
    own = np.where(in_h1, e.n1, e.n2).astype(np.int64)
    other = np.where(in_h1, e.n2, e.n1).astype(np.int64)

    def draw(block):
        b, lo, hi = block
        rng = generator(seed, b)
        same = rng.binomial(own[lo:hi] - 1, bp.p)
        cross = rng.binomial(other[lo:hi], bp.q)
        return same, cross

    parts = _map(draw, _blocks(e.n, HOMOGENEOUS_BLOCK), workers)
    return NeighborCounts(
        np.concatenate([s for s, _ in parts]), np.concatenate([c for _, c in parts])
    )


def _kernel_rows(gk: GeoKernel):
    """Return ``rows(lo, hi) -> (hi-lo, n)`` array of distance factors."""
    coords = np.stack([gk.lat, gk.lon], axis=1)
    uniq, inverse = np.unique(coords, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    if len(uniq) <= KERNEL_TABLE_MAX:
        table = gk.factor(
            haversine(
                uniq[:, None, 0], uniq[:, None, 1], uniq[None, :, 0], uniq[None, :, 1],
                gk.radius,
            )
        )
        return lambda lo, hi: table[inverse[lo:hi]][:, inverse]

    def rows(lo, hi):
        d = haversine(
            gk.lat[lo:hi, None], gk.lon[lo:hi, None], gk.lat[None, :], gk.lon[None, :],
            gk.radius,
        )
        return gk.factor(d)

    return rows


def sample_counts_edgewise(
    e: Electorate,
    bp: BlockProbs,
    gk: Optional[GeoKernel] = None,
    seed: Seed = 0,
    workers: Optional[int] = None,
) -> NeighborCounts:
    n = e.n
    if gk is not None and len(gk.lat) != n:
        raise ValueError(f"kernel has {len(gk.lat)} positions for {n} voters")
    sigma = e.sigma
    kernel = _kernel_rows(gk) if gk is not None else None

    def draw(block):
        b, lo, hi = block
        rng = generator(seed, b)
        same = sigma[lo:hi, None] == sigma[None, :]
        prob = np.where(same, bp.p, bp.q)
        if kernel is not None:
            prob = prob * kernel(lo, hi)
        idx = np.arange(hi - lo)
        prob[idx, lo + idx] = 0.0
        edges = rng.random(prob.shape) < prob
        n_same = np.count_nonzero(edges & same, axis=1)
        return n_same, np.count_nonzero(edges, axis=1) - n_same

    parts = _map(draw, _blocks(n, EDGEWISE_BLOCK), workers)
    return NeighborCounts(
        np.concatenate([s for s, _ in parts]), np.concatenate([c for _, c in parts])
    )


def sample_counts(
    e: Electorate,
    bp: BlockProbs,
    seed: Seed,
    gk: Optional[GeoKernel] = None,
    backend: str = "auto",
    workers: Optional[int] = None,
) -> NeighborCounts:
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "homogeneous" and gk is not None:
        raise ValueError("the homogeneous backend cannot apply a geographic kernel")
    if backend == "edgewise" or (backend == "auto" and gk is not None):
        return sample_counts_edgewise(e, bp, gk, seed, workers)
    return sample_counts_homogeneous(e, bp, seed, workers)
