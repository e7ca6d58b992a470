"""Region-level vote tallies joined with region coordinates, and
sub-electorates sampled from the pooled ballots.

File formats (UTF-8, comma separated, ``.`` decimals)::

    votes:  region_id,votes_a1,votes_a2
    coords: region_id,lat,lon
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .electorate import A1, Electorate
from .netgen import EARTH_RADIUS_KM, GeoKernel
from .rng import Seed, generator

VOTES_HEADER = ["region_id", "votes_a1", "votes_a2"]
COORDS_HEADER = ["region_id", "lat", "lon"]


class IngestError(ValueError):
    pass


@dataclass(frozen=True)
class RegionRecord:
    region_id: str
    votes_a1: int
    votes_a2: int
    lat: float
    lon: float

    @property
    def total(self) -> int:
        return self.votes_a1 + self.votes_a2


def _read_rows(path, header, parse):
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"{path}: {exc.strerror or exc}") from exc
    out = {}
    with fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None or [h.strip() for h in first] != header:
            raise IngestError(f"{path}: expected header {','.join(header)}")
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise IngestError(f"{path}:{line}: expected {len(header)} fields, got {len(row)}")
            key = row[0].strip()
            if not key:
                raise IngestError(f"{path}:{line}: empty region_id")
            if key in out:
                raise IngestError(f"{path}:{line}: duplicate region_id {key!r}")
            try:
                out[key] = parse(row[1].strip(), row[2].strip())
            except ValueError as exc:
                raise IngestError(f"{path}:{line}: {exc}") from None
    return out


def _parse_votes(a, b):
    v1, v2 = int(a), int(b)
    if v1 < 0 or v2 < 0:
        raise ValueError("vote counts must be non-negative")
    if v1 + v2 < 1:
        raise ValueError("region has no votes")
    return v1, v2


def _parse_coords(a, b):
    lat, lon = float(a), float(b)
    if not (np.isfinite(lat) and abs(lat) <= 90):
        raise ValueError(f"latitude {a} out of range")
    if not (np.isfinite(lon) and abs(lon) <= 180):
        raise ValueError(f"longitude {b} out of range")
    return lat, lon


def load_regions(votes_path, coords_path, a1_column: str = "votes_a1") -> list[RegionRecord]:
    """Join the two files on region_id, keeping the order of the votes file.

    ``a1_column`` names the column treated as candidate a1; pass
    ``"votes_a2"`` to swap the two options.
    """
    if a1_column not in ("votes_a1", "votes_a2"):
        raise ValueError(f"a1_column must be votes_a1 or votes_a2, not {a1_column!r}")
    votes = _read_rows(votes_path, VOTES_HEADER, _parse_votes)
    coords = _read_rows(coords_path, COORDS_HEADER, _parse_coords)
    missing = [rid for rid in votes if rid not in coords]
    if missing:
        raise IngestError(f"no coordinates for region(s): {', '.join(missing)}")
    if not votes:
        raise IngestError(f"{votes_path}: no regions")
    swap = a1_column == "votes_a2"
    records = []
    for rid, (v1, v2) in votes.items():
        if swap:
            v1, v2 = v2, v1
        lat, lon = coords[rid]
        records.append(RegionRecord(rid, v1, v2, lat, lon))
    return records


@dataclass(frozen=True)
class SampledElectorate:
    electorate: Electorate
    lat: np.ndarray = field(repr=False)
    lon: np.ndarray = field(repr=False)
    source_region: np.ndarray = field(repr=False)

    def geo_kernel(self, weight: float = 0.1, radius: float = EARTH_RADIUS_KM) -> GeoKernel:
        return GeoKernel(self.lat, self.lon, weight=weight, radius=radius)


def sample_voters(records: Sequence[RegionRecord], k: int, seed: Seed) -> SampledElectorate:
    """Draw ``k`` ballots without replacement from all regions' pooled ballots.

    Only the (region, option) cell counts are drawn, as one multivariate
    hypergeometric sample.  Voters are then laid out class 1 first, each
    class in region order, and placed at their region's coordinates.
    """
    cells = np.array([[r.votes_a1, r.votes_a2] for r in records], dtype=np.int64)
    total = int(cells.sum())
    if not 1 <= k <= total:
        raise ValueError(f"sample size {k} not in [1, {total}]")
    rng = generator(seed)
    drawn = rng.multivariate_hypergeometric(cells.ravel(), k, method="marginals")
    drawn = drawn.reshape(cells.shape)
    regions = np.arange(len(records))
    src = np.concatenate([np.repeat(regions, drawn[:, 0]), np.repeat(regions, drawn[:, 1])])
    lat = np.array([r.lat for r in records])[src]
    lon = np.array([r.lon for r in records])[src]
    ids = np.array([r.region_id for r in records], dtype=object)[src]
    e = Electorate(int(drawn[:, 0].sum()), int(drawn[:, 1].sum()))
    assert (e.sigma[: e.n1] == A1).all()
    return SampledElectorate(e, lat, lon, ids)


def write_regions(records: Sequence[RegionRecord], votes_path, coords_path) -> None:
    with open(votes_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(VOTES_HEADER)
        for r in records:
            w.writerow([r.region_id, r.votes_a1, r.votes_a2])
    with open(coords_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COORDS_HEADER)
        for r in records:
            w.writerow([r.region_id, f"{r.lat:.4f}", f"{r.lon:.4f}"])


def synthetic_regions(
    n_regions: int = 382,
    total_a1: int = 17_410_742,
    total_a2: int = 16_141_241,
    seed: int = 2016,
) -> list[RegionRecord]:
    """Made-up referendum-like dataset: regions scattered over a box the
    size of Great Britain, log-normal electorates, and an a1 share that
    drifts with position.  National totals are hit exactly.
    """
    rng = np.random.default_rng(seed)
    lat = rng.uniform(50.2, 57.8, n_regions)
    lon = rng.uniform(-5.5, 1.6, n_regions)
    size = rng.lognormal(mean=0.0, sigma=0.45, size=n_regions)
    # south-east and the far north lean a2
    lean = 0.55 - 0.03 * (lon + 2.0) - 0.04 * np.clip(lat - 55.0, 0, None)
    share = np.clip(lean + rng.normal(0, 0.07, n_regions), 0.2, 0.8)
    total = total_a1 + total_a2
    votes = _apportion(size / size.sum() * total, total)
    a1 = _apportion(votes * share / np.sum(votes * share) * total_a1, total_a1)
    a1 = np.minimum(a1, votes)
    # minimum() can only shed votes, so put the deficit back where room exists
    deficit = total_a1 - int(a1.sum())
    room = votes - a1
    for i in np.argsort(-room):
        if deficit == 0:
            break
        add = min(deficit, int(room[i]))
        a1[i] += add
        deficit -= add
    return [
        RegionRecord(f"R{i:03d}", int(a1[i]), int(votes[i] - a1[i]),
                     round(float(lat[i]), 4), round(float(lon[i]), 4))
        for i in range(n_regions)
    ]


def _apportion(weights: np.ndarray, total: int) -> np.ndarray:
    """Integers proportional to ``weights`` summing to ``total`` (largest remainder)."""
    floor = np.floor(weights).astype(np.int64)
    rest = total - int(floor.sum())
    order = np.argsort(-(weights - floor), kind="stable")
    floor[order[:rest]] += 1
    return floor


def fixture_paths() -> tuple[Path, Path]:
    """Paths of the bundled synthetic 382-region dataset (votes, coords)."""
    base = resources.files("surprise_sim") / "data"
    return Path(str(base / "synthetic_votes.csv")), Path(str(base / "synthetic_coords.csv"))


def load_fixture(a1_column: str = "votes_a1") -> list[RegionRecord]:
    votes, coords = fixture_paths()
    return load_regions(votes, coords, a1_column)


def region_summary(records: Sequence[RegionRecord]) -> dict:
    a1 = sum(r.votes_a1 for r in records)
    a2 = sum(r.votes_a2 for r in records)
    return {"regions": len(records), "votes_a1": a1, "votes_a2": a2,
            "share_a1": a1 / (a1 + a2)}
