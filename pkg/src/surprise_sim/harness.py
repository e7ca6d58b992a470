"""Monte Carlo trials and parameter sweeps.

Seeds form a tree below the sweep's master seed: key 0 draws the sampled
electorate, and ``(1, network_key, trial)`` draws the graph for one trial of
one network configuration.  Grid points that differ only in media
parameters share a network configuration and therefore see the same graphs
(common random numbers); adding, removing or reordering grid points never
changes another point's draws.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import ingest
from .electorate import Electorate, build_electorate
from .media import ABSENT, MediaSpec, build_prior
from .netgen import BACKENDS, EARTH_RADIUS_KM, BlockProbs, default_workers, sample_counts
from .perception import surprised_fractions
from .rng import Seed, stable_key, substream
from .theory import RegimeParams, classify_regime

Population = Union[Electorate, ingest.SampledElectorate]

MEDIA_KEYS = ("regime", "c", "a", "gamma", "delta")
NET_KEYS = ("p", "q", "geo_weight")
AXES = ("c", "a", "gamma", "delta", "p", "q", "geo_weight")

CSV_COLUMNS = [
    "series", "axis_name", "axis_value", "maj_frac", "maj_se", "min_frac",
    "min_se", "trials", "theory_majority", "theory_minority",
]

_POPULATION_KEY = 0
_GRAPH_KEY = 1


@dataclass(frozen=True)
class NetConfig:
    p: float
    q: float
    backend: str = "auto"
    geo: bool = False
    geo_weight: float = 0.1
    geo_radius: float = EARTH_RADIUS_KM
    allow_inverted: bool = False

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.geo and self.backend == "homogeneous":
            raise ValueError("the homogeneous backend cannot apply a geographic kernel")
        BlockProbs(self.p, self.q, self.allow_inverted)

    @property
    def block_probs(self) -> BlockProbs:
        return BlockProbs(self.p, self.q, self.allow_inverted)

    def key(self) -> int:
        geo = (self.geo_weight, self.geo_radius) if self.geo else None
        return stable_key(float(self.p), float(self.q), self.backend, geo)


def trial_seed(master_seed: Seed, net: NetConfig, trial: int):
    """Seed of the graph drawn in ``trial`` for network configuration ``net``."""
    return substream(master_seed, _GRAPH_KEY, net.key(), trial)


def _electorate(pop: Population) -> Electorate:
    return pop.electorate if isinstance(pop, ingest.SampledElectorate) else pop


def sample_graph_counts(pop: Population, net: NetConfig, seed: Seed, workers=None):
    gk = None
    if net.geo:
        if not isinstance(pop, ingest.SampledElectorate):
            raise ValueError("the geographic kernel needs voter positions (an ingest sample)")
        gk = pop.geo_kernel(net.geo_weight, net.geo_radius)
    return sample_counts(_electorate(pop), net.block_probs, seed, gk, net.backend, workers)


def run_trial(
    pop: Population,
    net: NetConfig,
    media: MediaSpec,
    trial_seed: Seed,
    workers: Optional[int] = None,
) -> tuple[float, float]:
    """One graph, one prior: (majority, minority) surprised fractions."""
    e = _electorate(pop)
    prior = build_prior(media, e)
    counts = sample_graph_counts(pop, net, trial_seed, workers)
    return surprised_fractions(e, counts, prior)


@dataclass(frozen=True)
class ElectorateSource:
    """Either fixed class sizes or a sample drawn from region data."""

    n1: Optional[int] = None
    n2: Optional[int] = None
    votes: Optional[str] = None
    coords: Optional[str] = None
    fixture: bool = False
    sample_size: int = 10_000
    a1_column: str = "votes_a1"

    def __post_init__(self):
        counts = self.n1 is not None or self.n2 is not None
        files = self.votes is not None or self.coords is not None
        if sum([counts, files, self.fixture]) != 1:
            raise ValueError("give exactly one of n1/n2, votes/coords, or fixture")
        if counts and (self.n1 is None or self.n2 is None):
            raise ValueError("both n1 and n2 are required")
        if files and (self.votes is None or self.coords is None):
            raise ValueError("both votes and coords files are required")

    def resolve(self, seed: Seed) -> Population:
        if self.n1 is not None:
            return build_electorate(self.n1, self.n2)
        if self.fixture:
            records = ingest.load_fixture(self.a1_column)
        else:
            records = ingest.load_regions(self.votes, self.coords, self.a1_column)
        return ingest.sample_voters(records, self.sample_size, seed)


@dataclass(frozen=True)
class SweepSpec:
    source: ElectorateSource
    net: NetConfig
    media: MediaSpec
    axis: str
    values: Sequence[float]
    series: Sequence[dict] = ({},)
    trials: int = 20
    master_seed: int = 0

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"cannot sweep over {self.axis!r}; choose from {AXES}")
        if len(self.values) == 0:
            raise ValueError("sweep grid is empty")
        if len(self.series) == 0:
            raise ValueError("sweep needs at least one series")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        for s in self.series:
            bad = set(s) - set(MEDIA_KEYS) - set(NET_KEYS) - {"name"}
            if bad:
                raise ValueError(f"unknown series keys: {sorted(bad)}")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "series", tuple(dict(s) for s in self.series))


def series_label(overrides: dict) -> str:
    if "name" in overrides:
        return str(overrides["name"])
    parts = [f"{k}={overrides[k]}" for k in (*MEDIA_KEYS, *NET_KEYS) if k in overrides]
    return ";".join(parts) or "base"


def resolve_point(spec: SweepSpec, overrides: dict, value: float):
    """Media and network configuration at one grid point."""
    params = {k: v for k, v in overrides.items() if k != "name"}
    params[spec.axis] = value
    media_kw = {k: params[k] for k in MEDIA_KEYS if k in params}
    net_kw = {k: float(params[k]) for k in NET_KEYS if k in params}
    media = replace(spec.media, **media_kw)
    return replace(spec.net, **net_kw), media


@dataclass(frozen=True)
class SweepRow:
    series: str
    axis_name: str
    axis_value: float
    maj_frac: float
    maj_se: float
    min_frac: float
    min_se: float
    trials: int
    theory_majority: str
    theory_minority: str
    maj_trials: tuple = field(default=(), compare=False, repr=False)
    min_trials: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class SweepResult:
    rows: tuple

    def series(self, name: str) -> list[SweepRow]:
        return [r for r in self.rows if r.series == name]

    @property
    def series_names(self) -> list[str]:
        return list(dict.fromkeys(r.series for r in self.rows))


def _mean_se(xs: np.ndarray) -> tuple[float, float]:
    mean = float(xs.mean())
    se = float(xs.std(ddof=1) / math.sqrt(len(xs))) if len(xs) > 1 else 0.0
    return mean, se


def population_seed(master_seed: Seed):
    return substream(master_seed, _POPULATION_KEY)


def run_sweep(
    spec: SweepSpec, workers: Optional[int] = None, population: Optional[Population] = None
) -> SweepResult:
    """Run every (series, axis value) point for ``spec.trials`` trials.

    ``population`` overrides the electorate drawn from ``spec.source``.
    """
    if workers is None:
        workers = default_workers()
    pop = population if population is not None else spec.source.resolve(
        population_seed(spec.master_seed)
    )
    e = _electorate(pop)

    points = []
    for s_idx, overrides in enumerate(spec.series):
        label = series_label(overrides)
        for value in sorted(spec.values):
            try:
                net, media = resolve_point(spec, overrides, value)
                prior = build_prior(media, e)
                verdict = classify_regime(RegimeParams.from_model(e, net.p, net.q, media))
            except ValueError as exc:
                raise ValueError(f"series {label!r}, {spec.axis}={value}: {exc}") from exc
            points.append((s_idx, label, value, net, prior, verdict))

    groups: dict[int, list[int]] = {}
    nets = {}
    for idx, (_, _, _, net, _, _) in enumerate(points):
        groups.setdefault(net.key(), []).append(idx)
        nets[net.key()] = net
    tasks = [(key, trial) for key in groups for trial in range(spec.trials)]

    def work(task):
        key, trial = task
        seed = trial_seed(spec.master_seed, nets[key], trial)
        try:
            counts = sample_graph_counts(pop, nets[key], seed, workers=1)
            return [surprised_fractions(e, counts, points[i][4]) for i in groups[key]]
        except Exception as exc:
            first = points[groups[key][0]]
            raise RuntimeError(
                f"trial {trial} failed at series {first[1]!r}, {spec.axis}={first[2]}: {exc}"
            ) from exc

    if workers <= 1:
        outputs = [work(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(work, tasks))

    per_point = {i: [None] * spec.trials for i in range(len(points))}
    for (key, trial), fracs in zip(tasks, outputs):
        for i, f in zip(groups[key], fracs):
            per_point[i][trial] = f

    rows = []
    for i, (_, label, value, _, _, verdict) in enumerate(points):
        arr = np.array(per_point[i], dtype=float)
        maj, maj_se = _mean_se(arr[:, 0])
        mino, min_se = _mean_se(arr[:, 1])
        rows.append(SweepRow(
            label, spec.axis, value, maj, maj_se, mino, min_se, spec.trials,
            verdict.majority_prediction, verdict.minority_prediction,
            tuple(arr[:, 0]), tuple(arr[:, 1]),
        ))
    return SweepResult(tuple(rows))


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def emit_csv(result: SweepResult, path) -> None:
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for r in result.rows:
                w.writerow([
                    r.series, r.axis_name, repr(float(r.axis_value)), _fmt(r.maj_frac),
                    _fmt(r.maj_se), _fmt(r.min_frac), _fmt(r.min_se), r.trials,
                    r.theory_majority, r.theory_minority,
                ])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_csv(path) -> SweepResult:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        for rec in reader:
            rows.append(SweepRow(
                rec["series"], rec["axis_name"], float(rec["axis_value"]),
                float(rec["maj_frac"]), float(rec["maj_se"]), float(rec["min_frac"]),
                float(rec["min_se"]), int(rec["trials"]), rec["theory_majority"],
                rec["theory_minority"],
            ))
    return SweepResult(tuple(rows))


def _load_toml(path):
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _grid(sweep: dict) -> list[float]:
    if "values" in sweep:
        return [float(v) for v in sweep["values"]]
    start, stop, step = (float(sweep[k]) for k in ("start", "stop", "step"))
    count = int(round((stop - start) / step)) + 1
    # round to kill the float drift of start + i*step
    return [round(start + i * step, 12) for i in range(count)]


def spec_from_config(cfg: dict) -> SweepSpec:
    """Build a SweepSpec from the nested tables of a config file."""
    net_cfg = dict(cfg.get("net", {}))
    geo = dict(net_cfg.pop("geo", {}))
    if "p" not in net_cfg or "q" not in net_cfg:
        raise ValueError("config needs net.p and net.q")
    net = NetConfig(
        p=float(net_cfg["p"]), q=float(net_cfg["q"]),
        backend=net_cfg.get("backend", "auto"),
        allow_inverted=bool(net_cfg.get("allow_inverted", False)),
        geo=bool(geo.get("enabled", False)),
        geo_weight=float(geo.get("weight", 0.1)),
        geo_radius=float(geo.get("radius", EARTH_RADIUS_KM)),
    )
    m = dict(cfg.get("media", {}))
    media = MediaSpec(
        regime=m.get("regime", ABSENT), c=float(m.get("c", 0.0)), a=float(m.get("a", 0.0)),
        gamma=None if m.get("gamma") is None else float(m["gamma"]),
        delta=float(m.get("delta", 0.0)),
    )
    if "electorate" in cfg:
        el = cfg["electorate"]
        source = ElectorateSource(n1=int(el["n1"]), n2=int(el["n2"]))
    elif "ingest" in cfg:
        ing = cfg["ingest"]
        source = ElectorateSource(
            votes=ing.get("votes"), coords=ing.get("coords"),
            fixture=bool(ing.get("fixture", False)),
            sample_size=int(ing.get("sample_size", 10_000)),
            a1_column=ing.get("a1_column", "votes_a1"),
        )
    else:
        raise ValueError("config needs an [electorate] or [ingest] table")
    sw = dict(cfg.get("sweep", {}))
    if "axis" not in sw:
        raise ValueError("config needs sweep.axis")
    return SweepSpec(
        source=source, net=net, media=media, axis=sw["axis"], values=_grid(sw),
        series=sw.get("series", [{}]), trials=int(sw.get("trials", 20)),
        master_seed=int(sw.get("seed", 0)),
    )


def load_config(path) -> SweepSpec:
    cfg = _load_toml(path)
    base = Path(path).parent
    ing = cfg.get("ingest")
    if ing:
        # data paths in a config file are relative to the file
        for k in ("votes", "coords"):
            if k in ing and not Path(ing[k]).is_absolute():
                ing[k] = str(base / ing[k])
    return spec_from_config(cfg)
