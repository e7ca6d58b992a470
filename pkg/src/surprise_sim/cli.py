"""Command line entry point: ``surprise-sim {simulate,sweep,theory,ingest-check}``."""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import replace

from . import harness, ingest
from .electorate import build_electorate
from .media import MediaSpec, REGIMES
from .netgen import EARTH_RADIUS_KM
from .rng import substream
from .theory import RegimeParams, classify_regime


def _media_args(p):
    p.add_argument("--regime", choices=REGIMES, default="absent")
    p.add_argument("--c", type=float, default=0.0, help="influential global weight")
    p.add_argument("--a", type=float, default=0.0, help="uninfluential global weight")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--delta", type=float, default=0.0, help="media bias toward a2")


def _media(ns) -> MediaSpec:
    return MediaSpec(regime=ns.regime, c=ns.c, a=ns.a, gamma=ns.gamma, delta=ns.delta)


def _population_args(p):
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--votes", help="votes CSV (region_id,votes_a1,votes_a2)")
    p.add_argument("--coords", help="coords CSV (region_id,lat,lon)")
    p.add_argument("--fixture", action="store_true", help="use the bundled synthetic regions")
    p.add_argument("--a1-column", default="votes_a1", choices=["votes_a1", "votes_a2"])
    p.add_argument("--sample-size", type=int, default=10_000)


def _source(ns) -> harness.ElectorateSource:
    return harness.ElectorateSource(
        n1=ns.n1, n2=ns.n2, votes=ns.votes, coords=ns.coords, fixture=ns.fixture,
        sample_size=ns.sample_size, a1_column=ns.a1_column,
    )


def cmd_simulate(ns) -> int:
    net = harness.NetConfig(
        p=ns.p, q=ns.q, backend=ns.backend, geo=ns.geo, geo_weight=ns.geo_weight,
        geo_radius=ns.geo_radius, allow_inverted=ns.allow_inverted,
    )
    media = _media(ns)
    pop = _source(ns).resolve(substream(ns.seed, 0))
    e = pop.electorate if isinstance(pop, ingest.SampledElectorate) else pop
    maj, mino = harness.run_trial(pop, net, media, substream(ns.seed, 1), ns.threads)
    verdict = classify_regime(RegimeParams.from_model(e, net.p, net.q, media))
    print(f"electorate        n1={e.n1} n2={e.n2} epsilon={e.epsilon:.6f}")
    print(f"majority surprised {maj:.6f}  (theory: {verdict.majority_prediction})")
    print(f"minority surprised {mino:.6f}  (theory: {verdict.minority_prediction})")
    return 0


def cmd_sweep(ns) -> int:
    spec = harness.load_config(ns.config)
    if ns.seed is not None:
        spec = replace(spec, master_seed=ns.seed)
    result = harness.run_sweep(spec, workers=ns.threads)
    harness.emit_csv(result, ns.out)
    print(f"wrote {len(result.rows)} rows to {ns.out}")
    return 0


def cmd_theory(ns) -> int:
    if ns.n1 is not None and ns.n2 is not None:
        e = build_electorate(ns.n1, ns.n2)
        n, eps = e.n, e.epsilon
    elif ns.n is not None and ns.epsilon is not None:
        n, eps = ns.n, ns.epsilon
    else:
        raise ValueError("give --n1/--n2 or --n/--epsilon")
    rp = RegimeParams(n=n, epsilon=eps, p=ns.p, q=ns.q, regime=ns.regime, c=ns.c,
                      a=ns.a, gamma=ns.gamma, delta=ns.delta)
    row = classify_regime(rp).as_row()
    width = max(map(len, row))
    for k, v in row.items():
        shown = f"{v:.6g}" if isinstance(v, float) else v
        print(f"{k:<{width}}  {shown}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(row.keys())
    w.writerow([repr(v) if isinstance(v, float) else v for v in row.values()])
    print()
    print(buf.getvalue(), end="")
    return 0


def cmd_ingest_check(ns) -> int:
    records = ingest.load_regions(ns.votes, ns.coords, ns.a1_column)
    s = ingest.region_summary(records)
    print(f"regions   {s['regions']}")
    print(f"votes_a1  {s['votes_a1']}")
    print(f"votes_a2  {s['votes_a2']}")
    print(f"share_a1  {s['share_a1']:.6f}")
    if ns.sample_size:
        sample = ingest.sample_voters(records, ns.sample_size, ns.seed)
        e = sample.electorate
        print(f"sample    n1={e.n1} n2={e.n2} epsilon={e.epsilon:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="surprise-sim", description=__doc__)
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $SURPRISE_SIM_THREADS or all cores)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a single trial")
    _population_args(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--backend", choices=["auto", "homogeneous", "edgewise"], default="auto")
    p.add_argument("--geo", action="store_true", help="apply the distance kernel")
    p.add_argument("--geo-weight", type=float, default=0.1)
    p.add_argument("--geo-radius", type=float, default=EARTH_RADIUS_KM)
    p.add_argument("--allow-inverted", action="store_true", help="permit p < q")
    p.add_argument("--seed", type=int, default=0)
    _media_args(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a parameter sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None, help="override sweep.seed")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("theory", help="analytic verdict for a parameter point")
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    _media_args(p)
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("ingest-check", help="validate region data files")
    p.add_argument("--votes", required=True)
    p.add_argument("--coords", required=True)
    p.add_argument("--a1-column", default="votes_a1", choices=["votes_a1", "votes_a2"])
    p.add_argument("--sample-size", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_ingest_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except (ValueError, OSError) as exc:
        print(f"surprise-sim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
