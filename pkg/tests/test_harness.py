import csv
import textwrap

import numpy as np
import pytest

from surprise_sim.electorate import build_electorate
from surprise_sim.harness import (
    CSV_COLUMNS, ElectorateSource, NetConfig, SweepResult, SweepRow, SweepSpec, emit_csv,
    load_config, read_csv, run_sweep, run_trial, trial_seed,
)
from surprise_sim.media import MediaSpec
from surprise_sim.theory import NEAR_CRITICAL, SURPRISED, UNSURPRISED


def small_spec(**kw):
    base = dict(
        source=ElectorateSource(n1=520, n2=480),
        net=NetConfig(0.1, 0.09),
        media=MediaSpec("influential"),
        axis="c",
        values=[0.0, 0.01, 0.02, 0.05],
        series=[{"delta": 0.0}, {"delta": 0.05}],
        trials=6,
        master_seed=11,
    )
    base.update(kw)
    return SweepSpec(**base)


def test_trial_examples(brexit_like):
    window = run_trial(brexit_like, NetConfig(0.2, 0.18), MediaSpec("influential", c=0.5), 3)
    assert window[0] == 0.0 and window[1] < 0.01
    assert run_trial(brexit_like, NetConfig(0.3, 0.1), MediaSpec(), 3) == (0.0, 1.0)
    tie = run_trial(build_electorate(1, 1), NetConfig(0.0, 0.0), MediaSpec(), 0)
    assert tie == (1.0, 0.0)


def test_single_point_sweep_equals_trial():
    spec = small_spec(values=[0.02], series=[{"delta": 0.0}], trials=1)
    row = run_sweep(spec).rows[0]
    e = build_electorate(520, 480)
    direct = run_trial(e, spec.net, MediaSpec("influential", c=0.02), trial_seed(11, spec.net, 0))
    assert (row.maj_frac, row.min_frac) == direct
    assert row.maj_se == row.min_se == 0.0


def test_rows_ordered_and_valid():
    res = run_sweep(small_spec())
    assert [r.series for r in res.rows] == ["delta=0.0"] * 4 + ["delta=0.05"] * 4
    assert [r.axis_value for r in res.rows[:4]] == [0.0, 0.01, 0.02, 0.05]
    for r in res.rows:
        assert 0 <= r.maj_frac <= 1 and 0 <= r.min_frac <= 1
        assert r.maj_se >= 0 and r.min_se >= 0 and r.trials == 6
        assert len(r.maj_trials) == 6


def test_reordering_grid_changes_nothing():
    a = run_sweep(small_spec())
    b = run_sweep(small_spec(values=[0.05, 0.0, 0.02, 0.01], series=[{"delta": 0.05}, {"delta": 0.0}]))
    assert sorted(a.rows, key=lambda r: (r.series, r.axis_value)) == \
        sorted(b.rows, key=lambda r: (r.series, r.axis_value))
    c = run_sweep(small_spec(values=[0.02]))
    assert c.series("delta=0.0")[0] == a.series("delta=0.0")[2]


def test_net_axis_sweep():
    res = run_sweep(small_spec(axis="p", values=[0.09, 0.2, 0.4], series=[{"c": 0.0}]))
    fr = [r.min_frac for r in res.rows]
    assert fr[-1] >= fr[0]


def test_csv_identical_across_workers(tmp_path):
    paths = []
    for w in (1, 4, 8):
        path = tmp_path / f"w{w}.csv"
        emit_csv(run_sweep(small_spec(), workers=w), path)
        paths.append(path.read_bytes())
    assert paths[0] == paths[1] == paths[2]


def test_csv_format_and_round_trip(tmp_path):
    row = SweepRow("s", "c", 0.1, 1 / 3, 0.0125, 1.0, 0.0, 20, UNSURPRISED, NEAR_CRITICAL)
    path = tmp_path / "out.csv"
    emit_csv(SweepResult((row,)), path)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1] == "s,c,0.1,0.333333,0.012500,1.000000,0.000000,20,unsurprised-whp,near-critical"
    assert len(lines) == 2
    back = read_csv(path)
    assert back.rows[0].maj_frac == pytest.approx(1 / 3, abs=5e-7)
    emit_csv(back, tmp_path / "again.csv")
    assert (tmp_path / "again.csv").read_bytes() == path.read_bytes()


def test_csv_round_trip_of_sweep(tmp_path):
    res = run_sweep(small_spec())
    emit_csv(res, tmp_path / "a.csv")
    back = read_csv(tmp_path / "a.csv")
    for r, b in zip(res.rows, back.rows):
        assert (r.series, r.axis_name, r.axis_value, r.trials) == (b.series, b.axis_name, b.axis_value, b.trials)
        assert (r.theory_majority, r.theory_minority) == (b.theory_majority, b.theory_minority)
        for f in ("maj_frac", "maj_se", "min_frac", "min_se"):
            assert getattr(b, f) == pytest.approx(getattr(r, f), abs=5e-7)


def test_unwritable_csv(tmp_path):
    with pytest.raises(OSError, match="cannot write"):
        emit_csv(SweepResult(()), tmp_path / "missing" / "x.csv")


def test_invalid_point_identified():
    spec = small_spec(values=[0.0, 0.0001], series=[{"delta": 0.3}])
    with pytest.raises(ValueError, match=r"delta=0\.3.*c=0\.0001"):
        run_sweep(spec)


@pytest.mark.parametrize("kw", [
    {"values": []}, {"trials": 0}, {"axis": "n"}, {"series": [{"bogus": 1}]}, {"series": []},
])
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        small_spec(**kw)


def test_source_validation():
    with pytest.raises(ValueError):
        ElectorateSource(n1=5)
    with pytest.raises(ValueError):
        ElectorateSource(n1=5, n2=5, fixture=True)
    with pytest.raises(ValueError):
        NetConfig(0.3, 0.1, backend="homogeneous", geo=True)


def test_geo_needs_positions():
    spec = small_spec(net=NetConfig(0.1, 0.09, geo=True))
    with pytest.raises(RuntimeError, match="positions"):
        run_sweep(spec)


def test_theory_agreement_away_from_threshold():
    # geo off, n = 10^4: wherever the verdict is not near-critical, every trial is 0 or 1
    spec = SweepSpec(
        source=ElectorateSource(n1=5200, n2=4800), net=NetConfig(0.3, 0.1),
        media=MediaSpec("influential"), axis="c", values=[0.0, 0.01, 0.05, 0.2, 1.0],
        series=[{"delta": -0.1}, {"delta": 0.0}, {"delta": 0.1}], trials=5, master_seed=5,
    )
    decided = 0
    for row in run_sweep(spec).rows:
        for label, trials in ((row.theory_majority, row.maj_trials),
                              (row.theory_minority, row.min_trials)):
            if label == UNSURPRISED:
                assert set(trials) == {0.0}
                decided += 1
            elif label == SURPRISED:
                assert set(trials) == {1.0}
                decided += 1
    assert decided >= 10


def test_fig2_style_sweep():
    spec = SweepSpec(
        source=ElectorateSource(n1=5334, n2=4666), net=NetConfig(0.15, 0.1),
        media=MediaSpec("uninfluential", gamma=0.5), axis="a",
        values=[0.0, 0.5, 1.0, 2.0], series=[{"delta": -0.1}, {"delta": 0.0}, {"delta": 0.1}],
        trials=4, master_seed=2,
    )
    for row in run_sweep(spec).rows:
        assert row.maj_frac == 0.0 and row.min_frac >= 0.999


def test_load_config(tmp_path):
    (tmp_path / "v.csv").write_text("region_id,votes_a1,votes_a2\nA,600,400\n")
    (tmp_path / "c.csv").write_text("region_id,lat,lon\nA,51.5,-0.1\n")
    cfg = tmp_path / "sweep.toml"
    cfg.write_text(textwrap.dedent("""
        [ingest]
        votes = "v.csv"
        coords = "c.csv"
        sample_size = 200

        [net]
        p = 0.3
        q = 0.2
        backend = "auto"
        geo.enabled = true
        geo.weight = 0.1

        [media]
        regime = "influential"
        delta = 0.0

        [sweep]
        axis = "c"
        start = 0.0
        stop = 0.3
        step = 0.1
        trials = 3
        seed = 9

        [[sweep.series]]
        delta = -0.1

        [[sweep.series]]
        delta = 0.1
        name = "against"
    """))
    spec = load_config(cfg)
    assert spec.values == (0.0, 0.1, 0.2, 0.3)
    assert spec.net.geo and spec.net.geo_weight == 0.1
    assert spec.source.votes == str(tmp_path / "v.csv")
    res = run_sweep(spec)
    assert res.series_names == ["delta=-0.1", "against"]
