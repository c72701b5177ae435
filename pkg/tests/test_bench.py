"""Benchmark harness: gap math, invariants, deterministic outputs."""
import json

import pytest

from lpcc_relax.bench import (GapRow, Method, PRESETS, compute_gap,
                              method_pipeline, run_experiment, write_csv,
                              write_markdown)
from lpcc_relax.generate import Family, GenSpec
from lpcc_relax.model import normalize

from conftest import c5_instance


def test_compute_gap():
    gap, diff = compute_gap(110.0, 100.0)
    assert gap == pytest.approx(10.0) and diff is None
    gap, diff = compute_gap(90.0, -100.0)
    assert gap == pytest.approx(190.0)
    # undefined when v* is (numerically) zero: fall back to the difference
    gap, diff = compute_gap(0.25, 0.0)
    assert gap is None and diff == pytest.approx(0.25)
    assert compute_gap(None, 1.0) == (None, None)
    assert compute_gap(1.0, None) == (None, None)


def test_method_pipeline_on_c5():
    inst = normalize(c5_instance())
    lp = method_pipeline(inst, Method.LP)
    ee = method_pipeline(inst, Method.ER_EE)
    vc = method_pipeline(inst, Method.ER_VC)
    wc = method_pipeline(inst, Method.ER_VC_CUTS)
    assert lp.value == pytest.approx(5.0)
    assert ee.value == pytest.approx(2.5, abs=1e-7)
    assert vc.value == pytest.approx(2.5, abs=1e-7)
    # the static odd-cycle cut closes the gap completely on C5
    assert wc.value == pytest.approx(2.0, abs=1e-6)
    assert wc.cut_counts["static_added"] >= 1
    assert wc.bqp_rounds >= 1


def test_run_experiment_small(tmp_path):
    configs = [GenSpec(Family.CMKPC, (8, 3), 0.3)]
    seeds = [0, 1, 2]
    methods = [Method.LP, Method.ER_VC, Method.ER_VC_CUTS]
    csv_path = tmp_path / "gaps.csv"
    md_path = tmp_path / "gaps.md"
    result = run_experiment(configs, seeds, methods, csv_path=csv_path,
                            md_path=md_path, time_limit=30.0)
    assert result.violations == []
    assert len(result.rows) == len(seeds) * len(methods)
    label = configs[0].label()
    for m in methods:
        assert (label, m.value) in result.means
        assert result.means[(label, m.value)] >= -1e-12
    # cuts never lose to the plain cover relaxation
    assert result.means[(label, "er-vc-cuts")] <= \
        result.means[(label, "er-vc")] + 1e-9
    # sidecar timing log exists and matches the row count
    timing = json.loads((tmp_path / "gaps.csv.timing.json").read_text())
    assert len(timing) == len(result.rows)
    assert all(t["seconds"] >= 0.0 for t in timing)
    table = md_path.read_text()
    assert label in table and table.startswith("| config |")


def test_csv_byte_determinism(tmp_path):
    configs = [GenSpec(Family.ONE_REG, (3, 4, 4), 0.0)]
    seeds = [0, 1]
    methods = [Method.LP, Method.ER_EE, Method.ER_VC]
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    run_experiment(configs, seeds, methods, csv_path=p1, time_limit=30.0)
    run_experiment(configs, seeds, methods, csv_path=p2, time_limit=30.0)
    assert p1.read_bytes() == p2.read_bytes()


def test_write_csv_format(tmp_path):
    rows = [GapRow("cfg", 0, "lp", 1.25, 1.0, 25.0, None, "PROVED", 2, 3, 1),
            GapRow("cfg", 1, "lp", None, None, None, None, "TIMEOUT", 0, 0, 0)]
    path = tmp_path / "out.csv"
    write_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("config,seed,method,value,vstar,gap_percent")
    assert lines[1] == "cfg,0,lp,1.25,1.0,25.0,,PROVED,2,3,1"
    assert lines[2] == "cfg,1,lp,,,,,TIMEOUT,0,0,0"


def test_write_markdown_placeholder_for_missing_mean(tmp_path):
    configs = [GenSpec(Family.CMKPC, (5, 2), 0.2)]
    path = tmp_path / "t.md"
    write_markdown(configs, [Method.LP, Method.ER_VC],
                   {(configs[0].label(), "lp"): 12.345}, path)
    body = path.read_text()
    row = body.splitlines()[-1]
    assert row.endswith("| 12.35 | - |")


def test_presets_cover_all_families():
    assert set(PRESETS) == {"tpesc", "cmkpc", "one_reg"}
    for fam, specs in PRESETS.items():
        assert specs
        assert all(s.family.value == fam for s in specs)
