"""Experiment harness: generate -> relax -> cut -> exact solve -> gap table.

Per (config, seed, method) the harness records the relaxation value, the
exact value v*, and the optimality gap |(v_R - v*) / v*| (flagged UNDEFINED
when |v*| <= 1e-9, in which case the absolute difference is reported).
The CSV output contains no wall-clock fields, so re-running with the same
seeds reproduces it byte for byte; timings go to a sidecar JSON log.
"""
from __future__ import annotations

import csv
import json
import os
import time
from dataclasses import dataclass, field
from enum import Enum

from . import cuts as cuts_mod
from . import simplex
from .exact import solve_exact
from .generate import Family, GenSpec, generate
from .graph import approx_min_vertex_cover, feasible_cover_partition
from .model import Direction, LpccInstance, normalize
from .relax import (build_cover_relaxation, build_edge_relaxation,
                    build_lp_relaxation, conflict_graph_of)

GAP_EPS = 1e-9
CHAIN_TOL = 1e-6


class Method(str, Enum):
    LP = "lp"
    ER_EE = "er-ee"
    ER_VC = "er-vc"
    ER_VC_CUTS = "er-vc-cuts"


class InvariantViolation(AssertionError):
    pass


@dataclass
class MethodOutcome:
    value: float | None
    status: str
    cut_counts: dict[str, int] = field(default_factory=dict)
    bqp_rounds: int = 0
    objective_values: list[float] = field(default_factory=list)
    wall_time: float = 0.0


@dataclass
class GapRow:
    config: str
    seed: int
    method: str
    value: float | None
    vstar: float | None
    gap: float | None        # percent; None when undefined
    abs_diff: float | None   # reported when gap is undefined
    exact_status: str
    cuts_static: int
    cuts_bqp: int
    bqp_rounds: int


def default_time_limit() -> float:
    return float(os.environ.get("LPCC_TIME_LIMIT", "60"))


def cover_partition_for(inst: LpccInstance):
    g = conflict_graph_of(inst)
    cover = approx_min_vertex_cover(g)
    return g, feasible_cover_partition(g, cover)


def method_pipeline(inst: LpccInstance, method: Method,
                    static_cuts: bool = True) -> MethodOutcome:
    """Build and solve one relaxation method on a normalized instance."""
    t0 = time.perf_counter()
    if method is Method.LP:
        res = simplex.solve(build_lp_relaxation(inst).model)
        return MethodOutcome(res.value, res.status.value,
                             wall_time=time.perf_counter() - t0)
    if method is Method.ER_EE:
        res = simplex.solve(build_edge_relaxation(inst).model)
        return MethodOutcome(res.value, res.status.value,
                             wall_time=time.perf_counter() - t0)

    g, partition = cover_partition_for(inst)
    artifact = build_cover_relaxation(inst, partition)
    if method is Method.ER_VC:
        res = simplex.solve(artifact.model)
        return MethodOutcome(res.value, res.status.value,
                             wall_time=time.perf_counter() - t0)

    assert method is Method.ER_VC_CUTS
    counts = {}
    session = simplex.IncrementalLp(artifact.model)
    if static_cuts:
        # separate from the static pool lazily: only violated members join
        # the model, which keeps the row count near the base relaxation
        # while converging to the value of the fully augmented model
        pool = cuts_mod.stable_set_cuts(g, partition) + \
            cuts_mod.clique_q_cuts(g, partition)
        dedupe: set = set()
        static_run = cuts_mod.iterate_static_separation(artifact, pool,
                                                        dedupe,
                                                        session=session)
        counts["static_pool"] = len(pool)
        counts["static_added"] = static_run.added
    run = cuts_mod.iterate_bqp_separation(artifact, partition, inst.num_y,
                                          session=session)
    counts["bqp"] = sum(run.cuts_per_round)
    out = MethodOutcome(run.result.value, run.result.status.value,
                        cut_counts=counts, bqp_rounds=run.rounds,
                        objective_values=list(run.objective_values),
                        wall_time=time.perf_counter() - t0)
    _check_bqp_contract(inst.direction, run)
    return out


def _check_bqp_contract(direction: Direction, run) -> None:
    if run.rounds > cuts_mod.MAX_ROUNDS:
        raise InvariantViolation("BQP loop exceeded the round bound")
    vals = run.objective_values
    sign = 1.0 if direction is Direction.MAX else -1.0
    for a, b in zip(vals, vals[1:]):
        if sign * b > sign * a + 1e-6 * max(1.0, abs(a)):
            raise InvariantViolation("BQP objective moved the wrong way")


def compute_gap(value: float | None, vstar: float | None):
    """(gap_percent, abs_diff); gap is None when undefined."""
    if value is None or vstar is None:
        return None, None
    if abs(vstar) <= GAP_EPS:
        return None, abs(value - vstar)
    return abs((value - vstar) / vstar) * 100.0, None


@dataclass
class ExperimentResult:
    rows: list[GapRow]
    means: dict[tuple[str, str], float]  # (config, method) -> mean gap %
    violations: list[str]
    timings: list[dict]


def run_experiment(configs: list[GenSpec], seeds: list[int],
                   methods: list[Method], csv_path=None, md_path=None,
                   time_limit: float | None = None) -> ExperimentResult:
    """One row per (config, seed, method); means per (config, method)."""
    if time_limit is None:
        time_limit = default_time_limit()
    rows: list[GapRow] = []
    violations: list[str] = []
    timings: list[dict] = []

    for config in configs:
        for seed in seeds:
            spec = GenSpec(config.family, config.size, config.rho, seed)
            inst = normalize(generate(spec))
            t0 = time.perf_counter()
            vstar, _, exact_status = solve_exact(inst, time_limit=time_limit)
            exact_time = time.perf_counter() - t0

            outcomes: dict[Method, MethodOutcome] = {}
            for method in methods:
                outcomes[method] = method_pipeline(inst, method)

            sign = 1.0 if inst.direction is Direction.MAX else -1.0
            label = spec.label()
            for method in methods:
                out = outcomes[method]
                gap, diff = compute_gap(out.value, vstar)
                if exact_status != "PROVED":
                    gap, diff = None, None
                static = out.cut_counts.get("static_added", 0)
                rows.append(GapRow(label, seed, method.value, out.value,
                                   vstar, gap, diff, exact_status, static,
                                   out.cut_counts.get("bqp", 0),
                                   out.bqp_rounds))
                timings.append({"config": label, "seed": seed,
                                "method": method.value,
                                "seconds": out.wall_time,
                                "exact_seconds": exact_time})
                if vstar is not None and out.value is not None and \
                        exact_status == "PROVED" and \
                        sign * out.value < sign * vstar - CHAIN_TOL:
                    violations.append(
                        f"{label} seed {seed} {method.value}: relaxation "
                        f"value {out.value} on wrong side of v*={vstar}")
            # cuts only tighten
            if Method.ER_VC in outcomes and Method.ER_VC_CUTS in outcomes:
                a = outcomes[Method.ER_VC].value
                b = outcomes[Method.ER_VC_CUTS].value
                if a is not None and b is not None and \
                        sign * b > sign * a + CHAIN_TOL:
                    violations.append(
                        f"{label} seed {seed}: cuts loosened the relaxation")

    means: dict[tuple[str, str], float] = {}
    for config in configs:
        label = config.label()
        for method in methods:
            gaps = [r.gap for r in rows
                    if r.config == label and r.method == method.value
                    and r.gap is not None]
            if gaps:
                means[(label, method.value)] = sum(gaps) / len(gaps)

    if csv_path:
        write_csv(rows, csv_path)
        with open(str(csv_path) + ".timing.json", "w") as fh:
            json.dump(timings, fh, indent=1)
    if md_path:
        write_markdown(configs, methods, means, md_path)
    return ExperimentResult(rows, means, violations, timings)


def _cell(v) -> str:
    return "" if v is None else repr(v)


def write_csv(rows: list[GapRow], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["config", "seed", "method", "value", "vstar",
                    "gap_percent", "abs_diff", "exact_status",
                    "cuts_static", "cuts_bqp", "bqp_rounds"])
        for r in rows:
            w.writerow([r.config, r.seed, r.method, _cell(r.value),
                        _cell(r.vstar), _cell(r.gap), _cell(r.abs_diff),
                        r.exact_status, r.cuts_static, r.cuts_bqp,
                        r.bqp_rounds])


def write_markdown(configs, methods, means, path) -> None:
    lines = ["| config | " + " | ".join(m.value for m in methods) + " |",
             "|" + "---|" * (len(methods) + 1)]
    for config in configs:
        label = config.label()
        cells = []
        for m in methods:
            g = means.get((label, m.value))
            cells.append(f"{g:.2f}" if g is not None else "-")
        lines.append(f"| {label} | " + " | ".join(cells) + " |")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


# preset configurations at desk scale; the paper-size tables sit behind
# the --large flag of the CLI
PRESETS: dict[str, list[GenSpec]] = {
    "tpesc": [GenSpec(Family.TPESC, (5, 6), rho) for rho in (0.2, 0.4)],
    "cmkpc": [GenSpec(Family.CMKPC, (20, 5), rho)
              for rho in (0.05, 0.35, 0.6)],
    "one_reg": [GenSpec(Family.ONE_REG, (6, 10, 10), 0.0)],
}
PRESETS_LARGE: dict[str, list[GenSpec]] = {
    "tpesc": [GenSpec(Family.TPESC, (10, 10), rho)
              for rho in (0.2, 0.4, 0.6)],
    "cmkpc": [GenSpec(Family.CMKPC, (20, 5), rho)
              for rho in (0.05, 0.1, 0.35, 0.6)] +
             [GenSpec(Family.CMKPC, (60, 4), rho) for rho in (0.05, 0.1)],
    "one_reg": [GenSpec(Family.ONE_REG, (6, 10, 10), 0.0),
                GenSpec(Family.ONE_REG, (20, 10, 5), 0.0)],
}
