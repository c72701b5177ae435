"""Exact LPCC optimum via branch-and-bound over complementarity disjunctions.

Each node fixes a set Z of y-variables to zero and solves the LP relaxation
under those fixings.  A node whose LP optimum satisfies every complementarity
pair is a candidate incumbent; otherwise the most-violated pair {i, j}
spawns children Z+{i} and Z+{j}.  Best-first order on the node bound makes
the frontier bound monotone, so pruning against the incumbent is safe.
"""
from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass

from .graph import ConflictGraph, maximal_cliques
from .model import (Direction, LpccInstance, Solution, SolutionStatus,
                    VarKey)
from .relax import UnboundedRelaxation, build_lp_relaxation
from . import simplex

COMP_TOL = 1e-8
PRUNE_TOL = 1e-9


@dataclass(order=True)
class BnbNode:
    priority: float
    counter: int
    forced_zero: frozenset[int] = None
    bound: float = 0.0
    depth: int = 0


@dataclass
class BnbStats:
    nodes: int = 0
    incumbent_updates: int = 0
    bound_history: list = None


def _node_lp(artifact, forced_zero):
    model = artifact.model.copy()
    for i in forced_zero:
        name = VarKey("y", index=i).render()
        idx = model.var_index[name]
        model.variables[idx] = (name, 0.0, 0.0)
    return simplex.solve(model)


def _violated_pairs(inst, yvals):
    return [(i, j, yvals[i] * yvals[j]) for (i, j) in inst.edges
            if yvals[i] * yvals[j] > COMP_TOL]


def _extract_xy(inst, assignment):
    x = [assignment[VarKey("x", index=k).render()]
         for k in range(inst.num_x)]
    y = [assignment[VarKey("y", index=j).render()]
         for j in range(inst.num_y)]
    return x, y


def solve_exact(inst: LpccInstance, time_limit: float = 60.0,
                collect_stats: bool = False):
    """Return (v*, incumbent Solution, status) with status PROVED or TIMEOUT."""
    if not inst.is_normalized:
        raise ValueError("instance must be normalized")
    artifact = build_lp_relaxation(inst)
    sign = 1.0 if inst.direction is Direction.MAX else -1.0

    root = _node_lp(artifact, frozenset())
    if root.status is simplex.LpStatus.UNBOUNDED:
        raise UnboundedRelaxation("LP relaxation unbounded")
    if root.status is simplex.LpStatus.INFEASIBLE:
        sol = Solution(SolutionStatus.INFEASIBLE)
        return (None, sol, "PROVED") if not collect_stats else \
            (None, sol, "PROVED", BnbStats(1, 0, []))

    deadline = time.monotonic() + time_limit
    counter = itertools.count()
    stats = BnbStats(0, 0, [])
    incumbent_value = None
    incumbent: Solution | None = None
    # priority = -sign*bound: best-first pops the largest bound when
    # maximizing and the smallest when minimizing
    heap = [BnbNode(-sign * root.value, next(counter), frozenset(),
                    root.value, 0)]
    status = "PROVED"
    lp_cache = {frozenset(): root}

    while heap:
        if time.monotonic() > deadline:
            status = "TIMEOUT"
            break
        node = heapq.heappop(heap)
        stats.nodes += 1
        stats.bound_history.append(node.bound)
        if incumbent_value is not None and \
                sign * node.bound <= sign * incumbent_value + PRUNE_TOL:
            continue
        res = lp_cache.pop(node.forced_zero, None)
        if res is None:
            res = _node_lp(artifact, node.forced_zero)
        if res.status is not simplex.LpStatus.OPTIMAL:
            continue
        if incumbent_value is not None and \
                sign * res.value <= sign * incumbent_value + PRUNE_TOL:
            continue
        x, y = _extract_xy(inst, res.assignment)
        viol = _violated_pairs(inst, y)
        if not viol:
            incumbent_value = res.value
            incumbent = Solution(SolutionStatus.OPTIMAL, res.value,
                                 dict(res.assignment))
            stats.incumbent_updates += 1
            continue
        i, j, _ = max(viol, key=lambda t: (t[2], -t[0], -t[1]))
        for child_fix in (node.forced_zero | {i}, node.forced_zero | {j}):
            child = _node_lp(artifact, child_fix)
            if child.status is not simplex.LpStatus.OPTIMAL:
                continue
            if incumbent_value is not None and \
                    sign * child.value <= sign * incumbent_value + PRUNE_TOL:
                continue
            lp_cache[child_fix] = child
            heapq.heappush(heap, BnbNode(-sign * child.value, next(counter),
                                         child_fix, child.value,
                                         node.depth + 1))

    if incumbent is None:
        # search exhausted with no candidate: the LPCC itself is empty
        # (possible when rows force mass onto conflicting variables);
        # status stays TIMEOUT only if the deadline cut the search short
        incumbent = Solution(SolutionStatus.INFEASIBLE)
    out = (incumbent_value, incumbent, status)
    return out + (stats,) if collect_stats else out


def brute_force_oracle(inst: LpccInstance) -> float | None:
    """Independent v* oracle: every complementarity-feasible point has
    support inside some maximal stable set, so enumerate those patterns."""
    if not inst.is_normalized:
        raise ValueError("instance must be normalized")
    g = ConflictGraph.from_edges(inst.num_y, inst.edges)
    stable_sets, truncated = maximal_cliques(g.complement())
    assert not truncated
    if not stable_sets:
        stable_sets = [tuple(range(inst.num_y))]
    # complement cliques of size 1 are dropped by the enumerator; re-add
    # isolated-in-complement nodes is unnecessary since any single node is
    # contained in some maximal stable set unless n == 1
    artifact = build_lp_relaxation(inst)
    sign = 1.0 if inst.direction is Direction.MAX else -1.0
    best = None
    for pattern in stable_sets:
        outside = frozenset(range(inst.num_y)) - frozenset(pattern)
        res = _node_lp(artifact, outside)
        if res.status is simplex.LpStatus.UNBOUNDED:
            raise UnboundedRelaxation("pattern LP unbounded")
        if res.status is simplex.LpStatus.OPTIMAL:
            if best is None or sign * res.value > sign * best:
                best = res.value
    return best


def harvest_feasible_points(inst: LpccInstance, limit: int = 10):
    """Complementarity-exact feasible points from stable-support LPs.

    Points come from vertex solutions with y fixed to zero outside a maximal
    stable set, so every conflict pair has one endpoint exactly zero.
    """
    g = ConflictGraph.from_edges(inst.num_y, inst.edges)
    stable_sets, _ = maximal_cliques(g.complement())
    if not stable_sets:
        stable_sets = [tuple(range(inst.num_y))]
    artifact = build_lp_relaxation(inst)
    points = []
    for pattern in stable_sets[:limit]:
        outside = frozenset(range(inst.num_y)) - frozenset(pattern)
        res = _node_lp(artifact, outside)
        if res.status is simplex.LpStatus.OPTIMAL:
            x, y = _extract_xy(inst, res.assignment)
            y = [0.0 if j in outside else y[j] for j in range(inst.num_y)]
            points.append((x, y))
    return points


def export_bigM_mip(inst: LpccInstance, path) -> None:
    """Write the reference big-M MIP: binaries z on conflict-incident nodes,
    z_i + z_j <= 1 per edge, y_i <= z_i; unit y-bounds make big-M = 1."""
    if not inst.is_normalized:
        raise ValueError("instance must be normalized")
    artifact = build_lp_relaxation(inst)
    model = artifact.model
    incident = sorted({i for e in inst.edges for i in e})
    znames = []
    for i in incident:
        zname = f"z[{i + 1}]"
        model.add_variable(zname, 0.0, 1.0)
        znames.append(zname)
        model.add_constraint({VarKey("y", index=i).render(): 1.0,
                              zname: -1.0}, "<=", 0.0)
    for (i, j) in inst.edges:
        model.add_constraint({f"z[{i + 1}]": 1.0, f"z[{j + 1}]": 1.0},
                             "<=", 1.0)
    simplex.export_lp_file(model, path, binaries=znames)
