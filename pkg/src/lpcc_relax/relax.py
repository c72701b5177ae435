"""Builders for the three linear relaxations of an LPCC.

* plain LP relaxation (complementarity dropped),
* edge-by-edge extended relaxation (one disjunction block per conflict edge),
* vertex-cover-based extended relaxation (one block per partition group).

Each disjunction block encodes conv((P cap {y(T)=0}) union (P cap
{y(delta(T))=0})) in an extended space: duplicated row systems scaled by the
convex multiplier q, split variables that re-sum to (x, y), and the
structural zero-fixings that carry the disjunction.  The re-sum equalities
and the zero-fixed variables are eliminated by exact substitution at build
time (the projected polytope is unchanged); the ambient dimension formula
is still asserted against the full key space, and artifacts know how to
expand a column assignment back to all ambient variables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .graph import ConflictGraph, CoverPartition, singleton_partition
from .model import (Direction, LinearModel, LpccInstance, Sense, VarKey)
from . import simplex


class InfeasiblePartition(ValueError):
    """Raised when a cover partition violates its structural invariants."""


class UnboundedRelaxation(RuntimeError):
    pass


class RelaxationKind(str, Enum):
    LP = "lp"
    EDGE = "edge"
    COVER = "cover"


@dataclass
class RelaxationArtifact:
    """A relaxation model plus the bookkeeping for its ambient space.

    Not every ambient variable is a column: block equalities (split
    variables re-summing to the originals, q + qb = 1) are eliminated at
    build time, so ``derived`` maps those keys to affine forms
    (const, ((column, weight), ...)) over the remaining columns and
    ``fixed_zero`` holds the structural zeros of each disjunction block.
    """

    model: LinearModel
    kind: RelaxationKind
    partition: CoverPartition | None
    key_map: dict[VarKey, str]
    fixed_zero: frozenset[VarKey]
    derived: dict[VarKey, tuple[float, tuple[tuple[str, float], ...]]]
    ambient_dim: int

    def copy(self) -> "RelaxationArtifact":
        return RelaxationArtifact(self.model.copy(), self.kind, self.partition,
                                  dict(self.key_map), self.fixed_zero,
                                  dict(self.derived), self.ambient_dim)

    def resolve(self, key: VarKey) -> tuple[float, tuple[tuple[str, float], ...]]:
        """Affine form of an ambient variable over the model's columns."""
        if key in self.fixed_zero:
            return 0.0, ()
        if key in self.derived:
            return self.derived[key]
        return 0.0, ((self.key_map[key], 1.0),)

    def expand_assignment(self, assignment: dict[str, float]) -> dict[str, float]:
        """Column assignment -> full ambient-space assignment (by name)."""
        out = dict(assignment)
        for key in self.fixed_zero:
            out[key.render()] = 0.0
        for key, (const, terms) in self.derived.items():
            out[key.render()] = const + sum(
                w * assignment.get(nm, 0.0) for nm, w in terms)
        return out


def conflict_graph_of(inst: LpccInstance) -> ConflictGraph:
    return ConflictGraph.from_edges(inst.num_y, inst.edges)


def _check_normalized(inst: LpccInstance) -> None:
    if not inst.is_normalized:
        raise ValueError("instance must be normalized (y_upper all ones)")


def _check_partition(inst: LpccInstance, partition: CoverPartition) -> None:
    g = conflict_graph_of(inst)
    seen: set[int] = set()
    for grp, nbhd in zip(partition.groups, partition.group_neighborhood):
        if not grp:
            raise InfeasiblePartition("empty group")
        for i in grp:
            if i in seen:
                raise InfeasiblePartition(f"node {i} in two groups")
            seen.add(i)
            if frozenset(g.adjacency[i]) != nbhd:
                raise InfeasiblePartition(
                    f"node {i}: delta(i) differs from delta(T)")
    for (i, j) in g.edges:
        if i not in seen and j not in seen:
            raise InfeasiblePartition(f"edge ({i},{j}) uncovered")


def _base_model(inst: LpccInstance) -> tuple[LinearModel, dict[VarKey, str]]:
    model = LinearModel()
    key_map: dict[VarKey, str] = {}
    for k in range(inst.num_x):
        key = VarKey("x", index=k)
        key_map[key] = key.render()
        model.add_variable(key.render(), -math.inf, math.inf)
    for j in range(inst.num_y):
        key = VarKey("y", index=j)
        key_map[key] = key.render()
        model.add_variable(key.render(), 0.0, 1.0)
    obj = {}
    for k, c in enumerate(inst.objective_x):
        if c:
            obj[VarKey("x", index=k).render()] = c
    for j, c in enumerate(inst.objective_y):
        if c:
            obj[VarKey("y", index=j).render()] = c
    model.set_objective(obj, inst.direction)
    return model, key_map


def _row_coeffs(inst: LpccInstance, row) -> dict[VarKey, float]:
    out = {}
    for k, c in enumerate(row.coeffs_x):
        if c:
            out[VarKey("x", index=k)] = c
    for j, c in enumerate(row.coeffs_y):
        if c:
            out[VarKey("y", index=j)] = c
    return out


def _add_original_rows(inst: LpccInstance, model: LinearModel) -> None:
    for row in inst.rows:
        coeffs = {key.render(): c for key, c in _row_coeffs(inst, row).items()}
        model.add_constraint(coeffs, row.sense, row.rhs)


def build_lp_relaxation(inst: LpccInstance) -> RelaxationArtifact:
    """Drop complementarity: x free, y in [0,1]^n, original rows only."""
    _check_normalized(inst)
    model, key_map = _base_model(inst)
    _add_original_rows(inst, model)
    return RelaxationArtifact(model, RelaxationKind.LP, None, key_map,
                              frozenset(), {}, inst.num_x + inst.num_y)


def _emit_block(inst: LpccInstance, model: LinearModel,
                key_map: dict[VarKey, str], fixed: set[VarKey],
                derived: dict, label: str, T, delta) -> None:
    """Emit one disjunction block for group ``T`` with neighborhood ``delta``.

    All block equalities are eliminated by substitution before any row is
    written: qb = 1 - q, ub_k = x_k - u_k, vb_j = y_j - v_j; the structural
    zeros then force v_j = y_j on T and vb_j = y_j on delta(T).  The block
    therefore adds only inequality rows, which keeps the solver off the
    massively degenerate all-equality tableaux the naive emission produces.
    """
    p, n = inst.num_x, inst.num_y
    t_set, d_set = set(T), set(delta)
    q = VarKey("q", label)
    key_map[q] = q.render()
    model.add_variable(q.render(), 0.0, 1.0)
    qname = key_map[q]
    qb = VarKey("qb", label)
    key_map[qb] = qb.render()
    derived[qb] = (1.0, ((qname, -1.0),))

    for k in range(p):
        u = VarKey("u", label, k)
        key_map[u] = u.render()
        model.add_variable(u.render(), -math.inf, math.inf)
        ub = VarKey("ub", label, k)
        key_map[ub] = ub.render()
        derived[ub] = (0.0, ((VarKey("x", index=k).render(), 1.0),
                             (u.render(), -1.0)))

    # affine forms of v / vb over the block columns, per y-index
    v_form: list[tuple[tuple[str, float], ...]] = []
    vb_form: list[tuple[tuple[str, float], ...]] = []
    for j in range(n):
        v = VarKey("v", label, j)
        vb = VarKey("vb", label, j)
        key_map[v] = v.render()
        key_map[vb] = vb.render()
        yname = VarKey("y", index=j).render()
        if j in d_set:
            fixed.add(v)
            derived[vb] = (0.0, ((yname, 1.0),))
            v_form.append(())
            vb_form.append(derived[vb][1])
        elif j in t_set:
            fixed.add(vb)
            derived[v] = (0.0, ((yname, 1.0),))
            v_form.append(derived[v][1])
            vb_form.append(())
        else:
            model.add_variable(v.render(), 0.0, math.inf)
            derived[vb] = (0.0, ((yname, 1.0), (v.render(), -1.0)))
            v_form.append(((v.render(), 1.0),))
            vb_form.append(derived[vb][1])

    def add(coeffs: dict[str, float], terms, scale: float) -> None:
        for nm, w in terms:
            coeffs[nm] = coeffs.get(nm, 0.0) + scale * w

    # duplicated row systems scaled by q and (1 - q)
    for row in inst.rows:
        coeffs: dict[str, float] = {}
        for k, c in enumerate(row.coeffs_x):
            if c:
                coeffs[VarKey("u", label, k).render()] = c
        for j, c in enumerate(row.coeffs_y):
            if c:
                add(coeffs, v_form[j], c)
        coeffs[qname] = coeffs.get(qname, 0.0) - row.rhs
        model.add_constraint(coeffs, row.sense, 0.0)

        coeffs = {}
        for k, c in enumerate(row.coeffs_x):
            if c:
                add(coeffs, derived[VarKey("ub", label, k)][1], c)
        for j, c in enumerate(row.coeffs_y):
            if c:
                add(coeffs, vb_form[j], c)
        coeffs[qname] = coeffs.get(qname, 0.0) + row.rhs
        model.add_constraint(coeffs, row.sense, row.rhs)

    # v <= q and 0 <= vb <= 1 - q componentwise (v >= 0 is a column bound)
    for j in range(n):
        if v_form[j]:
            coeffs = {qname: -1.0}
            add(coeffs, v_form[j], 1.0)
            model.add_constraint(coeffs, Sense.LE, 0.0)
        if vb_form[j]:
            coeffs = {qname: 1.0}
            add(coeffs, vb_form[j], 1.0)
            model.add_constraint(coeffs, Sense.LE, 1.0)
            if len(vb_form[j]) > 1:  # vb >= 0 is not implied by y bounds
                coeffs = {}
                add(coeffs, vb_form[j], -1.0)
                model.add_constraint(coeffs, Sense.LE, 0.0)


def _finish(inst, model, key_map, fixed, derived, kind, partition, blocks):
    p, n = inst.num_x, inst.num_y
    ambient = p + n + blocks * (2 + 2 * p + 2 * n)
    assert len(key_map) == ambient, "ambient dimension formula violated"
    assert model.num_vars == ambient - len(fixed) - len(derived)
    live = {v for k, v in key_map.items()
            if k not in fixed and k not in derived}
    assert len(live) == model.num_vars
    return RelaxationArtifact(model, kind, partition, key_map,
                              frozenset(fixed), derived, ambient)


def build_cover_relaxation(inst: LpccInstance,
                           partition: CoverPartition) -> RelaxationArtifact:
    """One disjunction block per partition group."""
    _check_normalized(inst)
    _check_partition(inst, partition)
    model, key_map = _base_model(inst)
    _add_original_rows(inst, model)
    fixed: set[VarKey] = set()
    derived: dict = {}
    for t, (grp, nbhd) in enumerate(zip(partition.groups,
                                        partition.group_neighborhood)):
        _emit_block(inst, model, key_map, fixed, derived,
                    f"T{t + 1}", grp, nbhd)
    return _finish(inst, model, key_map, fixed, derived,
                   RelaxationKind.COVER, partition, len(partition))


def build_edge_relaxation(inst: LpccInstance) -> RelaxationArtifact:
    """One disjunction block per conflict edge {i, j}: y_i = 0 or y_j = 0."""
    _check_normalized(inst)
    model, key_map = _base_model(inst)
    _add_original_rows(inst, model)
    fixed: set[VarKey] = set()
    derived: dict = {}
    for (i, j) in inst.edges:
        _emit_block(inst, model, key_map, fixed, derived,
                    f"e{i + 1}_{j + 1}", (i,), (j,))
    return _finish(inst, model, key_map, fixed, derived,
                   RelaxationKind.EDGE, None, len(inst.edges))


def lift_point(inst: LpccInstance, partition: CoverPartition,
               x, y) -> dict[VarKey, float]:
    """Explicit lift of a complementarity-feasible point into cover space.

    q_T = y(T) / (y(T) + y(delta(T))) with q_T = 0 when the denominator is
    zero; u = q x, v = q y and the barred counterparts complete the point.
    """
    out: dict[VarKey, float] = {}
    for k, val in enumerate(x):
        out[VarKey("x", index=k)] = float(val)
    for j, val in enumerate(y):
        out[VarKey("y", index=j)] = float(val)
    for t, (grp, nbhd) in enumerate(zip(partition.groups,
                                        partition.group_neighborhood)):
        label = f"T{t + 1}"
        yt = sum(y[i] for i in grp)
        yd = sum(y[j] for j in nbhd)
        q = 0.0 if yt + yd == 0 else yt / (yt + yd)
        qb = 1.0 - q
        out[VarKey("q", label)] = q
        out[VarKey("qb", label)] = qb
        for k, val in enumerate(x):
            out[VarKey("u", label, k)] = q * val
            out[VarKey("ub", label, k)] = qb * val
        for j, val in enumerate(y):
            out[VarKey("v", label, j)] = q * val
            out[VarKey("vb", label, j)] = qb * val
    return out


def check_point(model: LinearModel, assignment: dict[str, float],
                tol: float = 1e-8) -> list[tuple[int, float]]:
    """Row/bound violations of an assignment against a model."""
    viol = []
    for r, con in enumerate(model.constraints):
        lhs = sum(c * assignment.get(nm, 0.0) for nm, c in con.coeffs.items())
        if con.sense is Sense.LE:
            gap = lhs - con.rhs
        elif con.sense is Sense.GE:
            gap = con.rhs - lhs
        else:
            gap = abs(lhs - con.rhs)
        if gap > tol:
            viol.append((r, gap))
    for k, (nm, lo, hi) in enumerate(model.variables):
        val = assignment.get(nm, 0.0)
        if val < lo - tol or val > hi + tol:
            viol.append((-k - 1, val))
    return viol


@dataclass
class OrderingReport:
    direction: Direction
    lp_value: float
    edge_value: float | None
    cover_value: float | None
    exact_value: float | None
    ok: bool
    detail: str = ""


def objective_bound_ordering_check(inst: LpccInstance,
                                   time_limit: float = 60.0,
                                   tol: float = 1e-6) -> OrderingReport:
    """Solve LP, edge, and all-singleton cover relaxations plus the exact
    problem, and verify the containment chain on objective values."""
    from .exact import solve_exact  # local import to avoid a cycle

    _check_normalized(inst)
    g = conflict_graph_of(inst)
    lp = simplex.solve(build_lp_relaxation(inst).model)
    if lp.status is not simplex.LpStatus.OPTIMAL:
        raise UnboundedRelaxation(f"LP relaxation is {lp.status.value}")
    edge = simplex.solve(build_edge_relaxation(inst).model)
    cover = simplex.solve(
        build_cover_relaxation(inst, singleton_partition(g)).model)
    vstar, _, _ = solve_exact(inst, time_limit=time_limit)

    sign = 1.0 if inst.direction is Direction.MAX else -1.0

    def signed(res: simplex.LpResult) -> float:
        # an infeasible tightening reads as -inf in the (max-sense) chain;
        # it is only consistent if everything tighter is infeasible too
        if res.status is simplex.LpStatus.OPTIMAL:
            return sign * res.value
        if res.status is simplex.LpStatus.INFEASIBLE:
            return -math.inf
        raise UnboundedRelaxation(f"relaxation is {res.status.value}")

    chain = [signed(lp), signed(edge), signed(cover),
             sign * vstar if vstar is not None else -math.inf]
    ok = all(chain[k] >= chain[k + 1] - tol for k in range(len(chain) - 1))
    detail = "" if vstar is not None else "exact problem infeasible"
    return OrderingReport(inst.direction, lp.value, edge.value, cover.value,
                          vstar, ok, detail)
