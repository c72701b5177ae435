"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the library's own simplex:

* ``vertex_enumeration_optimum`` enumerates basic feasible solutions of a
  box-bounded model directly (every bounded nonempty polyhedron attains its
  optimum at a vertex, and every vertex is the intersection of dim-many
  active hyperplanes),
* ``scipy_reference`` wraps scipy.optimize.linprog; the HiGHS presolve
  occasionally reports unbounded problems as infeasible, so both presolve
  settings are consulted before trusting a non-optimal verdict.
"""
from __future__ import annotations

import itertools
import math
import random

import numpy as np
import pytest

from lpcc_relax.model import (Direction, LinearModel, LpccInstance, Row,
                              Sense, normalize)


# ---------------------------------------------------------------------------
# small-LP generation


def random_box_model(rng: random.Random, max_vars: int = 6,
                     max_rows: int = 8) -> LinearModel:
    """A random LP with finite box bounds on every variable."""
    nv = rng.randint(1, max_vars)
    nr = rng.randint(1, max_rows)
    m = LinearModel(Direction.MAX if rng.random() < 0.5 else Direction.MIN)
    names = [f"x{i}" for i in range(nv)]
    for nm in names:
        lo = rng.choice([0.0, -2.0, 1.0])
        hi = lo + rng.choice([0.0, 1.0, 3.0, 10.0])
        m.add_variable(nm, lo, hi)
    m.objective = {nm: float(rng.randint(-5, 5)) for nm in names}
    for _ in range(nr):
        support = rng.sample(names, rng.randint(1, nv))
        coeffs = {nm: float(rng.randint(-4, 4)) for nm in support}
        sense = rng.choice([Sense.LE, Sense.GE, Sense.EQ])
        m.add_constraint(coeffs, sense, float(rng.randint(-6, 10)))
    return m


def vertex_enumeration_optimum(model: LinearModel, tol: float = 1e-9):
    """(status, value) by brute force over candidate vertices.

    Requires finite bounds on all variables.  Returns ("infeasible", None)
    when no vertex satisfies every constraint.
    """
    names = [nm for nm, _, _ in model.variables]
    n = len(names)
    idx = {nm: k for k, nm in enumerate(names)}
    planes: list[tuple[np.ndarray, float]] = []   # candidate active rows
    checks: list[tuple[np.ndarray, float, Sense]] = []
    for nm, lo, hi in model.variables:
        assert math.isfinite(lo) and math.isfinite(hi)
        e = np.zeros(n)
        e[idx[nm]] = 1.0
        planes.append((e.copy(), lo))
        checks.append((e.copy(), lo, Sense.GE))
        if hi > lo:
            planes.append((e.copy(), hi))
        checks.append((e.copy(), hi, Sense.LE))
    for con in model.constraints:
        a = np.zeros(n)
        for nm, c in con.coeffs.items():
            a[idx[nm]] += c
        planes.append((a, con.rhs))
        checks.append((a, con.rhs, con.sense))

    def feasible(x: np.ndarray) -> bool:
        for a, b, sense in checks:
            lhs = float(a @ x)
            if sense is Sense.LE and lhs > b + tol:
                return False
            if sense is Sense.GE and lhs < b - tol:
                return False
            if sense is Sense.EQ and abs(lhs - b) > tol:
                return False
        return True

    best = None
    c = np.zeros(n)
    for nm, w in model.objective.items():
        c[idx[nm]] += w
    for combo in itertools.combinations(range(len(planes)), n):
        A = np.array([planes[k][0] for k in combo])
        b = np.array([planes[k][1] for k in combo])
        try:
            x = np.linalg.solve(A, b)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(x)) or np.max(np.abs(A @ x - b)) > 1e-7:
            continue
        if not feasible(x):
            continue
        val = float(c @ x)
        if best is None:
            best = val
        elif model.direction is Direction.MAX:
            best = max(best, val)
        else:
            best = min(best, val)
    if best is None:
        return "infeasible", None
    return "optimal", best


def scipy_reference(model: LinearModel):
    """(status, value) from scipy/HiGHS, robust to the presolve quirk."""
    from scipy.optimize import linprog

    names = [nm for nm, _, _ in model.variables]
    idx = {nm: k for k, nm in enumerate(names)}
    n = len(names)
    sign = 1.0 if model.direction is Direction.MIN else -1.0
    c = np.zeros(n)
    for nm, w in model.objective.items():
        c[idx[nm]] += sign * w
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for con in model.constraints:
        a = np.zeros(n)
        for nm, w in con.coeffs.items():
            a[idx[nm]] += w
        if con.sense is Sense.LE:
            A_ub.append(a)
            b_ub.append(con.rhs)
        elif con.sense is Sense.GE:
            A_ub.append(-a)
            b_ub.append(-con.rhs)
        else:
            A_eq.append(a)
            b_eq.append(con.rhs)
    bounds = [(lo if math.isfinite(lo) else None,
               hi if math.isfinite(hi) else None)
              for _, lo, hi in model.variables]
    kw = dict(c=c, bounds=bounds, method="highs")
    if A_ub:
        kw.update(A_ub=np.array(A_ub), b_ub=np.array(b_ub))
    if A_eq:
        kw.update(A_eq=np.array(A_eq), b_eq=np.array(b_eq))

    res = linprog(**kw)
    status = {0: "optimal", 2: "infeasible", 3: "unbounded"}.get(res.status)
    if status != "optimal":
        # presolve has been seen to flag unbounded models as infeasible
        res2 = linprog(**kw, options={"presolve": False})
        st2 = {0: "optimal", 2: "infeasible",
               3: "unbounded"}.get(res2.status)
        if st2 == "optimal":
            return "optimal", sign * res2.fun
        if st2 == "unbounded":
            return "unbounded", None
        return status or st2, None
    return "optimal", sign * res.fun


# ---------------------------------------------------------------------------
# tiny LPCC instances


def single_edge_toy() -> LpccInstance:
    """max y1 + y2 with the single conflict y1*y2 = 0."""
    return LpccInstance.create(
        direction=Direction.MAX, num_x=0, num_y=2,
        objective_x=(), objective_y=(1.0, 1.0), rows=(), edges=[(0, 1)])


def c5_instance() -> LpccInstance:
    """max sum(y) over the 5-cycle conflict graph, bounds only."""
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]
    return LpccInstance.create(
        direction=Direction.MAX, num_x=0, num_y=5,
        objective_x=(), objective_y=(1.0,) * 5, rows=(), edges=edges)


def random_instance(rng: random.Random, max_y: int = 12) -> LpccInstance:
    """A mixed-family random normalized instance with num_y <= max_y."""
    from lpcc_relax.generate import Family, GenSpec, generate

    fam = rng.choice([Family.TPESC, Family.CMKPC, Family.ONE_REG])
    seed = rng.randint(0, 10 ** 6)
    if fam is Family.TPESC:
        s = rng.randint(2, 3)
        d = rng.randint(2, max(2, max_y // s))
        spec = GenSpec(fam, (s, d), rng.choice([0.2, 0.4, 0.6]), seed)
    elif fam is Family.CMKPC:
        spec = GenSpec(fam, (rng.randint(4, max_y), rng.randint(2, 4)),
                       rng.choice([0.2, 0.3, 0.5]), seed)
    else:
        spec = GenSpec(fam, (rng.randint(2, max_y // 2), rng.randint(2, 4),
                             rng.randint(2, 5)), 0.0, seed)
    return normalize(generate(spec))


@pytest.fixture
def rng():
    return random.Random(20240817)
