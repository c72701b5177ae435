"""Core data model: LPCC instances, generic linear models, and solutions.

An LPCC is a linear program over variables (x, y) together with a conflict
graph on the y-indices: for every edge {i, j} the product y_i * y_j must be
zero.  Everything downstream (relaxation builders, cut generation, the exact
solver) consumes the types defined here.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

FEAS_TOL = 1e-7
COMP_TOL = 1e-8


class Sense(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class Direction(str, Enum):
    MAX = "max"
    MIN = "min"


class NonPositiveBound(ValueError):
    """Raised when a y-variable upper bound is not strictly positive."""


class DimensionMismatch(ValueError):
    """Raised when a vector has the wrong length for the instance."""


@dataclass(frozen=True)
class Row:
    """One linear constraint a_x . x + a_y . y  (sense)  rhs."""

    coeffs_x: tuple[float, ...]
    coeffs_y: tuple[float, ...]
    rhs: float
    sense: Sense


@dataclass(frozen=True)
class LpccInstance:
    """A linear program with complementarity constraints.

    The conflict graph lives on the y-indices: ``edges`` is a set of
    unordered pairs (stored as sorted tuples) over ``range(num_y)``.
    """

    direction: Direction
    num_x: int
    num_y: int
    objective_x: tuple[float, ...]
    objective_y: tuple[float, ...]
    rows: tuple[Row, ...]
    y_upper: tuple[float, ...]
    edges: tuple[tuple[int, int], ...]

    @staticmethod
    def create(direction, num_x, num_y, objective_x, objective_y, rows,
               y_upper=None, edges=()) -> "LpccInstance":
        """Build an instance with canonical (sorted, deduplicated) edges."""
        if y_upper is None:
            y_upper = (1.0,) * num_y
        canon = sorted({(min(i, j), max(i, j)) for i, j in edges})
        return LpccInstance(
            direction=Direction(direction),
            num_x=num_x,
            num_y=num_y,
            objective_x=tuple(float(c) for c in objective_x),
            objective_y=tuple(float(c) for c in objective_y),
            rows=tuple(rows),
            y_upper=tuple(float(u) for u in y_upper),
            edges=tuple(canon),
        )

    @property
    def is_normalized(self) -> bool:
        return all(u == 1.0 for u in self.y_upper)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: tuple


def validate(inst: LpccInstance) -> list[Violation]:
    """Return one diagnostic per broken instance invariant (empty if valid)."""
    out: list[Violation] = []
    if inst.num_y < 1:
        out.append(Violation("no_y_variables", (inst.num_y,)))
    if len(inst.objective_x) != inst.num_x:
        out.append(Violation("objective_x_length", (len(inst.objective_x),)))
    if len(inst.objective_y) != inst.num_y:
        out.append(Violation("objective_y_length", (len(inst.objective_y),)))
    if len(inst.y_upper) != inst.num_y:
        out.append(Violation("y_upper_length", (len(inst.y_upper),)))
    for j, u in enumerate(inst.y_upper):
        if not u > 0:
            out.append(Violation("non_positive_bound", (j, u)))
    for k, row in enumerate(inst.rows):
        if len(row.coeffs_x) != inst.num_x or len(row.coeffs_y) != inst.num_y:
            out.append(Violation("row_length", (k,)))
    seen = set()
    for (i, j) in inst.edges:
        if i == j:
            out.append(Violation("loop_edge", (i,)))
            continue
        if not (0 <= i < inst.num_y and 0 <= j < inst.num_y):
            out.append(Violation("index_out_of_range", (i, j)))
            continue
        key = (min(i, j), max(i, j))
        if key in seen:
            out.append(Violation("duplicate_edge", key))
        seen.add(key)
    return out


def normalize(inst: LpccInstance) -> LpccInstance:
    """Rescale so every y-variable has upper bound 1.

    The change of variables y_j' = y_j / u_j multiplies column j of every
    row and of the objective by u_j; optimal values are unchanged.
    """
    for j, u in enumerate(inst.y_upper):
        if not u > 0:
            raise NonPositiveBound(f"y_upper[{j}] = {u}")
    if inst.is_normalized:
        return inst
    u = inst.y_upper
    rows = tuple(
        Row(
            coeffs_x=row.coeffs_x,
            coeffs_y=tuple(c * u[j] for j, c in enumerate(row.coeffs_y)),
            rhs=row.rhs,
            sense=row.sense,
        )
        for row in inst.rows
    )
    obj_y = tuple(c * u[j] for j, c in enumerate(inst.objective_y))
    return LpccInstance(
        direction=inst.direction,
        num_x=inst.num_x,
        num_y=inst.num_y,
        objective_x=inst.objective_x,
        objective_y=obj_y,
        rows=rows,
        y_upper=(1.0,) * inst.num_y,
        edges=inst.edges,
    )


@dataclass
class FeasibilityReport:
    row_violations: list[tuple[int, float]]
    bound_violations: list[tuple[str, float]]
    violated_pairs: list[tuple[int, int, float]]

    @property
    def feasible(self) -> bool:
        return not (self.row_violations or self.bound_violations
                    or self.violated_pairs)


def evaluate(inst: LpccInstance, x: Iterable[float],
             y: Iterable[float]) -> FeasibilityReport:
    """Check a point against rows, bounds, and complementarity pairs."""
    x = tuple(float(v) for v in x)
    y = tuple(float(v) for v in y)
    if len(x) != inst.num_x:
        raise DimensionMismatch(f"x has length {len(x)}, expected {inst.num_x}")
    if len(y) != inst.num_y:
        raise DimensionMismatch(f"y has length {len(y)}, expected {inst.num_y}")

    row_viol = []
    for k, row in enumerate(inst.rows):
        lhs = sum(c * v for c, v in zip(row.coeffs_x, x))
        lhs += sum(c * v for c, v in zip(row.coeffs_y, y))
        if row.sense is Sense.LE:
            gap = lhs - row.rhs
        elif row.sense is Sense.GE:
            gap = row.rhs - lhs
        else:
            gap = abs(lhs - row.rhs)
        if gap > FEAS_TOL:
            row_viol.append((k, gap))

    bound_viol = []
    for j, v in enumerate(y):
        if v < -FEAS_TOL:
            bound_viol.append((f"y{j + 1}>=0", -v))
        if v > inst.y_upper[j] + FEAS_TOL:
            bound_viol.append((f"y{j + 1}<=u", v - inst.y_upper[j]))

    pairs = []
    for (i, j) in inst.edges:
        prod = y[i] * y[j]
        if prod > COMP_TOL:
            pairs.append((i, j, prod))
    return FeasibilityReport(row_viol, bound_viol, pairs)


# ---------------------------------------------------------------------------
# instance file format


def to_json(inst: LpccInstance) -> str:
    """Serialize to the instance file format (0-based indices)."""
    obj = {
        "direction": inst.direction.value,
        "num_x": inst.num_x,
        "num_y": inst.num_y,
        "obj_x": list(inst.objective_x),
        "obj_y": list(inst.objective_y),
        "rows": [
            {"cx": list(r.coeffs_x), "cy": list(r.coeffs_y),
             "sense": r.sense.value, "rhs": r.rhs}
            for r in inst.rows
        ],
        "y_upper": list(inst.y_upper),
        "edges": [[i, j] for (i, j) in inst.edges],
    }
    return json.dumps(obj, indent=1)


def from_json(text: str) -> LpccInstance:
    obj = json.loads(text)
    rows = tuple(
        Row(tuple(float(c) for c in r["cx"]),
            tuple(float(c) for c in r["cy"]),
            float(r["rhs"]), Sense(r["sense"]))
        for r in obj["rows"]
    )
    return LpccInstance.create(
        direction=obj["direction"],
        num_x=int(obj["num_x"]),
        num_y=int(obj["num_y"]),
        objective_x=obj["obj_x"],
        objective_y=obj["obj_y"],
        rows=rows,
        y_upper=obj["y_upper"],
        edges=[tuple(e) for e in obj["edges"]],
    )


def load(path) -> LpccInstance:
    with open(path) as fh:
        return from_json(fh.read())


def save(inst: LpccInstance, path) -> None:
    with open(path, "w") as fh:
        fh.write(to_json(inst))


# ---------------------------------------------------------------------------
# variable keys for extended-space models


@dataclass(frozen=True, order=True)
class VarKey:
    """Tagged name for a column of an (extended) model.

    ``kind`` is one of x, y, q, qb, u, ub, v, vb.  ``group`` identifies the
    disjunction block ("T3" for cover groups, "e1_2" for edges) and is None
    for the original x/y variables.  Indices render 1-based, e.g. "v[T3,y7]".
    """

    kind: str
    group: str | None = None
    index: int | None = None

    def render(self) -> str:
        if self.kind in ("x", "y"):
            return f"{self.kind}[{self.index + 1}]"
        if self.kind in ("q", "qb"):
            return f"{self.kind}[{self.group}]"
        sub = "x" if self.kind in ("u", "ub") else "y"
        return f"{self.kind}[{self.group},{sub}{self.index + 1}]"


# ---------------------------------------------------------------------------
# generic linear model


class UnknownVariable(KeyError):
    pass


@dataclass
class Constraint:
    coeffs: dict[str, float]
    sense: Sense
    rhs: float


@dataclass
class LinearModel:
    """A generic LP with named columns; carrier for every relaxation."""

    direction: Direction = Direction.MAX
    variables: list[tuple[str, float, float]] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[str, float] = field(default_factory=dict)
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    @property
    def var_index(self) -> dict[str, int]:
        return self._index

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    def add_variable(self, name: str, lower: float = 0.0,
                     upper: float = math.inf) -> None:
        if name in self._index:
            raise ValueError(f"duplicate variable {name!r}")
        if lower > upper:
            raise ValueError(f"bounds crossed for {name!r}: [{lower}, {upper}]")
        self._index[name] = len(self.variables)
        self.variables.append((name, lower, upper))

    def add_constraint(self, coeffs: Mapping[str, float], sense: Sense,
                       rhs: float) -> None:
        clean = {}
        for name, c in coeffs.items():
            if name not in self._index:
                raise UnknownVariable(name)
            if c != 0.0:
                clean[name] = float(c)
        self.constraints.append(Constraint(clean, Sense(sense), float(rhs)))

    def set_objective(self, coeffs: Mapping[str, float],
                      direction: Direction) -> None:
        for name in coeffs:
            if name not in self._index:
                raise UnknownVariable(name)
        self.objective = {k: float(v) for k, v in coeffs.items() if v != 0.0}
        self.direction = Direction(direction)

    def copy(self) -> "LinearModel":
        m = LinearModel(direction=self.direction)
        for name, lo, hi in self.variables:
            m.add_variable(name, lo, hi)
        for con in self.constraints:
            m.constraints.append(Constraint(dict(con.coeffs), con.sense,
                                            con.rhs))
        m.objective = dict(self.objective)
        return m

    def objective_value(self, assignment: Mapping[str, float]) -> float:
        return sum(c * assignment.get(name, 0.0)
                   for name, c in self.objective.items())


class SolutionStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class Solution:
    status: SolutionStatus
    value: float | None = None
    assignment: dict[str, float] = field(default_factory=dict)
