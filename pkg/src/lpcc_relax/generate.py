"""Seeded generators for the three benchmark families.

* TPESC: transportation with exclusionary side constraints (minimization,
  equality supply/demand rows, conflicts between sources replicated per
  destination),
* CMKPC: continuous multi-dimensional knapsack with conflicts,
* 1R: LPCC whose conflict graph is a perfect matching (y_i vs z_i).

Identical GenSpec -> byte-identical serialized instance.  Each generator
draws from one ``random.Random(seed)`` stream in a fixed, documented order.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

from .model import Direction, LpccInstance, Row, Sense


class Family(str, Enum):
    TPESC = "tpesc"
    CMKPC = "cmkpc"
    ONE_REG = "one_reg"


@dataclass(frozen=True)
class GenSpec:
    family: Family
    # TPESC: (|S|, |D|); CMKPC: (n, m); ONE_REG: (n, p, m)
    size: tuple[int, ...]
    rho: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if any(s <= 0 for s in self.size):
            raise ValueError("size parameters must be positive")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError("rho outside [0,1]")

    def label(self) -> str:
        size = ",".join(str(s) for s in self.size)
        return f"{self.family.value}({size},rho={self.rho})"


def generate(spec: GenSpec) -> LpccInstance:
    if spec.family is Family.TPESC:
        return gen_tpesc(spec)
    if spec.family is Family.CMKPC:
        return gen_cmkpc(spec)
    return gen_one_regular(spec)


def _er_pairs(rng: random.Random, n: int, rho: float) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)
            if rng.random() < rho]


def _balance(larger: list[int], smaller: list[int], cap: int) -> None:
    """Round-robin decrement of the larger side (floor 1); if it bottoms
    out, round-robin increment of the smaller side (cap respected)."""
    def total(v):
        return sum(v)

    while total(larger) > total(smaller):
        moved = False
        for k in range(len(larger)):
            if total(larger) == total(smaller):
                return
            if larger[k] > 1:
                larger[k] -= 1
                moved = True
        if not moved:
            break
    while total(larger) > total(smaller):
        moved = False
        for k in range(len(smaller)):
            if total(larger) == total(smaller):
                return
            if smaller[k] < cap:
                smaller[k] += 1
                moved = True
        if not moved:
            raise ValueError("cannot balance supplies and demands")


def gen_tpesc(spec: GenSpec) -> LpccInstance:
    """Draw order: costs c, supplies alpha, demands beta, source graph."""
    assert spec.family is Family.TPESC
    s, d = spec.size
    rng = random.Random(spec.seed)
    n = s * d  # y_{i,j} at index i*d + j
    c = [rng.randint(3, 8) for _ in range(n)]
    alpha = [rng.randint(1, max(1, d // 2)) for _ in range(s)]
    beta = [rng.randint(1, max(1, s // 2)) for _ in range(d)]
    if sum(alpha) > sum(beta):
        _balance(alpha, beta, cap=s)
    elif sum(beta) > sum(alpha):
        _balance(beta, alpha, cap=d)
    source_pairs = _er_pairs(rng, s, spec.rho)

    rows = []
    for i in range(s):
        cy = [0.0] * n
        for j in range(d):
            cy[i * d + j] = 1.0
        rows.append(Row((), tuple(cy), float(alpha[i]), Sense.EQ))
    for j in range(d):
        cy = [0.0] * n
        for i in range(s):
            cy[i * d + j] = 1.0
        rows.append(Row((), tuple(cy), float(beta[j]), Sense.EQ))

    edges = [(i * d + j, i2 * d + j)
             for (i, i2) in source_pairs for j in range(d)]
    return LpccInstance.create(
        direction=Direction.MIN, num_x=0, num_y=n,
        objective_x=(), objective_y=c, rows=rows, edges=edges)


def gen_cmkpc(spec: GenSpec) -> LpccInstance:
    """Draw order: profits c, weight matrix M (row-major), conflict graph."""
    assert spec.family is Family.CMKPC
    n, m = spec.size
    rng = random.Random(spec.seed)
    c = [rng.randint(10, 25) for _ in range(n)]
    M = [[rng.randint(10, 25) for _ in range(n)] for _ in range(m)]
    b = [0.3 * sum(Mi) for Mi in M]  # kept real-valued
    edges = _er_pairs(rng, n, spec.rho)
    rows = [Row((), tuple(float(v) for v in Mi), bi, Sense.LE)
            for Mi, bi in zip(M, b)]
    return LpccInstance.create(
        direction=Direction.MAX, num_x=0, num_y=n,
        objective_x=(), objective_y=c, rows=rows, edges=edges)


def _sign(v: float) -> float:
    return math.copysign(1.0, v) if v != 0 else 0.0


def gen_one_regular(spec: GenSpec) -> LpccInstance:
    """Perfect-matching conflict graph over a 2n block (y then z).

    Draw order: f_x, f_y, f_z, A (row-major), B, U, theta (one per row).
    C_{ij} = -B_{ij} + U_{ij} / (sign(B_{ij}) + 0.5) and
    d_i = floor(theta_i * sum_j (B_{ij} + C_{ij})).
    """
    assert spec.family is Family.ONE_REG
    n, p, m = spec.size
    rng = random.Random(spec.seed)
    f_x = [rng.randint(-15, 5) for _ in range(p)]
    f_y = [rng.randint(-15, 5) for _ in range(n)]
    f_z = [rng.randint(-15, 5) for _ in range(n)]
    A = [[rng.randint(-20, 30) for _ in range(p)] for _ in range(m)]
    B = [[rng.randint(-20, 30) for _ in range(n)] for _ in range(m)]
    U = [[rng.randint(-10, 10) for _ in range(n)] for _ in range(m)]
    C = [[-B[i][j] + U[i][j] / (_sign(B[i][j]) + 0.5) for j in range(n)]
         for i in range(m)]
    theta = [rng.random() for _ in range(m)]
    d = [math.floor(theta[i] * sum(B[i][j] + C[i][j] for j in range(n)))
         for i in range(m)]

    rows = []
    for i in range(m):
        rows.append(Row(tuple(float(a) for a in A[i]),
                        tuple(float(v) for v in B[i] + C[i]),
                        float(d[i]), Sense.LE))
    # x in [0,1]^p, expressed as rows (builders keep x free by default)
    for k in range(p):
        cx = [0.0] * p
        cx[k] = 1.0
        rows.append(Row(tuple(cx), (0.0,) * (2 * n), 1.0, Sense.LE))
        rows.append(Row(tuple(cx), (0.0,) * (2 * n), 0.0, Sense.GE))

    edges = [(i, n + i) for i in range(n)]
    return LpccInstance.create(
        direction=Direction.MAX, num_x=p, num_y=2 * n,
        objective_x=f_x, objective_y=f_y + f_z, rows=rows, edges=edges)
