"""Cutting planes for the cover-based extended relaxation.

Three families:

* stable-set cuts (clique / odd-cycle / odd-anti-cycle inequalities on y,
  plus their lifted images on each block's v / vb scaled by q / qb),
* clique q-cuts (at most one group meeting a common clique may be active),
* bipartite-BQP odd-cycle cuts over pairs of groups and pairs of y-indices,
  separated iteratively at the current fractional optimum.

Every cut is valid for the binary lifted points of the extended system, so
no exact-feasible point's lift is ever cut off.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .graph import ConflictGraph, CoverPartition, maximal_cliques, \
    odd_antiholes, odd_holes
from .model import Sense, UnknownVariable, VarKey
from .relax import RelaxationArtifact, RelaxationKind
from . import simplex

VIOLATION_TOL = 1e-6
BQP_CAP_PER_ROUND = 500
MAX_ROUNDS = 5
REL_STOP = 0.01


class CutFamily(str, Enum):
    CLIQUE_Y = "clique_y"
    ODDCYCLE_Y = "oddcycle_y"
    ANTIHOLE_Y = "antihole_y"
    LIFTED_STABLE = "lifted_stable"
    CLIQUE_Q = "clique_q"
    CLIQUE_V = "clique_v"
    BQP_ODDCYCLE = "bqp_oddcycle"


@dataclass
class Cut:
    coeffs: dict[VarKey, float]
    rhs: float
    family: CutFamily
    provenance: tuple

    def fingerprint(self) -> tuple:
        items = tuple(sorted((k.render(), round(c, 9))
                             for k, c in self.coeffs.items()))
        return (items, round(self.rhs, 9))

    def to_json_obj(self) -> dict:
        return {
            "family": self.family.value,
            "provenance": [str(p) for p in self.provenance],
            "row": {k.render(): c for k, c in sorted(
                self.coeffs.items(), key=lambda kv: kv[0].render())},
            "rhs": self.rhs,
        }


def dump_cut_pool(cuts: list[Cut], path) -> None:
    with open(path, "w") as fh:
        json.dump([c.to_json_obj() for c in cuts], fh, indent=1)


def _eliminated(partition: CoverPartition) -> set[VarKey]:
    fixed: set[VarKey] = set()
    for t, (grp, nbhd) in enumerate(zip(partition.groups,
                                        partition.group_neighborhood)):
        label = f"T{t + 1}"
        for j in nbhd:
            fixed.add(VarKey("v", label, j))
        for i in grp:
            fixed.add(VarKey("vb", label, i))
    return fixed


def _stable_set_inequalities(g: ConflictGraph, max_hole_len: int = 9):
    """(support, rhs, family, provenance) for the three y-space families."""
    out = []
    cliques, _ = maximal_cliques(g)
    for c in cliques:
        if len(c) >= 2:
            out.append((c, 1.0, CutFamily.CLIQUE_Y, ("clique", c)))
    for d in odd_holes(g, max_hole_len):
        out.append((tuple(sorted(d)), (len(d) - 1) / 2.0,
                    CutFamily.ODDCYCLE_Y, ("odd_hole", d)))
    for d in odd_antiholes(g, max_hole_len):
        out.append((d, 2.0, CutFamily.ANTIHOLE_Y, ("odd_antihole", d)))
    return out


def stable_set_cuts(g: ConflictGraph, partition: CoverPartition,
                    max_hole_len: int = 9) -> list[Cut]:
    """y-space stable-set inequalities plus both lifted images per group.

    Lifted rows that lose terms to the block's zero-fixings and end up with
    at most one surviving term are dropped: they are already implied by the
    block bound rows (v <= q, vb <= qb) because every rhs here is >= 1.
    """
    fixed = _eliminated(partition)
    cuts: list[Cut] = []
    for support, rhs, family, prov in _stable_set_inequalities(g, max_hole_len):
        cuts.append(Cut({VarKey("y", index=j): 1.0 for j in support},
                        rhs, family, prov))
        for t in range(len(partition)):
            label = f"T{t + 1}"
            for kind, qkind in (("v", "q"), ("vb", "qb")):
                terms = [VarKey(kind, label, j) for j in support
                         if VarKey(kind, label, j) not in fixed]
                if len(terms) < 2:
                    continue
                coeffs = {key: 1.0 for key in terms}
                coeffs[VarKey(qkind, label)] = -rhs
                cuts.append(Cut(coeffs, 0.0, CutFamily.LIFTED_STABLE,
                                prov + (label, kind)))
    return cuts


def clique_q_cuts(g: ConflictGraph,
                  partition: CoverPartition) -> list[Cut]:
    """For each maximal clique met by k >= 2 groups: sum q <= 1 and the
    componentwise rows sum_t v_{T_t, j} <= y_j."""
    cliques, _ = maximal_cliques(g)
    cuts: list[Cut] = []
    fixed = _eliminated(partition)
    for c in cliques:
        if len(c) < 2:
            continue
        cset = set(c)
        hit = [t for t, grp in enumerate(partition.groups)
               if cset & set(grp)]
        if len(hit) < 2:
            continue
        coeffs = {VarKey("q", f"T{t + 1}"): 1.0 for t in hit}
        cuts.append(Cut(coeffs, 1.0, CutFamily.CLIQUE_Q, ("clique", c)))
        for j in range(g.n):
            terms = [VarKey("v", f"T{t + 1}", j) for t in hit
                     if VarKey("v", f"T{t + 1}", j) not in fixed]
            if len(terms) < 2:
                continue  # single-term rows follow from v + vb = y, vb >= 0
            coeffs = {key: 1.0 for key in terms}
            coeffs[VarKey("y", index=j)] = -1.0
            cuts.append(Cut(coeffs, 0.0, CutFamily.CLIQUE_V, ("clique", c, j)))
    return cuts


# ---------------------------------------------------------------------------
# BQP odd-cycle cuts

# the eight templates: (is_barred flags for the six terms, rhs); terms are
#   a*q_{T2 or T1}, y_j, and four v-entries -- encoded programmatically below


@dataclass
class BqpScan:
    cuts: list[Cut]
    evaluations: int


def _bqp_arrays(point, partition: CoverPartition, n: int):
    k = len(partition)
    q = np.zeros(k)
    qb = np.zeros(k)
    V = np.zeros((k, n))
    Vb = np.zeros((k, n))
    y = np.zeros(n)
    for j in range(n):
        y[j] = point.get(VarKey("y", index=j).render(), 0.0)
    for t in range(k):
        label = f"T{t + 1}"
        q[t] = point.get(VarKey("q", label).render(), 0.0)
        qb[t] = point.get(VarKey("qb", label).render(), 0.0)
        for j in range(n):
            V[t, j] = point.get(VarKey("v", label, j).render(), 0.0)
            Vb[t, j] = point.get(VarKey("vb", label, j).render(), 0.0)
    return q, qb, V, Vb, y


def bqp_violated_cuts(point, partition: CoverPartition, n: int,
                      tol: float = VIOLATION_TOL,
                      cap: int = BQP_CAP_PER_ROUND) -> BqpScan:
    """Scan all ordered group pairs and ordered index pairs for violated
    odd-cycle inequalities of the bipartite BQP; eliminated variables read
    as zero.  Returns the ``cap`` most violated, deterministically ordered.
    """
    q, qb, V, Vb, y = _bqp_arrays(point, partition, n)
    k = len(partition)
    if k < 2 or n < 2:
        return BqpScan([], 0)

    def t1(M):  # M[T1, j] broadcast over (t1, t2, i, j)
        return M[:, None, None, :]

    def t1i(M):
        return M[:, None, :, None]

    def t2(M):
        return M[None, :, None, :]

    def t2i(M):
        return M[None, :, :, None]

    yj = y[None, None, None, :]
    q1 = q[:, None, None, None]
    qb1 = qb[:, None, None, None]
    q2 = q[None, :, None, None]
    qb2 = qb[None, :, None, None]

    # |M| = 1 family (rhs 0) and |M| = 3 family (rhs 1)
    templates = [
        (-q2 - yj + t1(V) + t2i(V) + t2(V) - t1i(V), 0.0,
         ("v", "v", "v", "v", "q")),
        (-qb2 - yj + t1(Vb) + t2i(Vb) + t2(Vb) - t1i(Vb), 0.0,
         ("vb", "vb", "vb", "vb", "qb")),
        (-q2 - yj + t1(Vb) + t2i(V) + t2(V) - t1i(Vb), 0.0,
         ("vb", "v", "v", "vb", "q")),
        (-qb2 - yj + t1(V) + t2i(Vb) + t2(Vb) - t1i(V), 0.0,
         ("v", "vb", "vb", "v", "qb")),
        (q1 + yj + t2i(V) - t1i(V) - t1(V) - t2(V), 1.0,
         ("v", "v", "v", "v", "q")),
        (qb1 + yj + t2i(Vb) - t1i(Vb) - t1(Vb) - t2(Vb), 1.0,
         ("vb", "vb", "vb", "vb", "qb")),
        (q1 + yj + t2i(Vb) - t1i(V) - t1(V) - t2(Vb), 1.0,
         ("vb", "v", "v", "vb", "q")),
        (qb1 + yj + t2i(V) - t1i(Vb) - t1(Vb) - t2(V), 1.0,
         ("v", "vb", "vb", "v", "qb")),
    ]

    off_diag = np.ones((k, k, n, n), dtype=bool)
    idx = np.arange(k)
    off_diag[idx, idx, :, :] = False
    jdx = np.arange(n)
    off_diag[:, :, jdx, jdx] = False
    evaluations = 8 * int(off_diag.sum())

    hits = []
    for tmpl_id, (lhs, rhs, _) in enumerate(templates):
        viol = np.where(off_diag, lhs - rhs, -np.inf)
        sel = np.argwhere(viol > tol)
        for (a, b, i, j) in sel:
            hits.append((float(viol[a, b, i, j]), tmpl_id,
                         int(a), int(b), int(i), int(j)))
    hits.sort(key=lambda h: (-h[0], h[1], h[2], h[3], h[4], h[5]))
    hits = hits[:cap]

    cuts = []
    for (_, tmpl_id, a, b, i, j) in hits:
        cuts.append(_build_bqp_cut(tmpl_id, a, b, i, j))
    return BqpScan(cuts, evaluations)


def _build_bqp_cut(tmpl_id: int, t1: int, t2: int, i: int, j: int) -> Cut:
    L1, L2 = f"T{t1 + 1}", f"T{t2 + 1}"
    bar = {0: ("v", "v", "q"), 1: ("vb", "vb", "qb"),
           2: ("vb", "v", "q"), 3: ("v", "vb", "qb"),
           4: ("v", "v", "q"), 5: ("vb", "vb", "qb"),
           6: ("v", "vb", "q"), 7: ("vb", "v", "qb")}
    if tmpl_id < 4:
        k1, k2, qk = bar[tmpl_id]  # first-group kind, second-group kind, q kind
        coeffs = {
            VarKey(qk, L2): -1.0,
            VarKey("y", index=j): -1.0,
            VarKey(k1, L1, j): 1.0,
            VarKey(k2, L2, i): 1.0,
            VarKey(k2, L2, j): 1.0,
        }
        coeffs[VarKey(k1, L1, i)] = coeffs.get(VarKey(k1, L1, i), 0.0) - 1.0
        rhs = 0.0
    else:
        k1, k2, qk = bar[tmpl_id]
        coeffs = {
            VarKey(qk, L1): 1.0,
            VarKey("y", index=j): 1.0,
            VarKey(k2, L2, i): 1.0,
        }
        coeffs[VarKey(k1, L1, i)] = coeffs.get(VarKey(k1, L1, i), 0.0) - 1.0
        coeffs[VarKey(k1, L1, j)] = coeffs.get(VarKey(k1, L1, j), 0.0) - 1.0
        coeffs[VarKey(k2, L2, j)] = coeffs.get(VarKey(k2, L2, j), 0.0) - 1.0
        rhs = 1.0
    coeffs = {k: c for k, c in coeffs.items() if c != 0.0}
    return Cut(coeffs, rhs, CutFamily.BQP_ODDCYCLE,
               ("bqp", tmpl_id, L1, L2, i, j))


# ---------------------------------------------------------------------------


def apply_cuts(artifact: RelaxationArtifact, cuts: list[Cut],
               dedupe_state: set | None = None) -> RelaxationArtifact:
    """Return a new artifact with cut rows appended (original untouched).

    Terms on eliminated variables are dropped; duplicate cuts (by sorted
    coefficient fingerprint) are suppressed.
    """
    new = artifact.copy()
    append_cuts_inplace(new, cuts, dedupe_state)
    return new


def append_cuts_inplace(artifact: RelaxationArtifact, cuts: list[Cut],
                        dedupe_state: set | None = None) -> int:
    seen = dedupe_state if dedupe_state is not None else set()
    added = 0
    for cut in cuts:
        coeffs: dict[str, float] = {}
        rhs = cut.rhs
        for key, c in cut.coeffs.items():
            if key not in artifact.key_map:
                raise UnknownVariable(key.render())
            const, terms = artifact.resolve(key)
            rhs -= c * const
            for nm, w in terms:
                coeffs[nm] = coeffs.get(nm, 0.0) + c * w
        coeffs = {nm: c for nm, c in coeffs.items() if c != 0.0}
        if not coeffs:
            continue
        fp = (tuple(sorted((n, round(c, 9)) for n, c in coeffs.items())),
              round(rhs, 9))
        if fp in seen:
            continue
        seen.add(fp)
        artifact.model.add_constraint(coeffs, Sense.LE, rhs)
        added += 1
    return added


STATIC_CAP_PER_ROUND = 100


def violated_static_cuts(pool: list[Cut], point: dict[str, float],
                         tol: float = VIOLATION_TOL,
                         cap: int = STATIC_CAP_PER_ROUND) -> list[Cut]:
    """The ``cap`` most-violated pool members at an ambient-space point.

    Ties break on pool order, so the selection is deterministic.
    """
    hits = []
    for idx, cut in enumerate(pool):
        lhs = sum(c * point.get(k.render(), 0.0)
                  for k, c in cut.coeffs.items())
        if lhs > cut.rhs + tol:
            hits.append((cut.rhs - lhs, idx))
    hits.sort()
    return [pool[idx] for (_, idx) in hits[:cap]]


@dataclass
class StaticSeparationRun:
    result: simplex.LpResult
    rounds: int
    added: int


def iterate_static_separation(artifact: RelaxationArtifact, pool: list[Cut],
                              dedupe_state: set | None = None,
                              max_rounds: int = 100,
                              tol: float = VIOLATION_TOL,
                              session: simplex.IncrementalLp | None = None,
                              ) -> StaticSeparationRun:
    """Add violated pool cuts at the optimum and re-solve until clean.

    Adding the whole pool up front can multiply the row count several-fold;
    separating lazily keeps the working model near the size of the base
    relaxation.  Because the loop only stops once no pool member is
    violated, the final value equals that of the fully augmented model.
    ``session``, when given, must wrap ``artifact.model`` and lets the
    re-solves warm-start from the previous basis.
    """
    seen = dedupe_state if dedupe_state is not None else set()
    inc = session if session is not None else simplex.IncrementalLp(artifact.model)
    rounds = 0
    added = 0
    while True:
        res = inc.result
        rounds += 1
        if res.status is not simplex.LpStatus.OPTIMAL or rounds >= max_rounds:
            return StaticSeparationRun(res, rounds, added)
        point = artifact.expand_assignment(res.assignment)
        batch = violated_static_cuts(pool, point, tol)
        before = len(artifact.model.constraints)
        n = append_cuts_inplace(artifact, batch, seen)
        added += n
        if n == 0:
            return StaticSeparationRun(res, rounds, added)
        inc.add_le_rows([(row.coeffs, row.rhs)
                         for row in artifact.model.constraints[before:]])


@dataclass
class SeparationRun:
    result: simplex.LpResult
    rounds: int
    objective_values: list[float] = field(default_factory=list)
    cuts_per_round: list[int] = field(default_factory=list)
    evaluations: int = 0


def iterate_bqp_separation(artifact: RelaxationArtifact,
                           partition: CoverPartition, n: int,
                           max_rounds: int = MAX_ROUNDS,
                           rel_stop: float = REL_STOP,
                           tol: float = VIOLATION_TOL,
                           cap: int = BQP_CAP_PER_ROUND,
                           session: simplex.IncrementalLp | None = None,
                           ) -> SeparationRun:
    """Solve; separate BQP cuts at the optimum; append and re-solve.

    Stops when no cut is violated, when the objective moved by less than
    ``rel_stop * |v_new|``, or after ``max_rounds`` rounds.  Without a
    ``session`` the artifact is left untouched (cuts go to a copy); with
    one the caller accepts in-place growth of ``artifact.model`` in
    exchange for warm-started re-solves.
    """
    assert artifact.kind is RelaxationKind.COVER
    work = artifact if session is not None else artifact.copy()
    inc = session if session is not None else simplex.IncrementalLp(work.model)
    seen: set = set()
    run = SeparationRun(result=None, rounds=0)
    prev = None
    while run.rounds < max_rounds:
        res = inc.result
        run.rounds += 1
        run.result = res
        if res.status is not simplex.LpStatus.OPTIMAL:
            break
        run.objective_values.append(res.value)
        if prev is not None and abs(prev - res.value) < rel_stop * abs(res.value):
            break
        prev = res.value
        if run.rounds == max_rounds:
            break
        point = work.expand_assignment(res.assignment)
        scan = bqp_violated_cuts(point, partition, n, tol, cap)
        run.evaluations += scan.evaluations
        before = len(work.model.constraints)
        added = append_cuts_inplace(work, scan.cuts, seen)
        run.cuts_per_round.append(added)
        if added == 0:
            break
        inc.add_le_rows([(row.coeffs, row.rhs)
                         for row in work.model.constraints[before:]])
    return run
