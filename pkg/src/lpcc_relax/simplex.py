"""Self-contained dense LP solver: two-phase primal simplex.

Dantzig pricing with a switch to Bland's rule after a run of degenerate
pivots; all tie-breaks are by lowest index, so the pivot sequence (and the
returned assignment) is a deterministic function of the model.

A dual-simplex re-optimizer (:class:`IncrementalLp`) supports cutting-plane
loops: after the initial primal solve, appended ``<=`` rows enter with their
slack basic and a handful of dual pivots restore optimality instead of a
cold re-solve.

Tolerances: feasibility 1e-7, pivot 1e-9, degeneracy detection 1e-10.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import Direction, LinearModel, Sense

FEAS_TOL = 1e-7
PIVOT_TOL = 1e-9
# minimum magnitude for a ratio-test pivot entry: anything smaller is
# indistinguishable from accumulated roundoff in redundant rows, and
# pivoting on it drags a linearly dependent column into the basis
PIVOT_FLOOR = 1e-7
DEGEN_TOL = 1e-10
BLAND_AFTER = 5_000
MAX_ITER = 200_000
REFACTOR_EVERY = 300


class NumericalBreakdown(RuntimeError):
    """Pivoting could not make progress even under Bland's rule."""


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LpResult:
    status: LpStatus
    value: float | None = None
    assignment: dict[str, float] | None = None
    iterations: int = 0


@dataclass
class _ColMap:
    """How one standard-form column maps back to a model variable."""

    name: str
    shift: float  # x_model = shift + sign * x_std
    sign: float


@dataclass
class StandardForm:
    """min c.x  s.t.  rows (<=|>=|=) rhs,  x >= 0, produced from a LinearModel."""

    A: np.ndarray
    rhs: np.ndarray
    senses: list[Sense]
    c: np.ndarray
    cols: list[_ColMap]
    col_of: dict[str, list[tuple[int, float]]]
    const: float  # objective constant from bound shifts
    flip: float   # +1 if model minimizes, -1 if it maximizes

    @staticmethod
    def from_model(model: LinearModel) -> "StandardForm":
        cols: list[_ColMap] = []
        col_of: dict[str, list[tuple[int, float]]] = {}
        extra_rows: list[tuple[dict[int, float], Sense, float]] = []

        for name, lo, hi in model.variables:
            if lo == -math.inf and hi == math.inf:
                # free: split into positive and negative parts
                col_of[name] = [(len(cols), 1.0), (len(cols) + 1, -1.0)]
                cols.append(_ColMap(name, 0.0, 1.0))
                cols.append(_ColMap(name, 0.0, -1.0))
            elif lo == -math.inf:
                # only an upper bound: mirror around it
                col_of[name] = [(len(cols), -1.0)]
                cols.append(_ColMap(name, hi, -1.0))
            else:
                col_of[name] = [(len(cols), 1.0)]
                cols.append(_ColMap(name, lo, 1.0))
                if hi != math.inf and hi > lo:
                    extra_rows.append(({len(cols) - 1: 1.0}, Sense.LE, hi - lo))
                elif hi == lo:
                    extra_rows.append(({len(cols) - 1: 1.0}, Sense.EQ, 0.0))

        nrows = len(model.constraints) + len(extra_rows)
        ncols = len(cols)
        A = np.zeros((nrows, ncols))
        rhs = np.zeros(nrows)
        senses: list[Sense] = []
        for r, con in enumerate(model.constraints):
            b = con.rhs
            for name, coef in con.coeffs.items():
                for (ci, s) in col_of[name]:
                    A[r, ci] += coef * s
                # x_model = shift + sign * x_std, shift shared by split columns
                b -= coef * cols[col_of[name][0][0]].shift
            rhs[r] = b
            senses.append(con.sense)
        for k, (coeffs, sense, b) in enumerate(extra_rows):
            r = len(model.constraints) + k
            for ci, coef in coeffs.items():
                A[r, ci] = coef
            rhs[r] = b
            senses.append(sense)

        flip = 1.0 if model.direction is Direction.MIN else -1.0
        c = np.zeros(ncols)
        const = 0.0
        for name, coef in model.objective.items():
            cm = cols[col_of[name][0][0]]
            const += coef * cm.shift
            for (ci, s) in col_of[name]:
                c[ci] += flip * coef * s
        return StandardForm(A, rhs, senses, c, cols, col_of, const, flip)


def _pivot(T: np.ndarray, basis: np.ndarray, row: int, col: int,
           buf: np.ndarray | None = None) -> None:
    T[row] /= T[row, col]
    colvals = T[:, col].copy()
    colvals[row] = 0.0
    nz = np.nonzero(colvals)[0]
    if nz.size * 8 < T.shape[0]:
        # block-structured models often have very sparse entering columns;
        # touching only those rows beats a full-tableau rank-1 update
        T[nz] -= colvals[nz, None] * T[row]
    elif buf is not None and buf.shape == T.shape:
        np.multiply(colvals[:, None], T[row][None, :], out=buf)
        np.subtract(T, buf, out=T)
    else:
        T -= colvals[:, None] * T[row]
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


class _Session:
    """One standard-form tableau plus its anti-drift machinery.

    Owns the two-phase primal solve and, for cutting-plane callers, a dual
    re-optimization entry point after ``<=`` rows are appended.
    """

    def __init__(self, model: LinearModel, refactor_every: int,
                 bland_start: bool, perturb: float = 0.0):
        self.model = model
        self.refactor_every = refactor_every
        self.bland_start = bland_start
        sf = StandardForm.from_model(model)
        self.sf = sf
        m, n_struct = sf.A.shape

        # orient rows so rhs >= 0
        A = sf.A.copy()
        b = sf.rhs.copy()
        senses = list(sf.senses)
        for r in range(m):
            if b[r] < 0:
                A[r] *= -1.0
                b[r] *= -1.0
                if senses[r] is Sense.LE:
                    senses[r] = Sense.GE
                elif senses[r] is Sense.GE:
                    senses[r] = Sense.LE

        # slack / surplus / artificial columns
        slack_cols: list[np.ndarray] = []
        art_rows: list[int] = []
        basis = np.full(m, -1, dtype=int)
        for r in range(m):
            if senses[r] is Sense.LE:
                col = np.zeros(m)
                col[r] = 1.0
                basis[r] = n_struct + len(slack_cols)
                slack_cols.append(col)
            elif senses[r] is Sense.GE:
                col = np.zeros(m)
                col[r] = -1.0
                slack_cols.append(col)
                art_rows.append(r)
            else:
                art_rows.append(r)
        n_slack = len(slack_cols)
        self.n_art = n_art = len(art_rows)
        self.n_struct = n_struct
        self.n_slack = n_slack
        self.m = m
        self.ncols = ncols = n_struct + n_slack + n_art

        T = np.zeros((m + 1, ncols + 1))
        T[:m, :n_struct] = A
        if n_slack:
            T[:m, n_struct:n_struct + n_slack] = np.column_stack(slack_cols)
        for k, r in enumerate(art_rows):
            T[r, n_struct + n_slack + k] = 1.0
            basis[r] = n_struct + n_slack + k
        T[:m, -1] = b
        self.T = T
        self.basis = basis
        self.fullA = T[:m, :ncols].copy()
        self.b = b
        assert (basis >= 0).all()

        self.allowed = np.ones(ncols, dtype=bool)
        self._buf = np.empty_like(self.T)
        self.iters = 0
        self.feas_tol = FEAS_TOL * max(1.0, float(np.abs(b).max(initial=0.0)))
        self.cost2: np.ndarray | None = None

        # optional anti-degeneracy rhs perturbation: block-structured
        # models carry hundreds of zero-rhs rows, and the resulting ties in
        # the ratio test make the plain simplex stall or cycle.  Nudging
        # every inequality rhs outward by a distinct tiny amount makes the
        # vertices generic; the perturbed region contains the true one (so
        # an infeasibility verdict still stands), and after the primal
        # solve the exact rhs is swapped back in and dual pivots repair
        # the handful of basic values that drifted out of range.
        self.b_true = b
        self.perturbed = perturb > 0.0
        if self.perturbed:
            u = np.random.default_rng(20260823).uniform(0.5, 1.5, m)
            eps = perturb * np.maximum(1.0, b) * u
            bp = b.copy()
            for r in range(m):
                if senses[r] is Sense.LE:
                    bp[r] += eps[r]
                elif senses[r] is Sense.GE and b[r] > eps[r]:
                    bp[r] -= eps[r]
            self.b = bp
            T[:m, -1] = bp

    # -- anti-drift core ---------------------------------------------------

    def _refactor(self, cost: np.ndarray) -> float:
        """Rebuild the tableau exactly from the original data for the current
        basis, wiping out accumulated floating-point drift.  Returns the most
        negative basic value (primal feasibility indicator)."""
        T, basis, ncols, m = self.T, self.basis, self.ncols, self.m
        B = self.fullA[:, basis]
        try:
            sol = np.linalg.solve(B, np.column_stack([self.fullA, self.b]))
        except np.linalg.LinAlgError as exc:
            raise NumericalBreakdown(f"singular basis: {exc}") from exc
        if not np.all(np.isfinite(sol)):
            raise NumericalBreakdown("non-finite refactorization")
        T[:m, :ncols] = sol[:, :ncols]
        T[:m, -1] = sol[:, -1]
        cb = cost[basis]
        T[-1, :ncols] = cost - cb @ T[:m, :ncols]
        T[-1, basis] = 0.0
        T[-1, -1] = -float(cb @ T[:m, -1])
        return float(T[:m, -1].min(initial=0.0))

    # -- primal ------------------------------------------------------------

    def _primal_phase(self, budget: int, state: dict) -> tuple[str, int]:
        """Drive the objective row toward optimality.  Returns
        (status, steps) with status "optimal", "unbounded", or "paused" when
        ``budget`` pivots were spent (the caller refactorizes and resumes;
        ``state`` carries the anti-cycling counters across such pauses).

        Pricing is Devex (reference weights reset on refactorization),
        which keeps the pivot count manageable on the heavily degenerate
        block-structured models; Bland's rule takes over as usual when a
        degenerate run gets long."""
        T, basis, ncols, m = self.T, self.basis, self.ncols, self.m
        degenerate = state.get("degenerate", 0)
        bland = state.get("bland", False)
        gamma = state.get("gamma")
        if gamma is None or gamma.shape[0] != ncols:
            gamma = np.ones(ncols)
        steps = 0
        drift = 1.0  # worst-case roundoff amplification since last refactor
        while True:
            if self.iters > MAX_ITER:
                raise NumericalBreakdown(f"iteration limit {MAX_ITER} exceeded")
            if steps >= budget:
                state.update(degenerate=degenerate, bland=bland, gamma=gamma)
                return "paused", steps
            obj = T[-1, :ncols]
            cand = np.where(self.allowed[:ncols] & (obj < -PIVOT_TOL))[0]
            if cand.size == 0:
                state.update(degenerate=degenerate, bland=bland, gamma=gamma)
                return "optimal", steps
            if bland:
                col = int(cand[0])
            else:
                col = int(cand[np.argmax(obj[cand] ** 2 / gamma[cand])])
            colvec = T[:m, col]
            pos = np.where(colvec > PIVOT_TOL)[0]
            if pos.size == 0:
                if obj[col] >= -self.feas_tol:
                    # reduced cost within dual tolerance of zero and no
                    # pivotable entry: a numerically null column, not a
                    # ray -- drop it from this pass, never call it a ray
                    T[-1, col] = 0.0
                    continue
                state.update(degenerate=degenerate, bland=bland, gamma=gamma)
                return "unbounded", steps
            # clamp tiny negative basic values (roundoff) so drift cannot
            # push the ratio test toward a backward step
            rhspos = np.maximum(T[pos, -1], 0.0)
            ratios = rhspos / colvec[pos]
            best = np.min(ratios)
            if bland:
                # anti-cycling needs the lowest basis index among *all*
                # tied rows; a stability filter here would break the
                # termination guarantee
                ties = pos[np.where(ratios <= best + DEGEN_TOL)[0]]
                row = int(ties[np.argmin(basis[ties])])
            else:
                # two-pass (Harris-style) ratio test: bound the step by the
                # tolerance-relaxed ratios over *every* positive entry,
                # then pick the largest pivot among rows whose strict
                # ratio fits under that bound -- each basic value then
                # dips below zero by at most the feasibility tolerance
                tmax = np.min((rhspos + self.feas_tol) / colvec[pos])
                elig = np.where(ratios <= tmax)[0]
                piv = colvec[pos[elig]]
                big = elig[piv >= 0.5 * piv.max()]
                rows_ = pos[big]
                row = int(rows_[np.argmin(basis[rows_])])
            # small pivots amplify roundoff by roughly max|column|/|pivot|;
            # they are sometimes unavoidable, so instead of forbidding them
            # track the worst-case amplification accumulated since the last
            # refactorization and cut the stretch short before the damage
            # can reach the feasibility tolerance
            amp = float(np.abs(colvec).max()) / max(abs(T[row, col]), 1e-300)
            if amp >= 1e2:
                drift *= amp
            force_refactor = colvec[row] < PIVOT_FLOOR or drift >= 1e6
            if abs(T[row, col]) < 1e-11:
                if bland:
                    raise NumericalBreakdown("pivot magnitude below 1e-11")
                bland = True
                continue
            if best < DEGEN_TOL:
                degenerate += 1
                if degenerate >= BLAND_AFTER:
                    bland = True
            else:
                degenerate = 0
            arq = T[row, col]
            ratio = T[row, :ncols] / arq
            np.maximum(gamma, ratio * ratio * gamma[col], out=gamma)
            gamma[basis[row]] = max(gamma[col] / (arq * arq), 1.0)
            np.minimum(gamma, 1e12, out=gamma)
            _pivot(T, basis, row, col, self._buf)
            self.iters += 1
            steps += 1
            if force_refactor:
                state.update(degenerate=degenerate, bland=bland, gamma=gamma)
                return "paused", steps

    def _drive(self, cost: np.ndarray) -> str:
        """Pivot to optimality with periodic exact refactorization; a claimed
        optimum only stands if it survives a refactorized objective row."""
        state: dict = {"bland": self.bland_start}
        while True:
            worst = self._refactor(cost)
            # tolerance-sized dips below zero are normal (the ratio test
            # permits them and the final dual clean-up removes them); only
            # runaway infeasibility means the pivoting went off the rails
            if worst < -1e4 * self.feas_tol:
                raise NumericalBreakdown(
                    f"basis lost primal feasibility ({worst:.3e})")
            status, steps = self._primal_phase(self.refactor_every, state)
            if status == "paused":
                continue
            if status == "unbounded":
                if steps == 0:  # verdict from a freshly refactored tableau
                    return "unbounded"
                continue
            self._refactor(cost)
            obj = self.T[-1, :self.ncols]
            if not (self.allowed[:self.ncols] & (obj < -PIVOT_TOL)).any():
                return "optimal"

    def primal_solve(self) -> LpResult:
        """Two-phase solve from the all-slack / artificial start."""
        ns = self.n_struct + self.n_slack
        if self.n_art:
            cost1 = np.zeros(self.ncols)
            cost1[ns:] = 1.0
            if self._drive(cost1) != "optimal":  # bounded below by 0
                raise NumericalBreakdown("phase-1 reported unbounded")
            if self.T[-1, -1] < -FEAS_TOL:
                return LpResult(LpStatus.INFEASIBLE, iterations=self.iters)
            # drive remaining artificials out of the basis where possible; a
            # row with no pivotable entry is redundant and keeps its
            # artificial basic at zero (masked from ever re-entering)
            for r in range(self.m):
                if self.basis[r] >= ns:
                    rowvec = self.T[r, :ns].copy()
                    # redundant rows are all-zero up to roundoff; pivoting
                    # on that noise would hand phase 2 a near-singular
                    # basis, so demand a clearly nonzero entry
                    rowvec[np.abs(rowvec) <= 1e-7] = 0.0
                    piv = float(np.max(np.abs(rowvec)))
                    # the artificial sits at a near-zero value; dividing
                    # the row by the pivot turns that residue into the new
                    # rhs, so only swap when the result stays within the
                    # feasibility tolerance -- otherwise the (masked)
                    # artificial simply stays basic at its tiny value
                    if piv > 0.0 and \
                            abs(self.T[r, -1]) <= self.feas_tol * piv:
                        _pivot(self.T, self.basis, r,
                               int(np.argmax(np.abs(rowvec))))
                        self.iters += 1
            self.allowed[ns:] = False

        cost2 = np.zeros(self.ncols)
        cost2[:self.n_struct] = self.sf.c
        self.cost2 = cost2
        if self._drive(cost2) == "unbounded":
            if self.perturbed:
                # an enlarged region can look unbounded while the true one
                # is empty; let an unperturbed retry sort the verdict out
                raise NumericalBreakdown("unbounded under rhs perturbation")
            return LpResult(LpStatus.UNBOUNDED, iterations=self.iters)
        # final clean-up against the exact rhs: the basis is dual feasible,
        # so dual pivots remove both the perturbation (if any) and any
        # tolerance-sized dips the ratio test allowed -- or prove that the
        # unperturbed problem is infeasible after all
        self.b = self.b_true
        self.perturbed = False
        if self._dual_drive(cost2) == "infeasible":
            return LpResult(LpStatus.INFEASIBLE, iterations=self.iters)
        return self._extract()

    def _extract(self) -> LpResult:
        # weak-duality certificate on the refactorized tableau
        obj = self.T[-1, :self.ncols]
        assert np.all(obj[self.allowed[:self.ncols]] >= -self.feas_tol)

        xstd = np.zeros(self.ncols)
        xstd[self.basis] = self.T[:self.m, -1]
        assignment: dict[str, float] = {name: 0.0
                                        for name, _, _ in self.model.variables}
        for ci, cm in enumerate(self.sf.cols):
            assignment[cm.name] += cm.sign * float(xstd[ci])
        # apply shifts once per variable (shift is shared across split columns)
        shifted: set[str] = set()
        for cm in self.sf.cols:
            if cm.name not in shifted:
                assignment[cm.name] += cm.shift
                shifted.add(cm.name)

        value = float(self.model.objective_value(assignment))
        return LpResult(LpStatus.OPTIMAL, value=value, assignment=assignment,
                        iterations=self.iters)

    # -- dual re-optimization after appended <= rows -------------------------

    def add_le_rows(self, rows: list[tuple[dict[str, float], float]]) -> LpResult:
        """Append ``<=`` rows with their slacks basic (possibly at negative
        values) and run dual simplex back to optimality."""
        if self.cost2 is None:
            raise NumericalBreakdown("no optimal basis to warm-start from")
        k = len(rows)
        m_old, nc_old = self.m, self.ncols
        newA = np.zeros((m_old + k, nc_old + k))
        newA[:m_old, :nc_old] = self.fullA
        newb = np.concatenate([self.b, np.zeros(k)])
        for t, (coeffs, rhs) in enumerate(rows):
            r = m_old + t
            acc = rhs
            for name, coef in coeffs.items():
                maps = self.sf.col_of[name]
                acc -= coef * self.sf.cols[maps[0][0]].shift
                for ci, s in maps:
                    newA[r, ci] += coef * s
            newA[r, nc_old + t] = 1.0
            newb[r] = acc
        self.fullA = newA
        self.b = newb
        self.m += k
        self.ncols += k
        self.basis = np.concatenate(
            [self.basis, np.arange(nc_old, nc_old + k)])
        self.allowed = np.concatenate(
            [self.allowed, np.ones(k, dtype=bool)])
        self.cost2 = np.concatenate([self.cost2, np.zeros(k)])
        self.T = np.zeros((self.m + 1, self.ncols + 1))
        self._buf = np.empty_like(self.T)
        self.feas_tol = FEAS_TOL * max(
            1.0, float(np.abs(self.b).max(initial=0.0)))

        # a deterministically perturbed cost breaks the heavy dual
        # degeneracy of these models (many reduced costs tie at zero);
        # a short primal drive with the true cost then polishes the basis
        rng = np.random.default_rng(12345)
        jitter = 1e-7 * (1.0 + np.abs(self.cost2)) * rng.uniform(
            0.5, 1.5, self.ncols)
        jitter[self.basis] = 0.0  # keep the starting basis dual feasible
        status = self._dual_drive(self.cost2 + jitter)
        if status == "infeasible":
            return LpResult(LpStatus.INFEASIBLE, iterations=self.iters)
        if self._drive(self.cost2) == "unbounded":
            raise NumericalBreakdown("unbounded after appending <= rows")
        return self._extract()

    def _dual_phase(self, budget: int, state: dict) -> tuple[str, int]:
        """Dual pivots: restore primal feasibility while reduced costs stay
        nonnegative.  Status "optimal", "infeasible", or "paused"."""
        T, basis, ncols, m = self.T, self.basis, self.ncols, self.m
        degenerate = state.get("degenerate", 0)
        bland = state.get("bland", False)
        delta = state.get("delta")
        if delta is None or delta.shape[0] != m:
            delta = np.ones(m)
        steps = 0
        drift_acc = 1.0  # worst-case amplification since last refactor
        while True:
            if self.iters > MAX_ITER:
                raise NumericalBreakdown(f"iteration limit {MAX_ITER} exceeded")
            if steps >= budget:
                state.update(degenerate=degenerate, bland=bland, delta=delta)
                return "paused", steps
            rhs = T[:m, -1]
            neg = np.where(rhs < -self.feas_tol)[0]
            if neg.size == 0:
                state.update(degenerate=degenerate, bland=bland, delta=delta)
                return "optimal", steps
            if bland:
                # anti-cycling: lowest basis index among violated rows
                row = int(neg[np.argmin(basis[neg])])
            else:
                # Devex-weighted row choice (dual pricing)
                row = int(neg[np.argmax(rhs[neg] ** 2 / delta[neg])])
            rowvec = T[row, :ncols]
            cand = np.where(self.allowed[:ncols] & (rowvec < -PIVOT_TOL))[0]
            if cand.size == 0:
                state.update(degenerate=degenerate, bland=bland, delta=delta)
                return "infeasible", steps
            obj = T[-1, :ncols]
            # clamp tiny negative reduced costs (roundoff) in the ratio test
            ratios = np.maximum(obj[cand], 0.0) / (-rowvec[cand])
            best = float(np.min(ratios))
            ties = cand[np.where(ratios <= best + DEGEN_TOL)[0]]
            if bland:
                col = int(ties[0])
            else:
                tie_piv = np.abs(T[row, ties])
                stable = ties[tie_piv >= 0.5 * tie_piv.max()]
                col = int(stable[0])
            # tiny pivots amplify drift; allow them but refactorize before
            # the accumulated worst-case amplification becomes visible
            amp = float(np.abs(T[:m, col]).max()) / \
                max(abs(T[row, col]), 1e-300)
            if amp >= 1e2:
                drift_acc *= amp
            force_refactor = abs(T[row, col]) < PIVOT_FLOOR or \
                drift_acc >= 1e6
            if abs(T[row, col]) < 1e-11:
                if bland:
                    raise NumericalBreakdown("pivot magnitude below 1e-11")
                bland = True
                continue
            if best < DEGEN_TOL:
                degenerate += 1
                if degenerate >= BLAND_AFTER:
                    bland = True
            else:
                degenerate = 0
            arq = T[row, col]
            colratio = T[:m, col] / arq
            np.maximum(delta, colratio * colratio * delta[row], out=delta)
            delta[row] = max(delta[row] / (arq * arq), 1.0)
            np.minimum(delta, 1e12, out=delta)
            _pivot(T, basis, row, col, self._buf)
            self.iters += 1
            steps += 1
            if force_refactor:
                state.update(degenerate=degenerate, bland=bland, delta=delta)
                return "paused", steps

    def _dual_drive(self, cost: np.ndarray) -> str:
        state: dict = {"bland": self.bland_start}
        while True:
            self._refactor(cost)
            obj = self.T[-1, :self.ncols]
            if (obj[self.allowed[:self.ncols]] < -self.feas_tol).any():
                raise NumericalBreakdown("basis lost dual feasibility")
            status, steps = self._dual_phase(self.refactor_every, state)
            if status == "paused":
                continue
            # accept a verdict only off a freshly refactorized tableau
            if steps == 0:
                return status


def _ladder(model: LinearModel):
    # first rung: rhs perturbation against degenerate stalling; later
    # rungs drop it and tighten the refactorization interval (long
    # stretches between refactorizations let drift build up on big
    # tableaus), with Bland's rule from the start as the last resort
    return ((REFACTOR_EVERY, False, 1e-5), (REFACTOR_EVERY, False, 0.0),
            (50, False, 0.0), (10, True, 0.0))


def solve(model: LinearModel) -> LpResult:
    """Solve the model; status-correct, deterministic two-phase simplex.

    On numerical breakdown the solve is retried with progressively more
    conservative settings (tighter refactorization, then Bland's rule from
    the start); the ladder is fixed, so results stay deterministic.
    """
    last: NumericalBreakdown | None = None
    for refactor_every, bland_start, perturb in _ladder(model):
        try:
            return _Session(model, refactor_every, bland_start,
                            perturb).primal_solve()
        except NumericalBreakdown as exc:
            last = exc
    raise last


class IncrementalLp:
    """Cutting-plane helper: solve once, then re-optimize as rows arrive.

    Wraps a :class:`_Session` and falls back to a cold re-solve of the
    (caller-maintained) model whenever warm-started dual simplex breaks
    down, so results always match ``solve(model)`` up to basis ties.
    """

    def __init__(self, model: LinearModel):
        self.model = model
        self._session: _Session | None = None
        self.result = self._cold()

    def _cold(self) -> LpResult:
        last: NumericalBreakdown | None = None
        for refactor_every, bland_start, perturb in _ladder(self.model):
            session = _Session(self.model, refactor_every, bland_start,
                               perturb)
            try:
                res = session.primal_solve()
            except NumericalBreakdown as exc:
                last = exc
                continue
            self._session = session if res.status is LpStatus.OPTIMAL else None
            self.result = res
            return res
        raise last

    def add_le_rows(self, rows: list[tuple[dict[str, float], float]]) -> LpResult:
        """Rows must already be appended to ``self.model`` by the caller."""
        if self._session is None:
            return self._cold()
        try:
            self.result = self._session.add_le_rows(rows)
        except NumericalBreakdown:
            self._session = None
            return self._cold()
        return self.result


# ---------------------------------------------------------------------------
# CPLEX-LP text export


def _fmt(coef: float) -> str:
    return f"{coef:.17g}"


def _render_terms(coeffs: dict[str, float]) -> str:
    parts = []
    for name in sorted(coeffs):
        c = coeffs[name]
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign} {_fmt(abs(c))} {name}")
    if not parts:
        return "0 dummy_zero"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text

def export_lp_file(model: LinearModel, path, binaries: list[str] | None = None) -> None:
    """Write CPLEX-LP format; coefficients carry 17 significant digits."""
    lines = []
    lines.append("Maximize" if model.direction is Direction.MAX else "Minimize")
    lines.append(" obj: " + _render_terms(model.objective))
    lines.append("Subject To")
    for k, con in enumerate(model.constraints):
        op = {"<=": "<=", ">=": ">=", "=": "="}[con.sense.value]
        lines.append(f" c{k + 1}: {_render_terms(con.coeffs)} {op} {_fmt(con.rhs)}")
    lines.append("Bounds")
    for name, lo, hi in model.variables:
        lo_s = "-inf" if lo == -math.inf else _fmt(lo)
        hi_s = "+inf" if hi == math.inf else _fmt(hi)
        lines.append(f" {lo_s} <= {name} <= {hi_s}")
    if binaries:
        lines.append("Binaries")
        for name in binaries:
            lines.append(f" {name}")
    lines.append("End")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
