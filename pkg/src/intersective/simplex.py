"""Dense two-phase tableau simplex, generic over exact rationals and floats.

One algorithm, two scalar lanes: exact rationals (numpy object arrays of
Fraction, zero tolerances) and float64.  The default pivot rule is Dantzig
entering with the lexicographic leaving rule, which is anti-cycling for any
entering rule (the comparison uses the B^-1 block that the initial identity
columns carry through the tableau); the lambda LPs are massively degenerate
and stall for tens of thousands of pivots under pure least-index selection,
so Bland's rule is kept only as an opt-in alternative.  Duals are read off
the final tableau from the initial-identity columns, so every optimal
solution ships with a full dual vector for certificate extraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

FREE, NONNEG, NONPOS = "free", ">=0", "<=0"

_MAX_PIVOTS = 500_000
_EPS = 1e-9  # float-lane pivot/entering threshold
_REFRESH_EVERY = 3000  # float lane: rebuild the tableau from original data
_GOLDEN = 0.6180339887498949


class SimplexError(RuntimeError):
    """Internal solver failure (stall, or exact-mode certification bug)."""


@dataclass
class LPRow:
    coeffs: np.ndarray
    rel: str  # '=', '>=', '<='
    rhs: object


@dataclass
class LinearProgram:
    """minimize objective . x  subject to rows and per-variable sign bounds."""

    objective: np.ndarray
    rows: list
    var_signs: Sequence[str]
    kind: str  # 'fraction' | 'float'

    @property
    def n_vars(self) -> int:
        return len(self.var_signs)


@dataclass
class LPSolution:
    status: str  # 'optimal' | 'infeasible' | 'unbounded'
    x: Optional[np.ndarray] = None
    duals: Optional[np.ndarray] = None
    objective_value: object = None
    certified: bool = False
    max_residual: float = 0.0
    pivots: int = 0


def _scalar(kind: str, v) -> object:
    return Fraction(v) if kind == "fraction" else float(v)


def _vector(kind: str, values) -> np.ndarray:
    if kind == "fraction":
        return np.array(
            [Fraction(v) for v in np.asarray(values, dtype=object).ravel()], dtype=object
        )
    return np.asarray(values, dtype=np.float64)


def _zeros(kind: str, n: int) -> np.ndarray:
    if kind == "fraction":
        return np.array([Fraction(0)] * n, dtype=object)
    return np.zeros(n, dtype=np.float64)


class _Tableau:
    def __init__(self, kind: str, T: np.ndarray, basis: list, idcols: list, rule: str):
        self.kind = kind
        self.exact = kind == "fraction"
        self.T = T
        # pristine copy for float-lane refactorization; drift across thousands
        # of dense pivots otherwise grows past the certification tolerance
        self.T0 = None if self.exact else T.copy()
        self.phase_costs = None
        self.basis = basis
        self.idcols = np.asarray(idcols, dtype=np.int64)
        self.rule = rule
        self.pivots = 0

    def refresh(self, z: np.ndarray) -> bool:
        """Rebuild the tableau and reduced costs from original data."""
        if self.T0 is None or self.phase_costs is None:
            return False
        B = self.T0[:, self.basis]
        try:
            fresh = np.linalg.solve(B, self.T0)
            y = np.linalg.solve(B.T, self.phase_costs[self.basis])
        except np.linalg.LinAlgError:  # pragma: no cover - drifted basis
            return False
        if not np.all(np.isfinite(fresh)):  # pragma: no cover
            return False
        self.T = fresh
        z[:] = self.phase_costs - self.T0.T @ y
        z[self.basis] = 0.0
        return True

    def pivot(self, r: int, j: int) -> None:
        T = self.T
        piv = T[r, j]
        T[r] = T[r] / piv
        col = T[:, j].copy()
        col[r] = _scalar(self.kind, 0)
        T -= np.outer(col, T[r])
        self.basis[r] = j
        self.pivots += 1
        if self.pivots > _MAX_PIVOTS:
            raise SimplexError("pivot limit exceeded")

    def pivot_with_z(self, z: np.ndarray, r: int, j: int) -> None:
        zj = z[j]
        self.pivot(r, j)
        if zj != 0:
            z -= zj * self.T[r]

    def _entering(self, z: np.ndarray, enterable: np.ndarray) -> int:
        total = len(enterable)
        if self.exact:
            best, jbest = 0, -1
            for c in range(total):
                zc = z[c]
                if enterable[c] and zc < 0:
                    if self.rule == "bland":
                        return c
                    if zc < best:
                        best, jbest = zc, c
            return jbest
        zz = np.where(enterable, z[:total], 0.0)
        if self.rule == "bland":
            neg = np.nonzero(zz < -_EPS)[0]
            return int(neg[0]) if len(neg) else -1
        j = int(np.argmin(zz))
        return j if zz[j] < -_EPS else -1

    def _leaving(self, j: int) -> int:
        T, basis = self.T, self.basis
        m = T.shape[0]
        if self.exact:
            ties: list[int] = []
            best = None
            for i in range(m):
                a = T[i, j]
                if a > 0:
                    ratio = T[i, -1] / a
                    if best is None or ratio < best:
                        best, ties = ratio, [i]
                    elif ratio == best:
                        ties.append(i)
            if best is None:
                return -1
            if len(ties) == 1:
                return ties[0]
            if self.rule == "bland":
                return min(ties, key=lambda i: basis[i])
            return min(ties, key=lambda i: tuple(T[i, self.idcols] / T[i, j]))
        col = T[:m, j]
        mask = col > _EPS
        if not mask.any():
            return -1
        ratios = np.full(m, np.inf)
        ratios[mask] = T[mask, -1] / col[mask]
        best = ratios.min()
        ties = np.nonzero(ratios <= best + 1e-12 * (1.0 + abs(best)))[0]
        if len(ties) == 1:
            return int(ties[0])
        if self.rule == "bland":
            basis_arr = np.asarray(basis)
            return int(ties[np.argmin(basis_arr[ties])])
        sub = T[np.ix_(ties, self.idcols)] / col[ties, None]
        order = np.lexsort(sub.T[::-1])
        return int(ties[order[0]])

    def run(self, z: np.ndarray, enterable: np.ndarray) -> str:
        since_refresh = 0
        while True:
            j = self._entering(z, enterable)
            if j < 0:
                # confirm optimality on refreshed data before declaring it
                if since_refresh > 0 and self.refresh(z):
                    since_refresh = 0
                    j = self._entering(z, enterable)
                    if j < 0:
                        return "optimal"
                else:
                    return "optimal"
            r = self._leaving(j)
            if r < 0:
                # confirm the ray on refreshed data; drift can fake one
                if since_refresh > 0 and self.refresh(z):
                    since_refresh = 0
                    continue
                return "unbounded"
            self.pivot_with_z(z, r, j)
            since_refresh += 1
            if since_refresh >= _REFRESH_EVERY and self.refresh(z):
                since_refresh = 0


def solve_lp(
    prog: LinearProgram, rule: str = "dantzig-lex", perturb: float = 0.0
) -> LPSolution:
    """Solve; `perturb` (float lane only) relaxes each zero-rhs inequality by
    a distinct amount <= perturb, which splits the degenerate vertices these
    spectrum LPs are full of.  Certification always runs against the original
    unperturbed rows, so the returned residuals account for the shift."""
    if rule not in ("dantzig-lex", "bland"):
        raise ValueError(f"unknown pivot rule {rule!r}")
    kind = prog.kind
    exact = kind == "fraction"
    if exact:
        perturb = 0.0
    nv = prog.n_vars
    m = len(prog.rows)

    # column layout: structural columns (split/negated per variable sign),
    # then slacks, then artificials; the final tableau column is the rhs
    col_map: list[list] = []
    ncols = 0
    for s in prog.var_signs:
        if s == NONNEG:
            col_map.append([(ncols, 1)])
            ncols += 1
        elif s == NONPOS:
            col_map.append([(ncols, -1)])
            ncols += 1
        elif s == FREE:
            col_map.append([(ncols, 1), (ncols + 1, -1)])
            ncols += 2
        else:
            raise ValueError(f"unknown variable sign {s!r}")
    n_struct = ncols

    rows_a, rows_b, row_sign, slack_sign = [], [], [], []
    for ri, r in enumerate(prog.rows):
        coeffs = _vector(kind, r.coeffs)
        rhs = _scalar(kind, r.rhs)
        sgn, rel = 1, r.rel
        if perturb and rhs == 0 and rel != "=":
            eps_i = perturb * (0.5 + (ri * _GOLDEN) % 1.0)
            rhs = -eps_i if rel == ">=" else eps_i
        if rhs < 0:
            coeffs, rhs, sgn = -coeffs, -rhs, -1
            rel = {"=": "=", ">=": "<=", "<=": ">="}[rel]
        if rel == ">=" and rhs == 0:
            # flipping makes the slack usable as the initial basis
            coeffs, sgn, rel = -coeffs, -sgn, "<="
        row = _zeros(kind, n_struct)
        for j in range(nv):
            cj = coeffs[j]
            if cj != 0:
                for col, s in col_map[j]:
                    row[col] = cj if s > 0 else -cj
        rows_a.append(row)
        rows_b.append(rhs)
        row_sign.append(sgn)
        slack_sign.append({"=": 0, ">=": -1, "<=": 1}[rel])

    n_slack = sum(1 for s in slack_sign if s != 0)
    need_art = [s != 1 for s in slack_sign]
    art_start = n_struct + n_slack
    total = art_start + sum(need_art)

    T = _zeros(kind, m * (total + 1)).reshape(m, total + 1)
    basis = [-1] * m
    dual_col = [0] * m
    art_rows = []
    sc, ac = n_struct, art_start
    for i in range(m):
        T[i, :n_struct] = rows_a[i]
        T[i, -1] = rows_b[i]
        if slack_sign[i] != 0:
            T[i, sc] = _scalar(kind, slack_sign[i])
            dual_col[i] = sc
            if slack_sign[i] == 1:
                basis[i] = sc
            sc += 1
        if need_art[i]:
            T[i, ac] = _scalar(kind, 1)
            basis[i] = ac
            dual_col[i] = ac
            art_rows.append(i)
            ac += 1

    enterable = np.ones(total, dtype=bool)
    enterable[art_start:] = False
    tab = _Tableau(kind, T, basis, dual_col, rule)

    # ---- phase 1: minimize the artificial sum ----
    if art_rows:
        z1 = _zeros(kind, total + 1)
        z1[art_start:total] = _scalar(kind, 1)
        if not exact:
            tab.phase_costs = z1.copy()
        for i in art_rows:
            z1 -= tab.T[i]
        status = tab.run(z1, enterable)
        if status != "optimal":  # pragma: no cover - phase 1 is bounded below
            raise SimplexError("phase 1 did not reach an optimum")
        infeas = -z1[-1]
        b_scale = max([1.0] + [abs(float(b)) for b in rows_b])
        if (exact and infeas != 0) or (not exact and float(infeas) > 1e-8 * b_scale):
            return LPSolution(status="infeasible", pivots=tab.pivots)
        # drive leftover artificials out of the basis; drop redundant rows
        drop = []
        for i in range(tab.T.shape[0]):
            if tab.basis[i] >= art_start:
                piv_col = -1
                for c in range(art_start):
                    a = tab.T[i, c]
                    if (exact and a != 0) or (not exact and abs(a) > _EPS):
                        piv_col = c
                        break
                if piv_col >= 0:
                    tab.pivot_with_z(z1, i, piv_col)
                else:
                    drop.append(i)
        if drop:
            keep = [i for i in range(tab.T.shape[0]) if i not in drop]
            tab.T = tab.T[keep]
            tab.basis = [tab.basis[i] for i in keep]
            if tab.T0 is not None:
                tab.T0 = tab.T0[keep]

    # ---- phase 2 ----
    c_obj = _vector(kind, prog.objective)
    z2 = _zeros(kind, total + 1)
    for j in range(nv):
        cj = c_obj[j]
        if cj != 0:
            for col, s in col_map[j]:
                z2[col] = cj if s > 0 else -cj
    if not exact:
        tab.phase_costs = z2.copy()
    for i in range(tab.T.shape[0]):
        bc = tab.basis[i]
        if bc >= 0 and z2[bc] != 0:
            z2 -= z2[bc] * tab.T[i]
    status = tab.run(z2, enterable)
    if status == "unbounded":
        return LPSolution(status="unbounded", pivots=tab.pivots)

    # ---- extraction ----
    x_struct = _zeros(kind, total)
    for i in range(tab.T.shape[0]):
        x_struct[tab.basis[i]] = tab.T[i, -1]
    x = _zeros(kind, nv)
    for j in range(nv):
        acc = _scalar(kind, 0)
        for col, s in col_map[j]:
            acc = acc + (x_struct[col] if s > 0 else -x_struct[col])
        x[j] = acc
    duals = _zeros(kind, m)
    for i in range(m):
        duals[i] = -z2[dual_col[i]] * row_sign[i]

    sol = LPSolution(
        status="optimal",
        x=x,
        duals=duals,
        objective_value=-z2[-1],
        pivots=tab.pivots,
    )
    _certify(prog, sol)
    return sol


def _certify(prog: LinearProgram, sol: LPSolution) -> None:
    """Primal/dual feasibility, complementary slackness, duality gap."""
    kind = prog.kind
    x, y = sol.x, sol.duals
    c = _vector(kind, prog.objective)
    zero = _scalar(kind, 0)
    worst = zero

    def bad(v):
        nonlocal worst
        if v > worst:
            worst = v

    dual_obj = zero
    reduced = c.copy()
    for i, row in enumerate(prog.rows):
        a = _vector(kind, row.coeffs)
        act = a @ x
        rhs = _scalar(kind, row.rhs)
        if row.rel == "=":
            bad(abs(act - rhs))
        elif row.rel == ">=":
            bad(max(rhs - act, zero))
            bad(max(-y[i], zero))
        else:
            bad(max(act - rhs, zero))
            bad(max(y[i], zero))
        bad(abs(y[i] * (act - rhs)))
        dual_obj = dual_obj + y[i] * rhs
        reduced = reduced - y[i] * a
    for j, s in enumerate(prog.var_signs):
        if s == NONNEG:
            bad(max(-x[j], zero))
            bad(max(-reduced[j], zero))
        elif s == NONPOS:
            bad(max(x[j], zero))
            bad(max(reduced[j], zero))
        else:
            bad(abs(reduced[j]))
        bad(abs(x[j] * reduced[j]))
    bad(abs(sol.objective_value - dual_obj))

    sol.max_residual = float(worst)
    if kind == "fraction":
        if worst != 0:
            raise SimplexError("exact-mode certificate failed; solver bug")
        sol.certified = True
    else:
        sol.certified = float(worst) <= 1e-8 * max(1.0, abs(float(sol.objective_value)))
