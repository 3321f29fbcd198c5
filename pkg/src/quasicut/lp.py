"""A small dense primal simplex solver.

Feasibility uses the big-M method with M kept symbolic: every cost is a pair
``(M-part, real part)`` compared lexicographically, which is the limit of a
numeric big-M without its round-off. Pivoting follows Bland's rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .errors import CycleSuspected, Infeasible, Unbounded

LE, GE, EQ = "<=", ">=", "="


@dataclass
class LinearProgram:
    """minimize c @ x subject to rows ``A[k] @ x  (sense[k])  b[k]`` and x >= 0."""

    c: np.ndarray
    A: np.ndarray
    senses: List[str]
    b: np.ndarray
    names: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        self.A = np.asarray(self.A, dtype=float).reshape(-1, self.c.size)
        self.b = np.asarray(self.b, dtype=float)
        if self.A.shape[0] != self.b.size or len(self.senses) != self.b.size:
            raise ValueError("row counts of A, b and senses differ")
        if any(s not in (LE, GE, EQ) for s in self.senses):
            raise ValueError("senses must be '<=', '>=' or '='")
        if not (np.isfinite(self.c).all() and np.isfinite(self.A).all() and np.isfinite(self.b).all()):
            raise ValueError("coefficients must be finite")

    @property
    def num_vars(self) -> int:
        return self.c.size

    def violation(self, x) -> float:
        """Largest constraint or bound violation of ``x``."""
        x = np.asarray(x, dtype=float)
        lhs = self.A @ x
        worst = max(0.0, float(-x.min())) if x.size else 0.0
        for s, a, b in zip(self.senses, lhs, self.b):
            if s == LE:
                worst = max(worst, a - b)
            elif s == GE:
                worst = max(worst, b - a)
            else:
                worst = max(worst, abs(a - b))
        return worst


def solve_lp(lp: LinearProgram, tol: float = 1e-9, max_iter: int = 100_000) -> Tuple[float, np.ndarray]:
    """Optimal ``(value, x)``; raises Infeasible, Unbounded or CycleSuspected."""
    A = lp.A.copy()
    b = lp.b.copy()
    senses = list(lp.senses)
    k, n = A.shape
    for i in range(k):
        if b[i] < 0:
            A[i] *= -1
            b[i] *= -1
            senses[i] = {LE: GE, GE: LE, EQ: EQ}[senses[i]]

    cols = [A]
    basis = [-1] * k
    n_slack = sum(s != EQ for s in senses)
    slack = np.zeros((k, n_slack))
    j = 0
    for i, s in enumerate(senses):
        if s == LE:
            slack[i, j] = 1.0
            basis[i] = n + j
        elif s == GE:
            slack[i, j] = -1.0
        if s != EQ:
            j += 1
    cols.append(slack)
    art_rows = [i for i, s in enumerate(senses) if s != LE]
    art = np.zeros((k, len(art_rows)))
    first_art = n + n_slack
    for a, i in enumerate(art_rows):
        art[i, a] = 1.0
        basis[i] = first_art + a
    cols.append(art)
    full = np.hstack(cols)
    total = full.shape[1]

    cost_r = np.zeros(total)
    cost_r[:n] = lp.c
    cost_m = np.zeros(total)
    cost_m[first_art:] = 1.0

    T = full.copy()
    rhs = b.copy()
    basis = np.array(basis)
    rc_r = cost_r - cost_r[basis] @ T
    rc_m = cost_m - cost_m[basis] @ T
    allowed = np.ones(total, dtype=bool)

    scale = max(1.0, float(np.abs(lp.c).max(initial=0.0)))
    for _ in range(max_iter):
        cand = allowed & ((rc_m < -tol) | ((np.abs(rc_m) <= tol) & (rc_r < -tol * scale)))
        if not cand.any():
            break
        e = int(np.argmax(cand))
        col = T[:, e]
        rows = np.nonzero(col > tol)[0]
        if rows.size == 0:
            if rc_m[e] < -tol:
                raise Infeasible("artificial phase is unbounded")
            raise Unbounded("objective decreases without bound")
        ratios = rhs[rows] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol * max(1.0, abs(best))]
        leave = int(ties[np.argmin(basis[ties])])
        piv = T[leave, e]
        T[leave] /= piv
        rhs[leave] /= piv
        factor = T[:, e].copy()
        factor[leave] = 0.0
        T -= np.outer(factor, T[leave])
        rhs -= factor * rhs[leave]
        rc_r -= rc_r[e] * T[leave]
        rc_m -= rc_m[e] * T[leave]
        out = basis[leave]
        basis[leave] = e
        if out >= first_art:
            allowed[out] = False
    else:
        raise CycleSuspected(f"no optimum after {max_iter} pivots")

    # Re-solve the final basis against the original columns to shed pivot drift.
    xb = np.linalg.solve(full[:, basis], b)
    x_full = np.zeros(total)
    x_full[basis] = xb
    if (x_full[first_art:] > 1e-7).any():
        raise Infeasible("artificial variables remain positive at the optimum")
    x = np.where(np.abs(x_full[:n]) < 1e-12, 0.0, x_full[:n])
    x = np.maximum(x, 0.0)
    return float(lp.c @ x), x
