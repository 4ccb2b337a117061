"""Exact linear programming over rationals: dense two-phase simplex with
Bland's rule. Small and deterministic; every number is a Fraction, so
optimal objective values are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

LE, GE, EQ = "<=", ">=", "=="


class LPError(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple  # dense tuple of Fractions over the structural variables
    rel: str
    rhs: Fraction


def constraint(coeffs, rel: str, rhs, n_vars: int | None = None) -> Constraint:
    """Build a constraint from either a dense sequence or a {index: coeff} map."""
    if rel not in (LE, GE, EQ):
        raise LPError(f"unknown relation {rel!r}")
    if isinstance(coeffs, dict):
        if n_vars is None:
            raise LPError("n_vars required for sparse constraints")
        dense = [Fraction(0)] * n_vars
        for idx, val in coeffs.items():
            dense[idx] = Fraction(val)
    else:
        dense = [Fraction(c) for c in coeffs]
    return Constraint(tuple(dense), rel, Fraction(rhs))


@dataclass(frozen=True)
class LPResult:
    status: str
    objective: Fraction | None
    x: tuple  # structural variable values (Fractions), empty unless optimal


def solve_lp(objective: Sequence, constraints: Sequence[Constraint]) -> LPResult:
    """Minimize objective . x subject to the constraints and x >= 0."""
    c_obj = [Fraction(c) for c in objective]
    n = len(c_obj)
    cons = list(constraints)
    for con in cons:
        if len(con.coeffs) != n:
            raise LPError("constraint arity does not match objective")

    # Standard form: flip rows so rhs >= 0, then add slack/surplus/artificials.
    rows = []
    for con in cons:
        coeffs, rel, rhs = list(con.coeffs), con.rel, con.rhs
        if rhs < 0:
            coeffs = [-c for c in coeffs]
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        rows.append((coeffs, rel, rhs))

    m = len(rows)
    n_slack = sum(1 for _, rel, _ in rows if rel in (LE, GE))
    slack_base = n
    art_base = n + n_slack

    # Which rows need artificials: GE and EQ rows (slack of LE starts basic).
    art_rows = [i for i, (_, rel, _) in enumerate(rows) if rel in (GE, EQ)]
    n_art = len(art_rows)
    total = n + n_slack + n_art

    tableau = []
    basis = []
    slack_idx = 0
    art_idx = 0
    art_cols = []
    for i, (coeffs, rel, rhs) in enumerate(rows):
        row = [Fraction(0)] * (total + 1)
        for j, v in enumerate(coeffs):
            row[j] = v
        if rel == LE:
            row[slack_base + slack_idx] = Fraction(1)
            basis.append(slack_base + slack_idx)
            slack_idx += 1
        elif rel == GE:
            row[slack_base + slack_idx] = Fraction(-1)
            slack_idx += 1
            col = art_base + art_idx
            row[col] = Fraction(1)
            basis.append(col)
            art_cols.append(col)
            art_idx += 1
        else:
            col = art_base + art_idx
            row[col] = Fraction(1)
            basis.append(col)
            art_cols.append(col)
            art_idx += 1
        row[total] = rhs
        tableau.append(row)

    art_set = set(art_cols)

    def pivot(row_i: int, col_j: int) -> None:
        prow = tableau[row_i]
        inv = Fraction(1) / prow[col_j]
        tableau[row_i] = [v * inv for v in prow]
        prow = tableau[row_i]
        for r in range(m):
            if r != row_i and tableau[r][col_j]:
                f = tableau[r][col_j]
                tableau[r] = [a - f * b for a, b in zip(tableau[r], prow)]
        basis[row_i] = col_j

    def run_phase(costs: list, allowed) -> str:
        """Bland's rule primal simplex on the current tableau; costs is a
        dense cost vector (length total) to minimize."""
        while True:
            # Reduced costs: c_j - c_B . B^-1 A_j (tableau rows are B^-1 A).
            cb = [costs[b] for b in basis]
            entering = -1
            for j in range(total):
                if j in allowed and j not in basis:
                    red = costs[j] - sum(
                        cb[i] * tableau[i][j] for i in range(m) if tableau[i][j]
                    )
                    if red < 0:
                        entering = j
                        break
            if entering < 0:
                return OPTIMAL
            leaving = -1
            best = None
            for i in range(m):
                a = tableau[i][entering]
                if a > 0:
                    ratio = tableau[i][total] / a
                    if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leaving]
                    ):
                        best = ratio
                        leaving = i
            if leaving < 0:
                return UNBOUNDED
            pivot(leaving, entering)

    if n_art:
        phase1_costs = [Fraction(0)] * total
        for col in art_cols:
            phase1_costs[col] = Fraction(1)
        status = run_phase(phase1_costs, allowed=set(range(total)))
        if status == UNBOUNDED:  # pragma: no cover - phase 1 is bounded below by 0
            raise LPError("phase 1 unbounded")
        cb = [phase1_costs[b] for b in basis]
        val = sum(cb[i] * tableau[i][total] for i in range(m))
        if val != 0:
            return LPResult(INFEASIBLE, None, ())
        # Drive remaining artificials out of the basis where possible.
        for i in range(m):
            if basis[i] in art_set:
                for j in range(total):
                    if j not in art_set and tableau[i][j]:
                        pivot(i, j)
                        break
                # A row whose only nonzeros are artificial is redundant; its
                # basic artificial stays at value 0 and never re-enters.

    phase2_costs = [Fraction(0)] * total
    for j in range(n):
        phase2_costs[j] = c_obj[j]
    allowed = set(range(total)) - art_set
    status = run_phase(phase2_costs, allowed=allowed)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, ())

    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = tableau[i][total]
    value = sum(c * v for c, v in zip(c_obj, x))
    return LPResult(OPTIMAL, value, tuple(x))
