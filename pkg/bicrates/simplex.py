"""
Exact rational simplex for small linear programs.

Solves ``max c.x  s.t.  A x <= b`` over free variables with a dense two-phase
tableau in :class:`fractions.Fraction` arithmetic. Bland's rule is used for
both entering and leaving choices, so the method terminates on degenerate
problems, which are the norm for rate-region systems.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

OPTIMAL = 'optimal'
INFEASIBLE = 'infeasible'
UNBOUNDED = 'unbounded'


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[Fraction] = None
    x: Optional[List[Fraction]] = None
    ray: Optional[List[Fraction]] = None


def _pivot(rows, obj, basis, r, col):
    pivot = rows[r][col]
    rows[r] = [v / pivot for v in rows[r]]
    prow = rows[r]
    for i, row in enumerate(rows):
        if i != r and row[col] != 0:
            factor = row[col]
            rows[i] = [v - factor * p for v, p in zip(row, prow)]
    if obj[col] != 0:
        factor = obj[col]
        obj[:] = [v - factor * p for v, p in zip(obj, prow)]
    basis[r] = col


def _reduced_costs(rows, basis, cost):
    # z_j - c_j for every column, plus the objective value in the last slot
    width = len(rows[0]) if rows else len(cost) + 1
    obj = [-c for c in cost] + [Fraction(0)]
    obj = obj[:width]
    for row, b in zip(rows, basis):
        cb = cost[b]
        if cb != 0:
            obj = [o + cb * v for o, v in zip(obj, row)]
    return obj


def _run(rows, obj, basis, allowed):
    """Iterate Bland pivots; return the unbounded entering column or None."""
    while True:
        entering = None
        for j in allowed:
            if obj[j] < 0:
                entering = j
                break
        if entering is None:
            return None
        leaving = None
        best = None
        for i, row in enumerate(rows):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best = ratio
                    leaving = i
        if leaving is None:
            return entering
        _pivot(rows, obj, basis, leaving, entering)


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """
    Maximize ``c.x`` subject to ``A x <= b`` with ``x`` free.

    Args:
        c: objective coefficients, length n.
        A: m rows of n coefficients.
        b: m right-hand sides.

    Returns:
        LPResult: status plus optimum value and point, or an improving ray
        when the problem is unbounded.
    """
    n = len(c)
    m = len(A)
    c = [Fraction(v) for v in c]
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    if m == 0:
        if any(v != 0 for v in c):
            return LPResult(UNBOUNDED, ray=list(c))
        return LPResult(OPTIMAL, Fraction(0), [Fraction(0)] * n)

    # columns: x+ (n), x- (n), slack (m), artificial (one per negative rhs)
    negative = [i for i in range(m) if b[i] < 0]
    n_art = len(negative)
    width = 2 * n + m + n_art
    rows = []
    basis = []
    art = 0
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        row = [sign * v for v in A[i]] + [-sign * v for v in A[i]]
        slack = [Fraction(0)] * m
        slack[i] = Fraction(sign)
        arts = [Fraction(0)] * n_art
        if sign < 0:
            arts[art] = Fraction(1)
            basis.append(2 * n + m + art)
            art += 1
        else:
            basis.append(2 * n + i)
        rows.append(row + slack + arts + [sign * b[i]])

    first_art = 2 * n + m
    if n_art:
        phase1 = [Fraction(0)] * first_art + [Fraction(-1)] * n_art
        obj = _reduced_costs(rows, basis, phase1)
        _run(rows, obj, basis, range(width))
        if obj[-1] < 0:
            return LPResult(INFEASIBLE)
        # drive zero-level artificials out of the basis
        for r in range(len(rows) - 1, -1, -1):
            if basis[r] >= first_art:
                col = next((j for j in range(first_art) if rows[r][j] != 0), None)
                if col is None:
                    del rows[r]
                    del basis[r]
                else:
                    _pivot(rows, obj, basis, r, col)
        rows = [row[:first_art] + row[-1:] for row in rows]

    cost = c + [-v for v in c] + [Fraction(0)] * m
    obj = _reduced_costs(rows, basis, cost)
    entering = _run(rows, obj, basis, range(first_art))
    if entering is not None:
        direction = [Fraction(0)] * first_art
        direction[entering] = Fraction(1)
        for row, bcol in zip(rows, basis):
            direction[bcol] -= row[entering]
        ray = [direction[j] - direction[n + j] for j in range(n)]
        return LPResult(UNBOUNDED, ray=ray)

    z = [Fraction(0)] * first_art
    for row, bcol in zip(rows, basis):
        z[bcol] = row[-1]
    x = [z[j] - z[n + j] for j in range(n)]
    value = sum((cj * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, value, x)


def is_feasible(A, b, n) -> bool:
    """True when ``A x <= b`` has a solution in n free variables."""
    return maximize([0] * n, A, b).status != INFEASIBLE
