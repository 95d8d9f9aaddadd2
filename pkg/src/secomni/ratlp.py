"""Exact simplex over rationals for small linear programs.

Solves max c^T x subject to A x <= b, x >= 0 with b >= 0 (so the slack basis
is an immediate feasible start).  All arithmetic is fractions.Fraction; Bland's
rule guarantees termination.  Intended for the omniscience-rate LPs, which
have at most ~10 constraints and ~1000 variables.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidArgumentError


def simplex_max(a, b, c):
    """Solve max c^T x s.t. a x <= b, x >= 0 exactly.

    Args:
        a: Constraint matrix as nested sequences (m rows, n cols).
        b: Right-hand sides, length m, all nonnegative.
        c: Objective coefficients, length n.

    Returns:
        Tuple (value, x, y): optimal value, a primal optimizer (length n),
        and the dual prices y (length m, one per constraint row).

    Raises:
        InvalidArgumentError: If some b is negative or the LP is unbounded.
    """
    m = len(b)
    n = len(c)
    a = [[Fraction(v) for v in row] for row in a]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    if any(len(row) != n for row in a):
        raise InvalidArgumentError("constraint row length mismatch")
    if any(v < 0 for v in b):
        raise InvalidArgumentError("simplex_max needs b >= 0")
    total = n + m
    tableau = [a[i] + [Fraction(i == j) for j in range(m)] + [b[i]] for i in range(m)]
    cost = c + [Fraction(0)] * (m + 1)
    basis = list(range(n, n + m))
    while True:
        enter = next((j for j in range(total) if cost[j] > 0), None)
        if enter is None:
            break
        leave = None
        best_ratio = None
        for i in range(m):
            coef = tableau[i][enter]
            if coef > 0:
                ratio = tableau[i][total] / coef
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave is None:
            raise InvalidArgumentError("LP is unbounded")
        piv = tableau[leave][enter]
        tableau[leave] = [v / piv for v in tableau[leave]]
        prow = tableau[leave]
        for i in range(m):
            if i != leave and tableau[i][enter]:
                f = tableau[i][enter]
                tableau[i] = [v - f * p for v, p in zip(tableau[i], prow)]
        if cost[enter]:
            f = cost[enter]
            cost = [v - f * p for v, p in zip(cost, prow)]
        basis[leave] = enter
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = tableau[i][total]
    value = -cost[total]
    y = [-cost[n + i] for i in range(m)]
    return value, x, y
