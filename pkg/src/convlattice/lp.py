"""Exact rational linear programming.

A dense two-phase tableau simplex with Bland's rule, so it terminates
without any cycling safeguards beyond the pivot rule itself. Sizes in this
package are small (tens of rows), which is the regime this is meant for.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import dot

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None
    duals: Optional[tuple[Fraction, ...]] = None

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def _pivot(T: list[list[Fraction]], r: int, c: int) -> None:
    pv = T[r][c]
    if pv != 1:
        T[r] = [x / pv for x in T[r]]
    prow = T[r]
    for i, row in enumerate(T):
        if i != r:
            f = row[c]
            if f:
                T[i] = [a - f * b for a, b in zip(row, prow)]


def _run(T, basis, cost, allowed) -> bool:
    """Minimise; ``cost`` is the reduced-cost row (last entry = -objective).
    Returns False when unbounded."""
    while True:
        enter = next((j for j in allowed if cost[j] < 0), None)
        if enter is None:
            return True
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        r = best[1]
        _pivot(T, r, enter)
        f = cost[enter]
        cost[:] = [a - f * b for a, b in zip(cost, T[r])]
        basis[r] = enter


def solve_standard(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimise ``c.x`` subject to ``A x = b``, ``x >= 0``.

    On success ``duals`` holds y with ``A^T y <= c`` and ``b.y`` equal to the
    optimum.
    """
    m, n = len(A), len(c)
    c = [Fraction(x) for x in c]
    signs = []
    T = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]]
        rhs = Fraction(b[i])
        s = -1 if rhs < 0 else 1
        signs.append(s)
        if s < 0:
            row = [-x for x in row]
            rhs = -rhs
        T.append(row + [Fraction(int(i == k)) for k in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    width = n + m + 1

    cost1 = [Fraction(0)] * width
    for j in range(n, n + m):
        cost1[j] = Fraction(1)
    for row in T:
        cost1 = [a - b for a, b in zip(cost1, row)]
    _run(T, basis, cost1, range(n))
    if -cost1[-1] != 0:
        return LPResult(INFEASIBLE)

    # drive zero-level artificials out where the row allows it
    for i in range(m):
        if basis[i] >= n:
            j = next((k for k in range(n) if T[i][k] != 0), None)
            if j is not None:
                _pivot(T, i, j)
                basis[i] = j

    full_c = c + [Fraction(0)] * m
    cost2 = full_c + [Fraction(0)]
    for i, row in enumerate(T):
        cb = full_c[basis[i]]
        if cb:
            cost2 = [a - cb * x for a, x in zip(cost2, row)]
    if not _run(T, basis, cost2, range(n)):
        return LPResult(UNBOUNDED)

    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = T[i][-1]
    duals = tuple(-cost2[n + i] * signs[i] for i in range(m))
    return LPResult(OPTIMAL, tuple(x), dot(c, x), duals)


def maximize(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    """Maximise ``c.x`` over free ``x`` with ``A_ub x <= b_ub``, ``A_eq x = b_eq``."""
    n = len(c)
    m1, m2 = len(A_ub), len(A_eq)
    rows, rhs = [], []
    for i in range(m1):
        r = list(A_ub[i])
        rows.append(r + [-x for x in r] + [int(k == i) for k in range(m1)])
        rhs.append(b_ub[i])
    for i in range(m2):
        r = list(A_eq[i])
        rows.append(r + [-x for x in r] + [0] * m1)
        rhs.append(b_eq[i])
    cost = [-Fraction(x) for x in c] + [Fraction(x) for x in c] + [0] * m1
    if not rows:
        if any(c):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, tuple(Fraction(0) for _ in range(n)), Fraction(0))
    res = solve_standard(cost, rows, rhs)
    if not res.ok:
        return res
    x = tuple(res.x[i] - res.x[n + i] for i in range(n))
    return LPResult(OPTIMAL, x, dot(c, x), res.duals)


@dataclass(frozen=True)
class MarginResult:
    """Outcome of :func:`max_margin`.

    ``x`` maximises the common slack of the inequality rows (capped at 1);
    the system is feasible iff ``margin >= 0``. When infeasible, ``support``
    lists the inequality rows carrying a Farkas certificate.
    """
    feasible: bool
    x: Optional[tuple[Fraction, ...]]
    margin: Optional[Fraction]
    support: tuple[int, ...] = ()


def max_margin(A_ub: Sequence[Sequence], b_ub: Sequence,
               A_eq: Sequence[Sequence] = (), b_eq: Sequence = (), nvars: Optional[int] = None) -> MarginResult:
    """Decide ``A_ub x <= b_ub, A_eq x = b_eq`` for free x by solving the dual of

        max s  s.t.  A_ub x + s <= b_ub,  A_eq x = b_eq,  s <= 1.

    The dual has only ``nvars + 1`` rows, which keeps tableaus narrow when
    there are many constraints and few unknowns.
    """
    if nvars is None:
        nvars = len(A_ub[0]) if A_ub else len(A_eq[0])
    m1, m2 = len(A_ub), len(A_eq)
    # columns: y (m1), w+ (m2), w- (m2), z
    rows = []
    for j in range(nvars):
        rows.append([A_ub[i][j] for i in range(m1)]
                    + [A_eq[k][j] for k in range(m2)]
                    + [-A_eq[k][j] for k in range(m2)] + [0])
    rows.append([1] * m1 + [0] * (2 * m2) + [1])
    rhs = [0] * nvars + [1]
    cost = list(b_ub) + list(b_eq) + [-x for x in b_eq] + [1]
    res = solve_standard(cost, rows, rhs)
    if res.status == UNBOUNDED:
        # equality part alone is inconsistent
        return MarginResult(False, None, None, ())
    duals = res.duals
    x = tuple(duals[:nvars])
    s = duals[nvars]
    if s >= 0:
        return MarginResult(True, x, s)
    support = tuple(i for i in range(m1) if res.x[i] != 0)
    return MarginResult(False, None, s, support)


def feasible_combination(points: Sequence[Sequence], target: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Weights ``w >= 0``, ``sum w = 1`` with ``sum w_i p_i = target``, or None."""
    if not points:
        return None
    n = len(target)
    A = [[p[j] for p in points] for j in range(n)] + [[1] * len(points)]
    b = list(target) + [1]
    res = solve_standard([0] * len(points), A, b)
    return res.x if res.ok else None
