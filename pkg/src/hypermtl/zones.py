"""Difference-bound matrices and rational difference-constraint solving.

A bound is (value, strict) standing for `d < value` or `d <= value`;
value None is unconstrained.  Matrices are tuples indexed by clock
number with row 0 the reference zero clock; entry [i][j] bounds
x_i - x_j.  All exported zone operations return canonical matrices, so
structural equality is semantic equality and matrices can key visited
sets directly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Bound = tuple[Optional[int], bool]
Matrix = tuple[tuple[Bound, ...], ...]

INF: Bound = (None, True)
ZERO: Bound = (0, False)


def bound_lt(a: Bound, b: Bound) -> bool:
    """Strictly tighter-than ordering; INF is the loosest bound."""
    if a[0] is None:
        return False
    if b[0] is None:
        return True
    if a[0] != b[0]:
        return a[0] < b[0]
    return a[1] and not b[1]


def bound_min(a: Bound, b: Bound) -> Bound:
    return a if bound_lt(a, b) else b


def bound_add(a: Bound, b: Bound) -> Bound:
    if a[0] is None or b[0] is None:
        return INF
    return (a[0] + b[0], a[1] or b[1])


def _admits(bound: Bound, value: Fraction) -> bool:
    if bound[0] is None:
        return True
    return value < bound[0] if bound[1] else value <= bound[0]


def _empty_matrix(n: int) -> Matrix:
    """Normal form for empty zones, a fixed point of canonical()."""
    return tuple(tuple((-1, True) for _ in range(n)) for _ in range(n))


def canonical(matrix: Sequence[Sequence[Bound]]) -> Matrix:
    """Floyd-Warshall tightening; empty zones normalize to _empty_matrix."""
    n = len(matrix)
    if any(bound_lt(matrix[i][i], ZERO) for i in range(n)):
        return _empty_matrix(n)
    m = [list(row) for row in matrix]
    for k in range(n):
        for i in range(n):
            ik = m[i][k]
            if ik[0] is None:
                continue
            for j in range(n):
                via = bound_add(ik, m[k][j])
                if bound_lt(via, m[i][j]):
                    m[i][j] = via
    if any(bound_lt(m[i][i], ZERO) for i in range(n)):
        return _empty_matrix(n)
    return tuple(tuple(row) for row in m)


def is_empty(matrix: Matrix) -> bool:
    return any(bound_lt(matrix[i][i], ZERO) for i in range(len(matrix)))


def zone_zero(nclocks: int) -> Matrix:
    """All clocks exactly 0."""
    n = nclocks + 1
    return tuple(tuple(ZERO for _ in range(n)) for _ in range(n))


def zone_up(matrix: Matrix, strict: bool) -> Matrix:
    """Let time elapse: delays > 0 when strict, >= 0 otherwise."""
    n = len(matrix)
    m = [list(row) for row in matrix]
    for i in range(1, n):
        m[i][0] = INF
        if strict:
            lo = m[0][i]
            if lo[0] is not None and not lo[1]:
                m[0][i] = (lo[0], True)
    return canonical(m)


def zone_reset(matrix: Matrix, clock: int) -> Matrix:
    n = len(matrix)
    m = [list(row) for row in matrix]
    for j in range(n):
        m[clock][j] = m[0][j]
        m[j][clock] = m[j][0]
    m[clock][clock] = ZERO
    return canonical(m)


def zone_constrain(matrix: Matrix, clock: int, op: str, const: int) -> Matrix:
    """Intersect with x_clock op const, op in < <= > >=."""
    m = [list(row) for row in matrix]
    if op == "<":
        m[clock][0] = bound_min(m[clock][0], (const, True))
    elif op == "<=":
        m[clock][0] = bound_min(m[clock][0], (const, False))
    elif op == ">":
        m[0][clock] = bound_min(m[0][clock], (-const, True))
    elif op == ">=":
        m[0][clock] = bound_min(m[0][clock], (-const, False))
    else:
        raise ValueError(f"bad relation: {op}")
    return canonical(m)


def zone_extrapolate(matrix: Matrix, max_consts: Sequence[int]) -> Matrix:
    """Classic per-clock max-constant extrapolation (diagonal-free sound)."""
    n = len(matrix)
    m = [list(row) for row in matrix]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            bound = m[i][j]
            if bound[0] is None:
                continue
            if i > 0 and bound[0] > max_consts[i - 1]:
                m[i][j] = INF
            elif j > 0 and bound[0] < -max_consts[j - 1]:
                m[i][j] = (-max_consts[j - 1], True)
    return canonical(m)


def zone_includes(big: Matrix, small: Matrix) -> bool:
    """All valuations of small lie in big (both canonical)."""
    n = len(big)
    for i in range(n):
        for j in range(n):
            if bound_lt(big[i][j], small[i][j]):
                return False
    return True


def least_dyadic(lo: Optional[tuple[Fraction, bool]],
                 hi: Optional[tuple[Fraction, bool]]) -> Fraction:
    """Least power-of-two-denominator rational in the given interval.

    lo/hi are (value, strict) or None for unbounded; the interval is
    assumed non-empty.  With no lower bound the choice is 0 when
    admissible, else just under the upper bound.
    """
    if lo is None:
        if hi is None or _upper_ok(Fraction(0), hi):
            return Fraction(0)
        value, strict = hi
        return value if not strict else value - 1
    value, strict = lo
    if not strict:
        candidate = value
        if hi is None or _upper_ok(candidate, hi):
            return candidate
        raise ValueError("empty interval")
    step = Fraction(1)
    while True:
        candidate = value + step
        if hi is None or _upper_ok(candidate, hi):
            return candidate
        step = step / 2
        if step.denominator > 1 << 62:
            raise ValueError("empty interval")


def _upper_ok(value: Fraction, hi: tuple[Fraction, bool]) -> bool:
    return value < hi[0] if hi[1] else value <= hi[0]


def zone_valuation(matrix: Matrix) -> Optional[list[Fraction]]:
    """A concrete clock valuation from a canonical non-empty matrix,
    least dyadic coordinates in clock order."""
    return solve_closed(matrix)


def solve_closed(matrix: Matrix) -> Optional[list[Fraction]]:
    """Pick values v_1..v_n (v_0 = 0) from a canonical constraint matrix,
    greedily least in index order; None when infeasible."""
    if is_empty(matrix):
        return None
    n = len(matrix)
    values: list[Fraction] = [Fraction(0)]
    for i in range(1, n):
        lo: Optional[tuple[Fraction, bool]] = None
        hi: Optional[tuple[Fraction, bool]] = None
        for j in range(i):
            upper = matrix[i][j]  # v_i - v_j <= upper
            if upper[0] is not None:
                cand = (values[j] + upper[0], upper[1])
                if hi is None or cand[0] < hi[0] or (cand[0] == hi[0] and cand[1]):
                    hi = cand
            lower = matrix[j][i]  # v_j - v_i <= bound, so v_i >= v_j - bound
            if lower[0] is not None:
                cand = (values[j] - lower[0], lower[1])
                if lo is None or cand[0] > lo[0] or (cand[0] == lo[0] and cand[1]):
                    lo = cand
        values.append(least_dyadic(lo, hi))
    return values


def solve_difference_constraints(
        nvars: int,
        constraints: Iterable[tuple[int, int, Bound]]) -> Optional[list[Fraction]]:
    """Solve x_i - x_j <= / < bound over vars 0..nvars with x_0 = 0.

    Returns the greedy least-dyadic solution in index order, or None if
    the system is infeasible.
    """
    n = nvars + 1
    m = [[INF for _ in range(n)] for _ in range(n)]
    for i in range(n):
        m[i][i] = ZERO
    for i, j, bound in constraints:
        m[i][j] = bound_min(m[i][j], bound)
    closed = canonical(m)
    return solve_closed(closed)
