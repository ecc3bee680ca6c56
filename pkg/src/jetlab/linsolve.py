"""Exact linear algebra over the rationals (and small exact determinants)."""

from __future__ import annotations

from fractions import Fraction


def solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Gaussian elimination over Q on a possibly overdetermined system.

    Returns one of
        ("unique", solution)
        ("underdetermined", number_of_free_columns)
        ("inconsistent", offending_row_index)
    Row order does not affect the outcome class.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    pivot_cols: list[int] = []
    row = 0
    for col in range(n):
        pivot = None
        for r in range(row, m):
            if a[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        pv = a[row][col]
        a[row] = [x / pv for x in a[row]]
        for r in range(m):
            if r != row and a[r][col]:
                factor = a[r][col]
                ar, arow = a[r], a[row]
                a[r] = [x - factor * y for x, y in zip(ar, arow)]
        pivot_cols.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if a[r][n]:
            return ("inconsistent", r)
    if len(pivot_cols) < n:
        return ("underdetermined", n - len(pivot_cols))
    sol = [Fraction(0)] * n
    for r, col in enumerate(pivot_cols):
        sol[col] = a[r][n]
    return ("unique", sol)


def det_cofactor(rows):
    """Determinant by cofactor expansion along the first column.

    Works over any exact commutative ring whose elements support +, -, *.
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if n == 1:
        return rows[0][0]
    total = None
    for i in range(n):
        pivot = rows[i][0]
        minor = [r[1:] for j, r in enumerate(rows) if j != i]
        term = pivot * det_cofactor(minor)
        if i % 2:
            term = -term
        total = term if total is None else total + term
    return total
