"""Exact integer and rational matrix routines.

Matrices are plain lists (or tuples) of rows of Python ints, so values never
overflow. Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = list[list[int]]


def to_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return [list(r) for r in rows]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vecmat(v: Sequence, a: Sequence[Sequence]) -> list:
    return [sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0]))]


def congruence(b: Sequence[Sequence[int]], g: Sequence[Sequence[int]]) -> Matrix:
    """Return ``b @ g @ b.T``."""
    return matmul(matmul(b, g), transpose(b))


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    n = len(a)
    if n == 0:
        return 1
    m = to_matrix(a)
    if any(len(r) != n for r in m):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rref(a: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse over Q. Raises ZeroDivisionError for singular input."""
    n = len(a)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    m, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in m]


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution x of ``a x = b`` over Q, or None if inconsistent."""
    rows = len(a)
    cols = len(a[0])
    aug = [list(a[i]) + [b[i]] for i in range(rows)]
    m, piv = rref(aug)
    if cols in piv:
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(piv):
        x[c] = m[r][cols]
    return x


def denominator_lcm(values) -> int:
    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form with transforms.

    Returns ``(S, P, Q)`` with ``P @ a @ Q == S``, ``P`` and ``Q`` unimodular,
    ``S`` diagonal with non-negative entries ``d_1 | d_2 | ...``.
    """
    s = to_matrix(a)
    m = len(s)
    n = len(s[0]) if m else 0
    p = identity(m)
    q = identity(n)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        p[i], p[j] = p[j], p[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in q:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        s[dst] = [x + f * y for x, y in zip(s[dst], s[src])]
        p[dst] = [x + f * y for x, y in zip(p[dst], p[src])]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for row in s:
            row[dst] += f * row[src]
        for row in q:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the trailing block becomes the pivot
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if s[i][j] != 0 and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return s, p, q
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = s[t][t]
            dirty = False
            for i in range(t + 1, m):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // piv))
                    dirty = dirty or s[i][t] != 0
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // piv))
                    dirty = dirty or s[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if s[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            p[t] = [-x for x in p[t]]
    return s, p, q


def invariant_factors(a: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form."""
    s, _, _ = smith_normal_form(a)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i] != 0]


def integer_kernel(a: Sequence[Sequence[int]]) -> Matrix:
    """Basis (as rows) of the saturated integer kernel ``{x : a x = 0}``."""
    n = len(a[0])
    s, _, q = smith_normal_form(a)
    r = sum(1 for i in range(min(len(s), n)) if s[i][i] != 0)
    return [[q[i][j] for i in range(n)] for j in range(r, n)]


def is_unimodular(a: Sequence[Sequence[int]]) -> bool:
    return len(a) == len(a[0]) and abs(determinant(a)) == 1


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a x + b y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def bezout(values: Sequence[int]) -> tuple[int, list[int]]:
    """gcd of ``values`` and integer coefficients realising it."""
    g = 0
    coeffs: list[int] = []
    for v in values:
        g2, x, y = xgcd(g, v)
        coeffs = [c * x for c in coeffs] + [y]
        g = g2
    return g, coeffs


def content(values: Sequence[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
