"""Exact integer linear algebra on small dense matrices.

Matrices are lists of row lists.  The Smith normal form keeps track of the
transformation matrices and their inverses, which downstream code uses to
read off generators and discrete logarithms of finitely generated abelian
groups presented by relation matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .intmath import xgcd


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def mat_vec(a, v):
    return [sum(row[k] * v[k] for k in range(len(v))) for row in a]


def vec_mat(v, a):
    cols = len(a[0]) if a else 0
    return [sum(v[k] * a[k][j] for k in range(len(v))) for j in range(cols)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def det(mat) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(mat)
    if n == 0:
        return 1
    m = [list(row) for row in mat]
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
    return sign * m[-1][-1]


def fraction_inverse(mat) -> list[list[Fraction]]:
    """Inverse of a nonsingular integer (or Fraction) matrix, over Q."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


@dataclass
class SmithForm:
    """U @ M @ V = D with U, V unimodular and D diagonal, d1 | d2 | ..."""

    u: list[list[int]]
    d: list[list[int]]
    v: list[list[int]]
    u_inv: list[list[int]]
    v_inv: list[list[int]]

    @property
    def diagonal(self) -> list[int]:
        return [self.d[i][i] for i in range(min(len(self.d), len(self.d[0]) if self.d else 0))]


def smith_normal_form(mat) -> SmithForm:
    m = len(mat)
    n = len(mat[0]) if m else 0
    a = [list(row) for row in mat]
    u, ui = identity_matrix(m), identity_matrix(m)
    v, vi = identity_matrix(n), identity_matrix(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for r in range(m):
            ui[r][i], ui[r][j] = ui[r][j], ui[r][i]

    def add_row(i, j, k):
        # row_i += k * row_j
        a[i] = [x + k * y for x, y in zip(a[i], a[j])]
        u[i] = [x + k * y for x, y in zip(u[i], u[j])]
        for r in range(m):
            ui[r][j] -= k * ui[r][i]

    def neg_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in range(m):
            ui[r][i] = -ui[r][i]

    def swap_cols(i, j):
        for r in range(m):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(n):
            v[r][i], v[r][j] = v[r][j], v[r][i]
        vi[i], vi[j] = vi[j], vi[i]

    def add_col(i, j, k):
        # col_i += k * col_j
        for r in range(m):
            a[r][i] += k * a[r][j]
        for r in range(n):
            v[r][i] += k * v[r][j]
        vi[j] = [x - k * y for x, y in zip(vi[j], vi[i])]

    def neg_col(i):
        for r in range(m):
            a[r][i] = -a[r][i]
        for r in range(n):
            v[r][i] = -v[r][i]
        vi[i] = [-x for x in vi[i]]

    t = 0
    while t < min(m, n):
        # choose the smallest nonzero entry of the trailing block as pivot
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
        # pivot must divide every entry of the trailing block
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % a[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        if a[t][t] < 0:
            neg_row(t)
        t += 1
    return SmithForm(u=u, d=a, v=v, u_inv=ui, v_inv=vi)


def hnf_pair_basis(rows: list[tuple[int, int]]) -> tuple[int, int, int] | None:
    """Lower-triangular basis of the Z-span of 2-component integer rows.

    Returns (A, B, C) with span = Z*(A, 0) + Z*(B, C), A > 0, C > 0,
    0 <= B < A; None if the span has rank < 2.
    """
    c = 0
    vec = (0, 0)
    for x, y in rows:
        if y == 0:
            continue
        g, s, t = xgcd(c, y)
        vec = (s * vec[0] + t * x, g)
        c = g
    if c == 0:
        return None
    xs = []
    for x, y in rows:
        q = y // c
        xs.append(x - q * vec[0])
    A = 0
    for x in xs:
        A = gcd(A, x)
    if A == 0:
        return None
    B = vec[0] % A
    return A, B, c


def solve_integer(mat, rhs) -> list[int] | None:
    """One integer solution x of mat @ x = rhs, or None."""
    snf = smith_normal_form(mat)
    m = len(mat)
    n = len(mat[0]) if m else 0
    urhs = mat_vec(snf.u, rhs)
    y = [0] * n
    for i in range(m):
        di = snf.d[i][i] if i < n else 0
        if di == 0:
            if urhs[i] != 0:
                return None
        else:
            if urhs[i] % di != 0:
                return None
            y[i] = urhs[i] // di
    for i in range(n if n < m else m, m):
        if urhs[i] != 0:
            return None
    return mat_vec(snf.v, y)


def kernel_basis(mat) -> list[list[int]]:
    """Basis of the integer kernel {x : mat @ x = 0}."""
    snf = smith_normal_form(mat)
    m = len(mat)
    n = len(mat[0]) if m else 0
    rank = sum(1 for i in range(min(m, n)) if snf.d[i][i] != 0)
    return [[snf.v[r][j] for r in range(n)] for j in range(rank, n)]
