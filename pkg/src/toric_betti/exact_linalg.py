"""Exact integer matrix algebra.

Matrices are plain row-major ``list[list[int]]``.  A matrix with zero rows
carries its column count separately where it matters (``rank_q`` only needs
the entries; chain complexes track shapes themselves).  Python integers are
arbitrary precision, so nothing here can overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def transpose(m: Sequence[Sequence[int]], cols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], inner: int | None = None,
           cols: int | None = None) -> Matrix:
    """Product ``a @ b``.

    ``inner``/``cols`` are only consulted when a factor has no rows and the
    shape can't be read off the entries.
    """
    n = len(b) if b else (inner or 0)
    p = len(b[0]) if b else (cols or 0)
    out = zeros(len(a), p)
    for i, row in enumerate(a):
        orow = out[i]
        for k in range(n):
            aik = row[k]
            if aik:
                brow = b[k]
                for j in range(p):
                    if brow[j]:
                        orow[j] += aik * brow[j]
    return out


def is_zero(m: Sequence[Sequence[int]]) -> bool:
    return all(x == 0 for row in m for x in row)


def rank_q(m: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals, by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in m]
    if not a or not a[0]:
        return 0
    rows, cols = len(a), len(a[0])
    rank = 0
    prev = 1
    for c in range(cols):
        if rank == rows:
            break
        piv = next((r for r in range(rank, rows) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, rows):
            arc = a[r][c]
            row_r, row_p = a[r], a[rank]
            for j in range(c + 1, cols):
                # exact division is the Bareiss invariant
                row_r[j] = (p * row_r[j] - arc * row_p[j]) // prev
            row_r[c] = 0
        prev = p
        rank += 1
    return rank


def kernel_dim(m: Sequence[Sequence[int]], cols: int) -> int:
    return cols - rank_q(m)


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    """``left @ m @ right == diag(diagonal)`` padded with zeros.

    ``diagonal`` lists the invariant factors d1 | d2 | ... including trailing
    zeros up to ``min(rows, cols)``.
    """

    diagonal: tuple[int, ...]
    left: Matrix
    right: Matrix
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)

    def padded(self) -> Matrix:
        d = zeros(self.rows, self.cols)
        for i, v in enumerate(self.diagonal):
            d[i][i] = v
        return d


def _round_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1 if (r > 0) == (b > 0) else 0
    return q


def _echelon(a: Matrix, t: Matrix, ncols: int) -> None:
    """Row-reduce ``a`` in place to Hermite form, mirroring row ops on ``t``.

    Entries above each pivot are reduced modulo the pivot, which keeps the
    working entries small.
    """
    rows = len(a)
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if a[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[piv] = a[piv], a[r]
            t[r], t[piv] = t[piv], t[r]
            p = a[r][c]
            done = True
            for i in range(r + 1, rows):
                if a[i][c]:
                    q = _round_div(a[i][c], p)
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    t[i] = [x - q * y for x, y in zip(t[i], t[r])]
                    done = done and a[i][c] == 0
            if done:
                break
        if not a[r][c]:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            t[r] = [-x for x in t[r]]
        p = a[r][c]
        for i in range(r):
            q = a[i][c] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                t[i] = [x - q * y for x, y in zip(t[i], t[r])]
        r += 1


def _monomial(a: Matrix) -> bool:
    if any(sum(1 for x in row if x) > 1 for row in a):
        return False
    return all(sum(1 for row in a if row[j]) <= 1 for j in range(len(a[0]) if a else 0))


def smith_normal_form(m: Sequence[Sequence[int]], cols: int | None = None) -> SmithForm:
    """Smith normal form with unimodular transforms.

    Alternates row and column Hermite reduction until at most one entry per
    row and column survives, then enforces the divisibility chain with 2x2
    gcd steps.
    """
    a = [list(r) for r in m]
    rows = len(a)
    ncols = len(a[0]) if a else (cols or 0)
    left = identity(rows)
    right = identity(ncols)
    if rows == 0 or ncols == 0:
        return SmithForm((), left, right, rows, ncols)

    while True:
        _echelon(a, left, ncols)
        if _monomial(a):
            break
        at, rt = transpose(a), transpose(right)
        _echelon(at, rt, rows)
        a, right = transpose(at), transpose(rt)
        if _monomial(a):
            break

    # move the surviving entries onto the diagonal
    k = 0
    for i in range(rows):
        j = next((j for j in range(ncols) if a[i][j]), None)
        if j is None:
            continue
        a[k], a[i] = a[i], a[k]
        left[k], left[i] = left[i], left[k]
        for row in a:
            row[k], row[j] = row[j], row[k]
        for row in right:
            row[k], row[j] = row[j], row[k]
        k += 1

    for i in range(k):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            left[i] = [-x for x in left[i]]
    for i in range(k):
        for j in range(i + 1, k):
            x, y = a[i][i], a[j][j]
            if y % x == 0:
                continue
            g, s, t = _ext_gcd(x, y)
            # diag(x, y) -> diag(g, x*y/g): add col j to col i, mix rows, clear col j
            for row in right:
                row[i] += row[j]
            li, lj = left[i], left[j]
            left[i] = [s * u + t * v for u, v in zip(li, lj)]
            left[j] = [-(y // g) * u + (x // g) * v for u, v in zip(li, lj)]
            q = t * y // g
            for row in right:
                row[j] -= q * row[i]
            a[i][i], a[j][j] = g, x * y // g
    diagonal = tuple(a[i][i] if i < k else 0 for i in range(min(rows, ncols)))
    return SmithForm(diagonal, left, right, rows, ncols)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """g, s, t with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def hermite_normal_form(m: Sequence[Sequence[int]]) -> Matrix:
    """Row-style HNF of an integer matrix, zero rows dropped.

    Used to put lattice bases in a canonical shape.
    """
    a = [list(r) for r in m if any(r)]
    if not a:
        return []
    cols = len(a[0])
    r = 0
    for c in range(cols):
        if r == len(a):
            break
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[piv] = a[piv], a[r]
            cleared = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        cleared = False
            if cleared:
                break
        if all(a[i][c] == 0 for i in range(r, len(a))):
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return [row for row in a if any(row)]


def inverse_unimodular(u: Sequence[Sequence[int]]) -> Matrix:
    """Exact inverse of a unimodular matrix (Gauss-Jordan over Q, checked integral)."""
    n = len(u)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(u)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    out = []
    for row in aug:
        tail = row[n:]
        if any(x.denominator != 1 for x in tail):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in tail])
    return out


def saturation_basis(vs: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """A Z-basis of Z^n intersected with the real span of ``vs``.

    With ``L @ A @ R = D`` the first ``rank`` rows of ``R^-1`` span the
    saturated row lattice of ``A``; the result is returned in row HNF.
    """
    rows = [list(v) for v in vs]
    if not rows or all(not any(r) for r in rows):
        raise ValueError("saturation of the zero lattice is undefined")
    snf = smith_normal_form(rows)
    r_inv = inverse_unimodular(snf.right)
    basis = hermite_normal_form(r_inv[: snf.rank])
    return [tuple(b) for b in basis]


def solve_rational(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """Some solution ``x`` of ``a @ x == b`` over Q, or None when inconsistent."""
    rows = len(a)
    cols = len(a[0]) if a else 0
    aug = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][c]
        aug[r] = [x / p for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][cols] != 0 for i in range(r, rows)):
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][cols]
    return x


def coordinates_in_basis(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction] | None:
    """Coefficients of ``v`` as a combination of ``basis`` rows, or None if outside the span."""
    return solve_rational(transpose(basis), v)


def cross(u: Sequence[int], v: Sequence[int]) -> tuple[int, int, int]:
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))
