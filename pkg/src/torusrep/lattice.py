"""Exact integer and rational linear algebra on lists of lists.

Matrices are plain ``list[list[int]]`` (or ``Fraction``) in row-major order.
Everything is naive pivoting on Python integers, which is fine for the
desk-scale sizes used here (a dozen rows and columns at most).
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence

from .errors import DimensionError, NotSaturated

IntMatrix = list  # list[list[int]]
RatMatrix = list  # list[list[Fraction]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def transpose(m: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*m)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    if a and b and len(a[0]) != len(b):
        raise DimensionError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def vec_mat(v: Sequence, m: Sequence[Sequence]) -> list:
    """Row vector times matrix."""
    return [sum(x * row[j] for x, row in zip(v, m)) for j in range(len(m[0]))]


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def is_unimodular(m: Sequence[Sequence[int]]) -> bool:
    return len(m) > 0 and abs(det(m)) == 1


def hnf(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form with transform: returns (h, u), h = u.m.

    Pivots are positive, entries above a pivot lie in [0, pivot), zero rows
    come last, and ``u`` is unimodular.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(map(int, r)) for r in m]
    u = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            live = [i for i in range(r, rows) if a[i][c]]
            if not live:
                break
            p = min(live, key=lambda i: abs(a[i][c]))
            a[r], a[p] = a[p], a[r]
            u[r], u[p] = u[p], u[r]
            clean = True
            for i in range(r + 1, rows):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    clean = clean and a[i][c] == 0
            if clean:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return a, u


def _nonzero_rows(m):
    return [list(r) for r in m if any(r)]


def rref(m: Sequence[Sequence]) -> tuple[RatMatrix, list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    a = [[Fraction(x) for x in r] for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank_q(m: Sequence[Sequence]) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def primitive(v: Sequence) -> list[int]:
    """Scale a rational vector to a primitive integer vector (first nonzero entry positive)."""
    fr = [Fraction(x) for x in v]
    den = reduce(lcm, (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    return ints if lead > 0 else [-x for x in ints]


def rational_kernel(m: Sequence[Sequence]) -> list[list[int]]:
    """Basis of the left kernel {v : v.m = 0} over Q.

    Vectors are returned as primitive integer representatives; the list is
    empty exactly when the rows of ``m`` are independent over Q.
    """
    rows = len(m)
    if rows == 0:
        return []
    if not m[0]:
        return identity(rows)
    # left kernel of m == right kernel of m^T
    red, pivots = rref(transpose(m))
    free = [j for j in range(rows) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * rows
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(primitive(v))
    return basis


def integerize(m: Sequence[Sequence]) -> IntMatrix:
    """Scale a rational matrix by the lcm of its denominators."""
    den = reduce(lcm, (Fraction(x).denominator for r in m for x in r), 1)
    return [[int(Fraction(x) * den) for x in r] for r in m]


def integer_left_kernel(m: Sequence[Sequence]) -> list[list[int]]:
    """Z-basis (in Hermite form) of {v in Z^rows : v.m = 0}; always saturated."""
    rows = len(m)
    if rows == 0:
        return []
    if not m[0]:
        return identity(rows)
    h, u = hnf(integerize(m))
    r = sum(1 for row in h if any(row))
    ker = u[r:]
    if not ker:
        return []
    return _nonzero_rows(hnf(ker)[0])


def saturate(basis: Sequence[Sequence[int]], n: int | None = None) -> list[list[int]]:
    """Basis of (Q-span of basis) intersected with Z^n, in Hermite form."""
    basis = [list(map(int, v)) for v in basis]
    if n is None:
        if not basis:
            raise DimensionError("cannot infer ambient dimension of an empty basis")
        n = len(basis[0])
    if any(len(v) != n for v in basis):
        raise DimensionError("basis vectors must share length n")
    if not _nonzero_rows(basis):
        return []
    # the saturation is the integer annihilator of the rational annihilator
    annihilator = rational_kernel(transpose(basis))
    if not annihilator:
        return identity(n)
    return integer_left_kernel(transpose(annihilator))


def is_saturated(basis: Sequence[Sequence[int]]) -> bool:
    basis = [list(map(int, v)) for v in basis]
    if not basis:
        return True
    if rank_q(basis) != len(basis):
        return False
    h, _ = hnf(transpose(basis))
    return reduce(lambda acc, i: acc * h[i][i], range(len(basis)), 1) == 1


def unimodular_inverse(u: Sequence[Sequence[int]]) -> IntMatrix:
    h, v = hnf(u)
    if h != identity(len(u)):
        raise ValueError("matrix is not unimodular")
    return v


def complete_to_unimodular(basis: Sequence[Sequence[int]]) -> IntMatrix:
    """Extend a saturated basis of k vectors in Z^n to an n x n unimodular matrix.

    The first k rows of the result are the input vectors, unchanged.
    """
    basis = [list(map(int, v)) for v in basis]
    if not basis:
        raise DimensionError("empty basis: ambient dimension unknown")
    n = len(basis[0])
    k = len(basis)
    if any(len(v) != n for v in basis) or k > n:
        raise DimensionError(f"need k <= n vectors of length n, got {k} of lengths "
                             f"{sorted({len(v) for v in basis})}")
    if not is_saturated(basis):
        raise NotSaturated(f"{basis} does not span a saturated sublattice")
    _, u = hnf(transpose(basis))
    # B.u^T = [T^T | 0] with T unimodular, so rows k.. of (u^-1)^T complete B
    w = transpose(unimodular_inverse(u))
    out = basis + w[k:]
    assert abs(det(out)) == 1
    return out
