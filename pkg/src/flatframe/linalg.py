"""Exact linear algebra over the rationals.

Everything here works on plain Python ints and :class:`fractions.Fraction`
so that rank and determinant tests never see rounding.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations, permutations
from math import factorial, gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch

Number = int | Fraction
Vector = tuple[Fraction, ...]


def dot(x: Sequence[Number], y: Sequence[Number]) -> Number:
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    return sum(a * b for a, b in zip(x, y))


def as_fractions(v: Iterable[Number]) -> Vector:
    return tuple(Fraction(x) for x in v)


def primitive(v: Sequence[Number]) -> tuple[int, ...]:
    """Scale ``v`` to the primitive integer vector with positive leading entry."""
    fr = [Fraction(x) for x in v]
    if not any(fr):
        raise ValueError("zero vector has no primitive form")
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, (abs(x) for x in ints))
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def det(matrix: Sequence[Sequence[Number]]) -> Number:
    """Determinant by fraction-free Bareiss elimination.

    Integer input gives an integer result; rational input is handled by
    clearing row denominators first.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    scale = Fraction(1)
    rows: list[list[int]] = []
    for row in matrix:
        fr = [Fraction(x) for x in row]
        den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in fr), 1)
        rows.append([int(x * den) for x in fr])
        scale /= den
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pivot = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * pivot - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = pivot
    value = sign * rows[n - 1][n - 1] * scale
    return int(value) if value.denominator == 1 else value


def rank(vectors: Sequence[Sequence[Number]]) -> int:
    """Rank of a list of row vectors (exact Gaussian elimination)."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][c]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                f /= p
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def solve(matrix: Sequence[Sequence[Number]], rhs: Sequence[Number]) -> Vector:
    """Solve ``matrix @ x = rhs`` for a square nonsingular system."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return tuple(row[n] for row in aug)


def permutation_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det_expansion(matrix: Sequence[Sequence[Number]], n1: int, n2: int) -> Fraction:
    """Two-block permutation expansion of the determinant.

    Sums ``sign(s) * det(top block of columns s[:n1]) * det(bottom block of
    columns s[n1:])`` over all permutations ``s`` and divides by
    ``n1! * n2!``.  Columns of ``matrix`` are the vectors; the first ``n1``
    coordinates belong to the first factor.
    """
    n = n1 + n2
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise DimensionMismatch(f"expected a {n}x{n} matrix for split {n1}+{n2}")
    cols = [[matrix[i][j] for i in range(n)] for j in range(n)]
    total = Fraction(0)
    for perm in permutations(range(n)):
        top = [[cols[perm[j]][i] for j in range(n1)] for i in range(n1)]
        a = det(top)
        if a == 0:
            continue
        bottom = [[cols[perm[n1 + j]][n1 + i] for j in range(n2)] for i in range(n2)]
        b = det(bottom)
        if b:
            total += permutation_sign(perm) * a * b
    return total / (factorial(n1) * factorial(n2))


def laplace_block_det(matrix: Sequence[Sequence[Number]], n1: int) -> Number:
    """Generalised Laplace expansion along the first ``n1`` rows.

    Only subsets are summed (no permutations), so this is the cheap form of
    :func:`det_expansion`.
    """
    n = len(matrix)
    rows1 = list(range(n1))
    total: Number = 0
    for cols1 in combinations(range(n), n1):
        cols2 = [j for j in range(n) if j not in cols1]
        a = det([[matrix[i][j] for j in cols1] for i in rows1])
        if a == 0:
            continue
        b = det([[matrix[i][j] for j in cols2] for i in range(n1, n)])
        sign = (-1) ** (sum(rows1) + sum(cols1))
        total += sign * a * b
    return total
