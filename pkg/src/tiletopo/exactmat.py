"""Exact linear algebra on small integer matrices.

Everything here stays in arbitrary-precision arithmetic (Python ints, or
Fractions for solves). Floating point never enters; callers convert at the
edge when they need numerics.

Matrices are row-major tuples of tuples, vectors are tuples.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

IntMatrix = tuple[tuple[int, ...], ...]
IntVector = tuple[int, ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_vec(m: IntMatrix, v: Sequence[int]) -> IntVector:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n, k, p = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(p))
        for i in range(n)
    )


def mat_add(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return tuple(
        tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def mat_scale(m: IntMatrix, c: int) -> IntMatrix:
    return tuple(tuple(c * x for x in row) for row in m)


def vec_add(u: Sequence[int], v: Sequence[int]) -> IntVector:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: Sequence[int], v: Sequence[int]) -> IntVector:
    return tuple(x - y for x, y in zip(u, v))


def vec_neg(v: Sequence[int]) -> IntVector:
    return tuple(-x for x in v)


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Intermediate values stay integral, so the result is exact for any
    integer matrix regardless of size or conditioning.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant requires a square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _minor(m: IntMatrix, i: int, j: int) -> IntMatrix:
    return tuple(
        tuple(row[c] for c in range(len(m)) if c != j)
        for r, row in enumerate(m)
        if r != i
    )


def adjugate(m: IntMatrix) -> IntMatrix:
    """Exact adjugate, so that m @ adjugate(m) == det(m) * I."""
    n = len(m)
    if n == 1:
        return ((1,),)
    cof = [
        [(-1) ** (i + j) * determinant(_minor(m, i, j)) for j in range(n)]
        for i in range(n)
    ]
    return tuple(tuple(cof[j][i] for j in range(n)) for i in range(n))


def charpoly(m: IntMatrix) -> tuple[int, ...]:
    """Monic characteristic polynomial det(xI - M).

    Returns coefficients (1, c1, ..., cn) with p(x) = x^n + c1 x^(n-1) + ... + cn,
    computed by the Faddeev-LeVerrier recursion. The divisions in the
    recursion are exact over the integers.
    """
    n = len(m)
    coeffs = [1]
    a = m
    c = -_trace(a)
    coeffs.append(c)
    for k in range(2, n + 1):
        a = mat_mul(m, mat_add(a, mat_scale(identity(n), coeffs[-1])))
        tr = _trace(a)
        if tr % k != 0:
            raise ArithmeticError("non-integral coefficient in charpoly recursion")
        coeffs.append(-tr // k)
    return tuple(coeffs)


def _trace(m: IntMatrix) -> int:
    return sum(m[i][i] for i in range(len(m)))


FracVector = tuple[Fraction, ...]
FracMatrix = tuple[tuple[Fraction, ...], ...]


def frac_matrix(m: Sequence[Sequence[int | Fraction]]) -> FracMatrix:
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def frac_mat_vec(m: FracMatrix, v: Sequence[Fraction]) -> FracVector:
    return tuple(sum((row[j] * v[j] for j in range(len(v))), Fraction(0)) for row in m)


def frac_mat_mul(a: FracMatrix, b: FracMatrix) -> FracMatrix:
    n, k, p = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0)) for j in range(p))
        for i in range(n)
    )


def solve_exact(m: Sequence[Sequence[int | Fraction]], b: Sequence[int | Fraction]) -> FracVector:
    """Solve m x = b exactly over the rationals (Gaussian elimination)."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(m, b)]
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix in exact solve")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for r in range(n):
            if r != k and a[r][k] != 0:
                factor = a[r][k]
                a[r] = [x - factor * y for x, y in zip(a[r], a[k])]
    return tuple(row[n] for row in a)


def inverse_fractions(m: IntMatrix) -> FracMatrix:
    """Exact inverse of an integer matrix as a Fraction matrix."""
    det = determinant(m)
    if det == 0:
        raise ZeroDivisionError("matrix is singular")
    adj = adjugate(m)
    return tuple(tuple(Fraction(x, det) for x in row) for row in adj)
