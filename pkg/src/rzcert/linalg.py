"""Small dense linear algebra over exact scalars (Fraction / QQi).

Float-mode callers use numpy directly; the helpers at the bottom wrap the few
numpy idioms (nullspace, least squares with residual) shared across modules.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .scalars import conj, demote, imag_part, invert, is_zero, real_part


def _copy(mat):
    return [list(row) for row in mat]


def rref(mat):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = _copy(mat)
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if not is_zero(rows[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = invert(rows[r][c])
        rows[r] = [demote(v * inv) for v in rows[r]]
        for i in range(nrows):
            if i != r and not is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [demote(a - f * b) for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def nullspace(mat, ncols=None):
    """Basis of the right nullspace of an exact matrix (list of vectors)."""
    if not mat:
        n = ncols or 0
        basis = []
        for j in range(n):
            v = [Fraction(0)] * n
            v[j] = Fraction(1)
            basis.append(v)
        return basis
    rows, pivots = rref(mat)
    n = len(mat[0])
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        v = [Fraction(0)] * n
        v[j] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = demote(-rows[r][j])
        basis.append(v)
    return basis


def solve(mat, rhs):
    """Solve mat @ x = rhs exactly. Returns (solution, unique) or (None, False)."""
    n = len(mat[0]) if mat else 0
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    rows, pivots = rref(aug)
    if n in pivots:
        return None, False  # inconsistent
    x = [Fraction(0)] * n
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][-1]
    unique = len(pivots) == n
    return x, unique


def det(mat):
    """Determinant via fraction-free-ish Gaussian elimination over a field."""
    rows = _copy(mat)
    n = len(rows)
    result = Fraction(1)
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if not is_zero(rows[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
            result = -result
        piv = rows[c][c]
        result = demote(result * piv)
        inv = invert(piv)
        for i in range(c + 1, n):
            if not is_zero(rows[i][c]):
                f = demote(rows[i][c] * inv)
                rows[i] = [demote(a - f * b) for a, b in zip(rows[i], rows[c])]
    return result


def inverse(mat):
    n = len(mat)
    aug = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
           for i, row in enumerate(mat)]
    rows, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in rows]


def ldl_hermitian(mat):
    """A = L D L* for an exact hermitian matrix without pivoting.

    Returns (L, D) with L unit lower triangular (QQi entries) and D a list of
    Fractions. Raises ValueError when a zero pivot appears (matrix is neither
    positive nor negative definite).
    """
    n = len(mat)
    work = [[mat[i][j] for j in range(n)] for i in range(n)]
    L = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    D = []
    for k in range(n):
        d = work[k][k]
        if not is_zero(imag_part(d)):
            raise ValueError("hermitian matrix has non-real diagonal")
        d = real_part(d)
        if d == 0:
            raise ValueError("zero pivot in LDL*: matrix is not definite")
        D.append(d)
        for i in range(k + 1, n):
            L[i][k] = demote(work[i][k] * invert(d))
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                work[i][j] = demote(work[i][j] - L[i][k] * d * conj(L[j][k]))
    return L, D


def lower_triangular_inverse(L):
    """Inverse of a unit lower triangular exact matrix."""
    n = len(L)
    inv = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            s = 0
            for k in range(j, i):
                s = s + L[i][k] * inv[k][j]
            inv[i][j] = demote(-s)
    return inv


def mat_mul(A, B):
    n, m = len(A), len(B[0])
    inner = len(B)
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            s = 0
            for k in range(inner):
                s = s + A[i][k] * B[k][j]
            out[i][j] = demote(s)
    return out


def conj_transpose(A):
    return [[conj(A[i][j]) for i in range(len(A))] for j in range(len(A[0]))]


def to_ndarray(mat):
    return np.array([[complex(v) for v in row] for row in mat], dtype=complex)


# ---------------------------------------------------------------------------
# numpy helpers shared by float-mode callers


def nullspace_numeric(a, rtol=1e-10):
    """Orthonormal right-nullspace basis (columns) of a complex matrix."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return np.eye(a.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(a)
    if s.size:
        rank = int(np.sum(s > rtol * s[0]))
    else:
        rank = 0
    return vh[rank:].conj().T


def lstsq_residual(a, b):
    """Least squares solve; returns (x, relative residual)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    scale = max(1.0, float(np.linalg.norm(b)))
    res = float(np.linalg.norm(a @ x - b)) / scale
    return x, res
