"""Dense linear algebra over ComplexRational, plus float fallbacks.

Matrices on the exact path are lists of lists of ComplexRational.  Sizes
stay in the hundreds, so O(n^3) Gaussian elimination with exact field
arithmetic is plenty.  Float-path routines delegate to numpy with the
package-wide tolerance 1e-10 (relative to the matrix scale).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .exactpoly import QC_ZERO, ComplexRational

PSD_TOL = 1e-10

QCMatrix = list[list[ComplexRational]]


def qc_matrix(rows) -> QCMatrix:
    return [[ComplexRational.coerce(x) for x in row] for row in rows]


def to_complex_array(a: QCMatrix) -> np.ndarray:
    return np.array([[x.to_complex() for x in row] for row in a], dtype=complex)


def exact_is_hermitian(a: QCMatrix) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i].conjugate() for i in range(n) for j in range(i, n))


def exact_is_zero(a: QCMatrix) -> bool:
    return all(x.is_zero() for row in a for x in row)


def exact_is_psd(a: QCMatrix) -> bool:
    """Exact PSD test for a Hermitian matrix by pivoted elimination.

    Repeatedly eliminates on a strictly positive diagonal pivot; fails on
    any negative diagonal, or on a zero diagonal with a nonzero residual
    row (both certify indefiniteness).
    """
    n = len(a)
    s = [row[:] for row in a]
    active = list(range(n))
    while active:
        pivot = None
        for i in active:
            di = s[i][i]
            if not di.is_real():
                raise ValueError("matrix is not Hermitian")
            if di.re < 0:
                return False
            if di.re > 0 and (pivot is None or di.re > s[pivot][pivot].re):
                pivot = i
        if pivot is None:
            # all remaining diagonals are zero: PSD iff the block vanishes
            return all(s[i][j].is_zero() for i in active for j in active)
        active.remove(pivot)
        piv = s[pivot][pivot]
        for i in active:
            fi = s[i][pivot]
            if fi.is_zero():
                continue
            ratio = fi / piv
            for j in active:
                s[i][j] = s[i][j] - ratio * s[pivot][j]
        for i in active:
            s[i][pivot] = QC_ZERO
            s[pivot][i] = QC_ZERO
    return True


def exact_rref(a: QCMatrix) -> tuple[QCMatrix, list[int]]:
    """Reduced row echelon form; returns (rref, pivot column list)."""
    if not a:
        return [], []
    m, n = len(a), len(a[0])
    s = [row[:] for row in a]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        sel = next((i for i in range(r, m) if not s[i][c].is_zero()), None)
        if sel is None:
            continue
        s[r], s[sel] = s[sel], s[r]
        inv = s[r][c]
        s[r] = [x / inv for x in s[r]]
        for i in range(m):
            if i != r and not s[i][c].is_zero():
                f = s[i][c]
                s[i] = [x - f * y for x, y in zip(s[i], s[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return s, pivots


def exact_null_space(a: QCMatrix) -> list[list[ComplexRational]]:
    """Basis of the right null space of an m x n matrix."""
    if not a:
        return []
    n = len(a[0])
    rref, pivots = exact_rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [QC_ZERO] * n
        v[fc] = ComplexRational(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        basis.append(v)
    return basis


def exact_solve(a: QCMatrix, b: list[list[ComplexRational]]) -> list[list[ComplexRational]]:
    """Solve A X = B for square nonsingular A (columns of B independent)."""
    n = len(a)
    k = len(b[0]) if b else 0
    aug = [a[i][:] + b[i][:] for i in range(n)]
    for c in range(n):
        sel = next((i for i in range(c, n) if not aug[i][c].is_zero()), None)
        if sel is None:
            raise ValueError("singular matrix in exact solve")
        aug[c], aug[sel] = aug[sel], aug[c]
        inv = aug[c][c]
        aug[c] = [x / inv for x in aug[c]]
        for i in range(n):
            if i != c and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n : n + k] for row in aug]


def exact_rank(a: QCMatrix) -> int:
    return len(exact_rref(a)[1])


def float_is_psd(a: np.ndarray, tol: float = PSD_TOL) -> bool:
    if a.size == 0:
        return True
    scale = max(1.0, float(np.linalg.norm(a, ord=np.inf)))
    eigs = np.linalg.eigvalsh(a)
    return bool(eigs.min() >= -tol * scale)


def float_min_eig(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(a).min())


def float_rank(a: np.ndarray, tol: float = PSD_TOL) -> int:
    if a.size == 0:
        return 0
    svals = np.linalg.svd(a, compute_uv=False)
    if svals.size == 0 or svals[0] == 0.0:
        return 0
    return int(np.sum(svals > tol * svals[0]))


def float_null_space(a: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    _, svals, vh = np.linalg.svd(a)
    if svals.size == 0:
        return np.eye(a.shape[1], dtype=complex)
    keep = svals > tol * svals[0]
    return vh[np.count_nonzero(keep) :].conj().T
