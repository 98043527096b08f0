"""The spherical complex moment problem at desk scale.

A kernel table phi(alpha, beta) collects pairings <z^alpha x, z^beta y>
(for measures: integrals of zeta^alpha conj(zeta)^beta).  Solvability of
the truncated moment problem is tested through positive definiteness and
the spherical Toeplitz identity sum_j phi(a+e_j, b+e_j) = phi(a, b); the
GNS construction then quotients the polynomial span by the null space of
the semi-inner-product and returns the induced multiplication tuple,
which is a spherical isometry on its window.

The moment table of an m-isometric tuple is read off its Gramian defect
array of order m-1; for the multiplication tuple on a Dirichlet-type
space with weight mu this reproduces the forward moments of mu exactly,
which is the computational core of the k-fold norm identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _linalg
from .dirichlet import dirichlet_inner
from .exactpoly import (
    QC_ZERO,
    ComplexRational,
    HermitianPolynomial,
    sphere_integral,
)
from .gramian import defect, gramian_of, spherical_shift_sum
from .measures import (
    AtomicMeasure,
    Measure,
    PolyWeightMeasure,
    SurfaceMeasure,
)
from .multiindex import MultiIndex, add, enumerate_exact, enumerate_upto, multinomial_weight, order
from .tables import GramTable
from .tuples import TruncatedTuple, classify, joint_kernel, orthogonalize

KernelTable = GramTable


def forward_moments(mu: Measure, N: int) -> KernelTable:
    """phi(alpha, beta) = integral zeta^alpha conj(zeta)^beta dmu, |a|,|b| <= N.

    Exact for sigma, polynomial weights and exactly-placed atoms.  Matrix
    atom weights W produce pairing blocks entry[i][j] = <W e_i, e_j>
    (the transpose of the operator block; they coincide for real W).
    """
    if isinstance(mu, (SurfaceMeasure, PolyWeightMeasure)):
        t = KernelTable(mu.d, N)
        labels = enumerate_upto(mu.d, N)
        for a in labels:
            for b in labels:
                h = HermitianPolynomial.term(mu.d, a, b)
                if isinstance(mu, PolyWeightMeasure):
                    h = h * mu.weight
                v = sphere_integral(h)
                t.set_entry(a, b, v)
        return t
    return _atomic_moments(mu, N)


def _atomic_moments(mu: AtomicMeasure, N: int) -> KernelTable:
    t = KernelTable(mu.d, N, r=mu.r)
    labels = enumerate_upto(mu.d, N)
    exact = mu.exact and all(not isinstance(w, np.ndarray) for w in mu.weights)
    for a in labels:
        for b in labels:
            if exact:
                if mu.r == 1:
                    total = QC_ZERO
                    for pt, w in zip(mu.points, mu.weights):
                        total = total + _mono_exact(pt, a, b) * w
                    t.set_entry(a, b, total)
                else:
                    block = [[QC_ZERO] * mu.r for _ in range(mu.r)]
                    for pt, w in zip(mu.points, mu.weights):
                        m = _mono_exact(pt, a, b)
                        for i in range(mu.r):
                            for j in range(mu.r):
                                # pairing block: <W e_i, e_j> = W[j][i]
                                block[i][j] = block[i][j] + m * w[j][i]
                    t.set_entry(a, b, tuple(map(tuple, block)))
            else:
                pts = mu.float_points()
                ws = mu.float_weights()
                if mu.r == 1:
                    total = 0j
                    for pt, w in zip(pts, ws):
                        total += _mono_float(pt, a, b) * w
                    t.set_entry(a, b, total)
                else:
                    acc = np.zeros((mu.r, mu.r), dtype=complex)
                    for pt, w in zip(pts, ws):
                        acc += _mono_float(pt, a, b) * np.asarray(w).T
                    t.set_entry(a, b, tuple(map(tuple, acc)))
    return t


def _mono_exact(pt, a: MultiIndex, b: MultiIndex) -> ComplexRational:
    v = ComplexRational(1)
    for j, (ea, eb) in enumerate(zip(a, b)):
        for _ in range(ea):
            v = v * pt[j]
        for _ in range(eb):
            v = v * pt[j].conjugate()
    return v


def _mono_float(pt, a: MultiIndex, b: MultiIndex) -> complex:
    v = 1 + 0j
    for j, (ea, eb) in enumerate(zip(a, b)):
        v *= pt[j] ** ea * np.conj(pt[j]) ** eb
    return complex(v)


@dataclass(frozen=True)
class ConditionsReport:
    psd: bool
    min_eig: float | None  # None on the exact path
    toeplitz: bool
    toeplitz_residual: float
    exact: bool

    def all_pass(self) -> bool:
        return self.psd and self.toeplitz

    def to_json_dict(self) -> dict:
        return {
            "psd": self.psd,
            "min_eig": self.min_eig,
            "toeplitz": self.toeplitz,
            "toeplitz_residual": self.toeplitz_residual,
            "exact": self.exact,
        }


def check_conditions(phi: KernelTable, tol: float = _linalg.PSD_TOL) -> ConditionsReport:
    """PSD of the flattened table and the spherical Toeplitz identity."""
    exact = phi.exact
    if exact:
        psd = phi.is_psd()
        min_eig = None
    else:
        flat = phi.flatten()
        min_eig = _linalg.float_min_eig(np.asarray(flat))
        psd = min_eig >= -tol * max(1.0, phi.max_abs())
    if phi.N < 1:
        return ConditionsReport(psd, min_eig, True, 0.0, exact)
    shifted = spherical_shift_sum(phi, 1)
    resid_table = shifted - phi.restrict(phi.N - 1)
    res = resid_table.max_abs()
    toeplitz = resid_table.is_zero() if exact else res <= tol * max(1.0, phi.max_abs())
    return ConditionsReport(psd, min_eig, toeplitz, res, exact)


# -- GNS construction ------------------------------------------------------------


def gns(phi: KernelTable) -> TruncatedTuple:
    """Multiplication tuple induced on the quotient by the null space.

    The flattened table is the Gram matrix of the classes [z^alpha e_i];
    greedy graded pivoting finds a basis of the quotient (exact rank on
    rational tables, relative threshold 1e-10 otherwise), and each shifted
    class expands over the pivots through one principal-block solve.
    Construction is refused when the table is not PSD.
    """
    labels = phi.flat_labels()
    flat = phi.flatten()
    scalar = phi.r == 1
    if phi.exact:
        pivots = _exact_pivots(flat)
    else:
        pivots = _float_pivots(np.asarray(flat))
    if pivots is None:
        raise ValueError("kernel table is not PSD; GNS construction refused")
    pos = {lab: i for i, lab in enumerate(labels)}
    pivot_labels = [labels[i] for i in pivots]

    expansions = _expansions(flat, pivots, len(labels), exact=phi.exact)

    basis = [(lab[0] if scalar else lab) for lab in pivot_labels]
    degrees = [order(lab[0]) for lab in pivot_labels]
    d, N = phi.d, phi.N
    mult = []
    for j in range(d):
        col: dict = {}
        for pi, lab in enumerate(pivot_labels):
            a, i = lab
            if order(a) > N - 1:
                continue
            target = (tuple(x + (1 if t == j else 0) for t, x in enumerate(a)), i)
            tcol = expansions[pos[target]]
            entries = []
            for pj, coef in tcol:
                if _nz(coef):
                    entries.append((basis[pj], coef))
            col[basis[pi]] = entries
        mult.append(col)
    gram: dict = {}
    for ip, lp in enumerate(pivot_labels):
        for iq, lq in enumerate(pivot_labels):
            # <v_p, v_q> sits at flat[row q][col p]
            v = flat[pos[lq]][pos[lp]] if phi.exact else flat[pos[lq], pos[lp]]
            if _nz(v):
                gram[(basis[ip], basis[iq])] = v
    return TruncatedTuple(d, N, basis, degrees, mult, gram)


def _nz(x) -> bool:
    return not x.is_zero() if isinstance(x, ComplexRational) else x != 0


def _exact_pivots(flat) -> list[int] | None:
    n = len(flat)
    s = [row[:] for row in flat]
    pivots: list[int] = []
    for c in range(n):
        diag = s[c][c]
        if not diag.is_real():
            raise ValueError("kernel table is not Hermitian")
        if diag.re < 0:
            return None
        if diag.re == 0:
            continue
        pivots.append(c)
        for i in range(c + 1, n):
            fi = s[i][c]
            if fi.is_zero():
                continue
            ratio = fi / diag
            for j in range(c + 1, n):
                s[i][j] = s[i][j] - ratio * s[c][j]
    return pivots


def _float_pivots(flat: np.ndarray, tol: float = _linalg.PSD_TOL) -> list[int] | None:
    n = flat.shape[0]
    s = flat.astype(complex).copy()
    scale = max(1.0, float(np.max(np.abs(np.diag(s)))) if n else 1.0)
    pivots: list[int] = []
    for c in range(n):
        diag = s[c, c].real
        if diag < -tol * scale:
            return None
        if diag <= tol * scale:
            continue
        pivots.append(c)
        col = s[c + 1 :, c] / s[c, c]
        s[c + 1 :, c + 1 :] -= np.outer(col, s[c, c + 1 :])
    return pivots


def _expansions(flat, pivots, n, exact: bool):
    """Column -> [(pivot position, coefficient)] expansions over the pivots."""
    out: list[list[tuple[int, object]]] = [[] for _ in range(n)]
    pivot_set = {p: k for k, p in enumerate(pivots)}
    if not pivots:
        return out
    if exact:
        block = [[flat[i][j] for j in pivots] for i in pivots]
        rhs = [[flat[i][j] for j in range(n)] for i in pivots]
        sol = _linalg.exact_solve(block, rhs)
        for j in range(n):
            if j in pivot_set:
                out[j] = [(pivot_set[j], ComplexRational(1))]
            else:
                out[j] = [(k, sol[k][j]) for k in range(len(pivots))]
        return out
    arr = np.asarray(flat)
    block = arr[np.ix_(pivots, pivots)]
    rhs = arr[pivots, :]
    sol = np.linalg.solve(block, rhs)
    for j in range(n):
        if j in pivot_set:
            out[j] = [(pivot_set[j], 1 + 0j)]
        else:
            out[j] = [(k, complex(sol[k, j])) for k in range(len(pivots))]
    return out


# -- moment kernels of m-isometries ----------------------------------------------


def miso_kernel(T: TruncatedTuple, m: int) -> KernelTable:
    """Moment table of an m-isometric tuple: the (m-1)-st Gramian defect.

    phi(a, b) = sum_{j<m} (-1)^(j+m-1) C(m-1, j) sum_{|g|=j} (|g|!/g!)
                <T^(a+g) f_u, T^(b+g) f_v>
    over the orthonormal wandering frame.
    """
    cl = classify(T, m)
    if cl.kind == "inconclusive":
        raise ValueError("window too small to certify the m-isometry")
    if not cl.is_isometry():
        raise ValueError(f"tuple is not an m-isometry on its window (got {cl.kind})")
    g = gramian_of(T)
    return defect(g, m - 1)


def verify_model(T: TruncatedTuple, mu: Measure, k: int, alpha, beta) -> ComplexRational:
    """Residual of the k-fold spherical-moment model identity.

    Left side: <Q_T^k(I) T^alpha f, T^beta f> - <T^alpha f, T^beta f>
    computed from the tuple data over its wandering frame.  Right side:
    the same combination of D(mu) inner products of the shifted monomials
    computed by exact quadrature.  Expected to vanish when T is the
    multiplication tuple of D(mu).
    """
    alpha, beta = tuple(alpha), tuple(beta)
    if max(order(alpha), order(beta)) + k > T.N:
        raise ValueError("window too small for the requested indices")
    kernel = joint_kernel(T)
    frame = orthogonalize(T, kernel)
    if len(frame) != 1:
        raise ValueError("model verification expects a one-dimensional frame")
    f, n2 = frame[0]

    lhs = QC_ZERO
    for gm in enumerate_exact(T.d, k):
        w = multinomial_weight(gm)
        lhs = lhs + w * T.pair_powers(add(alpha, gm), f, add(beta, gm), f)
    lhs = lhs - T.pair_powers(alpha, f, beta, f)
    lhs = lhs * Fraction(1, 1) / n2  # frame vector normalized through its norm^2

    rhs = QC_ZERO
    mono = HermitianPolynomial.holomorphic_monomial
    for gm in enumerate_exact(T.d, k):
        w = multinomial_weight(gm)
        inner = dirichlet_inner(mono(T.d, add(alpha, gm)), mono(T.d, add(beta, gm)), mu)
        if inner.mode != "exact":
            raise ValueError("model verification needs an exactly integrable measure")
        rhs = rhs + w * inner.value
    inner0 = dirichlet_inner(mono(T.d, alpha), mono(T.d, beta), mu)
    rhs = rhs - inner0.value
    return lhs - rhs


# -- inverse problems (limited scope) --------------------------------------------


def recover_measure_1d(phi: KernelTable) -> AtomicMeasure:
    """Atoms and masses from a singular one-dimensional Toeplitz table.

    Classical truncated trigonometric moment problem: a null vector of
    the flattened table gives a polynomial whose roots carry the atoms;
    masses follow from a Vandermonde solve.  Requires d = 1, a singular
    PSD table, and returns a float-coordinate atomic measure.
    """
    if phi.d != 1 or phi.r != 1:
        raise ValueError("one-dimensional scalar tables only")
    flat = np.asarray(
        phi.flatten() if not phi.exact else _linalg.to_complex_array(phi.flatten())
    )
    n = flat.shape[0]
    rank = _linalg.float_rank(flat)
    if rank >= n:
        raise ValueError("table is positive definite; atoms are not determined")
    null = _linalg.float_null_space(flat)
    coeffs = null[:, 0]
    roots = np.roots(coeffs[::-1])
    roots = roots[np.abs(np.abs(roots) - 1.0) < 1e-6]
    atoms = [r / abs(r) for r in roots]
    V = np.array([[a ** k for a in atoms] for k in range(n)], dtype=complex)
    m0 = np.array([complex(_entry(phi, (k,), (0,))) for k in range(n)])
    masses, *_ = np.linalg.lstsq(V, m0, rcond=None)
    keep = [(a, mw.real) for a, mw in zip(atoms, masses) if mw.real > 1e-10]
    return AtomicMeasure(1, [(complex(a),) for a, _ in keep],
                         [Fraction(w).limit_denominator(10**12) for _, w in keep])


def recover_atoms(phi: KernelTable, support_size: int) -> AtomicMeasure:
    """Atoms of a table declared atomic with known support size <= 3.

    Runs the GNS construction and reads the atoms off the joint spectrum
    of the induced commuting tuple (simultaneous diagonalization of a
    random real combination); masses come from a linear solve against the
    zeroth-column moments.
    """
    if support_size > 3:
        raise ValueError("supported only for at most 3 atoms")
    if phi.r != 1:
        raise ValueError("scalar tables only")
    S = gns(phi)
    s = len(S.basis)
    if s != support_size:
        raise ValueError(f"quotient dimension {s} does not match declared size")
    d = phi.d
    mats = []
    pos = {lab: i for i, lab in enumerate(S.basis)}
    for j in range(d):
        m = np.zeros((s, s), dtype=complex)
        for src, col in S.mult[j].items():
            for dst, c in col:
                m[pos[dst], pos[src]] = complex(c)
        mats.append(m)
    rng = np.random.default_rng(1234)
    t = rng.standard_normal(d)
    combo = sum(tj * mj for tj, mj in zip(t, mats))
    _vals, vecs = np.linalg.eig(combo)
    vinv = np.linalg.inv(vecs)
    atoms = []
    for i in range(s):
        coords = [complex((vinv @ mj @ vecs)[i, i]) for mj in mats]
        norm = float(np.sqrt(sum(abs(c) ** 2 for c in coords)))
        atoms.append(tuple(c / norm for c in coords))
    rows = []
    rhs = []
    for a in enumerate_upto(d, min(phi.N, support_size)):
        rows.append([_mono_float(pt, a, (0,) * d) for pt in atoms])
        rhs.append(complex(_entry(phi, a, (0,) * d)))
    masses, *_ = np.linalg.lstsq(np.array(rows, dtype=complex), np.array(rhs), rcond=None)
    return AtomicMeasure(
        d,
        [tuple(pt) for pt in atoms],
        [Fraction(float(w.real)).limit_denominator(10**12) for w in masses],
    )


def _entry(phi: KernelTable, a, b) -> complex:
    v = phi.get(a, b)
    return v.to_complex() if isinstance(v, ComplexRational) else complex(v)


def kernel_to_json_dict(phi: KernelTable) -> dict:
    out = phi.to_json_dict()
    out["kind"] = "moment"
    return out
