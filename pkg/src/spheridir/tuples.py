"""Truncated commuting d-tuples and the spherical form calculus.

A tuple acts on the span of a graded basis (monomials for multiplication
tuples, quotient classes for tuples built from moment kernels) through
sparse matrices that raise the grade by one.  Every isometry-type test is
a bilinear-form test assembled purely from the Gram data:

    qt_form(T, n)[u, v] = sum_{|g|=n} (|g|!/g!) <T^g u, T^g v>
    bm_form(T, m)       = sum_n (-1)^n C(m, n) qt_form(T, n)

so adjoints are never represented on the truncated space.  Forms carry
the valid window W = N - (applications consumed); a test on an empty
window reports "inconclusive" rather than passing silently.

Components may carry a scalar factor sqrt(s_j) symbolically (field
scale_sq), so fixtures like the pair (S/sqrt(2), S/sqrt(2)) stay on the
exact rational path: paired applications only ever need products of two
square roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _linalg
from .exactpoly import QC_ZERO, ComplexRational, sqrt_fraction
from .multiindex import (
    MultiIndex,
    enumerate_exact,
    multinomial_weight,
    order,
    unit,
)
from .tables import GramTable

Vec = dict  # sparse coefficient vector: label -> scalar


class TruncatedTuple:
    def __init__(self, d, N, basis, degrees, mult, gram, scale_sq=None):
        self.d = d
        self.N = N
        self.basis = list(basis)
        self.degrees = list(degrees)
        self.mult = mult  # per operator: {src label: [(dst label, coeff), ...]}
        self.gram = gram  # {(label, label): scalar}, zero entries absent
        self.scale_sq = [Fraction(s) for s in (scale_sq or [1] * d)]
        if any(s <= 0 for s in self.scale_sq):
            raise ValueError("component scales must be positive")
        self._deg = dict(zip(self.basis, self.degrees))

    @property
    def exact(self) -> bool:
        return all(isinstance(v, ComplexRational) for v in self.gram.values()) and all(
            isinstance(c, ComplexRational)
            for m in self.mult
            for col in m.values()
            for (_t, c) in col
        )

    def window_basis(self, W: int) -> list:
        return [b for b, dg in zip(self.basis, self.degrees) if dg <= W]

    def pair(self, u: Vec, v: Vec):
        """<u, v> from the Gram data (linear in u)."""
        if self.exact:
            total = QC_ZERO
            for a, ca in u.items():
                for b, cb in v.items():
                    g = self.gram.get((a, b))
                    if g is not None:
                        total = total + ca * cb.conjugate() * g
            return total
        total = 0j
        for a, ca in u.items():
            for b, cb in v.items():
                g = self.gram.get((a, b))
                if g is not None:
                    total += _cx(ca) * np.conj(_cx(cb)) * _cx(g)
        return total

    def apply_base(self, j: int, vec: Vec) -> Vec:
        """Apply the unscaled j-th matrix to a sparse vector."""
        out: Vec = {}
        for src, c in vec.items():
            col = self.mult[j].get(src)
            if col is None:
                raise ValueError(f"basis element {src} is outside the mult domain")
            for dst, m in col:
                cur = out.get(dst)
                term = c * m
                out[dst] = term if cur is None else cur + term
        return {k: v for k, v in out.items() if not _is_zero(v)}

    def apply_power_base(self, gamma: MultiIndex, vec: Vec) -> Vec:
        for j, e in enumerate(gamma):
            for _ in range(e):
                vec = self.apply_base(j, vec)
        return vec

    def power_scale_sq(self, gamma: MultiIndex) -> Fraction:
        out = Fraction(1)
        for s, e in zip(self.scale_sq, gamma):
            out *= s**e
        return out

    def pair_powers(self, alpha: MultiIndex, u: Vec, beta: MultiIndex, v: Vec):
        """<T^alpha u, T^beta v> including the component scale factors."""
        base = self.pair(self.apply_power_base(alpha, u), self.apply_power_base(beta, v))
        if _is_zero(base):
            return base
        ss = self.power_scale_sq(alpha) * self.power_scale_sq(beta)
        if ss == 1:
            return base
        root = sqrt_fraction(ss)
        if root is None or not isinstance(base, ComplexRational):
            return _cx(base) * float(np.sqrt(float(ss)))
        return base * root

    def basis_vec(self, label) -> Vec:
        return {label: ComplexRational(1) if self.exact else 1 + 0j}

    def check_commutation(self) -> bool:
        """T_i T_j = T_j T_i as maps from the degree <= N-2 window."""
        for u, dg in zip(self.basis, self.degrees):
            if dg > self.N - 2:
                continue
            e = self.basis_vec(u)
            for i in range(self.d):
                vi = self.apply_base(i, e)
                for j in range(i + 1, self.d):
                    vj = self.apply_base(j, e)
                    left = self.apply_base(j, vi)
                    right = self.apply_base(i, vj)
                    if not _vec_eq(left, right):
                        return False
        return True

    def __repr__(self):
        return f"TruncatedTuple(d={self.d}, N={self.N}, dim={len(self.basis)})"


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, ComplexRational) else x == 0


def _cx(x) -> complex:
    return x.to_complex() if isinstance(x, ComplexRational) else complex(x)


def _vec_eq(u: Vec, v: Vec) -> bool:
    keys = set(u) | set(v)
    for k in keys:
        a, b = u.get(k), v.get(k)
        if a is None:
            a = QC_ZERO if isinstance(b, ComplexRational) else 0j
        if b is None:
            b = QC_ZERO if isinstance(a, ComplexRational) else 0j
        if isinstance(a, ComplexRational) and isinstance(b, ComplexRational):
            if a != b:
                return False
        elif complex(a if not isinstance(a, ComplexRational) else a.to_complex()) != complex(
            b if not isinstance(b, ComplexRational) else b.to_complex()
        ):
            return False
    return True


def mult_tuple(space_gram: GramTable) -> TruncatedTuple:
    """The multiplication tuple M_z on a space given by its monomial Gram."""
    d, N = space_gram.d, space_gram.N
    if space_gram.r != 1:
        raise ValueError("multiplication tuples use scalar Gram tables")
    basis = space_gram.labels()
    degrees = [order(a) for a in basis]
    one = ComplexRational(1)
    mult = []
    for j in range(d):
        ej = unit(d, j)
        col = {}
        for a, dg in zip(basis, degrees):
            if dg <= N - 1:
                col[a] = [(tuple(x + e for x, e in zip(a, ej)), one)]
        mult.append(col)
    gram = {k: v for k, v in space_gram.entries.items()}
    return TruncatedTuple(d, N, basis, degrees, mult, gram)


def scaled_pair(T0: TruncatedTuple, d: int) -> TruncatedTuple:
    """The d-tuple with every component T0 / sqrt(d) on T0's space."""
    if T0.d != 1:
        raise ValueError("scaled_pair expects a one-dimensional tuple")
    if d < 1:
        raise ValueError("d must be >= 1")
    if d == 1:
        return T0
    base = T0.mult[0]
    return TruncatedTuple(
        d,
        T0.N,
        T0.basis,
        T0.degrees,
        [base] * d,
        T0.gram,
        scale_sq=[Fraction(T0.scale_sq[0], d)] * d,
    )


# -- windowed forms -------------------------------------------------------------


@dataclass
class WindowedForm:
    """Hermitian form on the degree <= window sub-basis."""

    window: int
    labels: list
    matrix: dict  # (u_label, v_label) -> scalar, form value s(u, v), zeros absent
    exact: bool

    def value(self, u, v):
        x = self.matrix.get((u, v))
        if x is None:
            return QC_ZERO if self.exact else 0j
        return x

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.exact:
            return not self.matrix
        return self.max_abs() <= tol

    def max_abs(self) -> float:
        worst = 0.0
        for x in self.matrix.values():
            worst = max(worst, abs(x.to_complex() if isinstance(x, ComplexRational) else x))
        return worst

    def flatten(self):
        """Standard-orientation matrix: M[i, j] = s(e_j, e_i)."""
        n = len(self.labels)
        pos = {lab: i for i, lab in enumerate(self.labels)}
        if self.exact:
            m = [[QC_ZERO] * n for _ in range(n)]
            for (u, v), x in self.matrix.items():
                m[pos[v]][pos[u]] = x
            return m
        m = np.zeros((n, n), dtype=complex)
        for (u, v), x in self.matrix.items():
            m[pos[v], pos[u]] = _cx(x)
        return m

    def is_psd(self, tol: float = _linalg.PSD_TOL) -> bool:
        flat = self.flatten()
        if self.exact:
            return _linalg.exact_is_psd(flat)
        return _linalg.float_is_psd(flat, tol)

    def is_nsd(self, tol: float = _linalg.PSD_TOL) -> bool:
        return self.negated().is_psd(tol)

    def negated(self) -> "WindowedForm":
        return WindowedForm(
            self.window,
            self.labels,
            {k: -x for k, x in self.matrix.items()},
            self.exact,
        )


def _form_combine(forms: list[WindowedForm], coeffs: list[int]) -> WindowedForm:
    narrowest = min(forms, key=lambda f: f.window)
    labels = narrowest.labels
    keep = set(labels)
    acc: dict = {}
    for f, c in zip(forms, coeffs):
        for (u, v), x in f.matrix.items():
            if u not in keep or v not in keep:
                continue
            term = x * c
            cur = acc.get((u, v))
            acc[(u, v)] = term if cur is None else cur + term
    acc = {k: v for k, v in acc.items() if not _is_zero_scalar(v)}
    exact = all(f.exact for f in forms)
    return WindowedForm(narrowest.window, labels, acc, exact)


def _is_zero_scalar(x) -> bool:
    return x.is_zero() if isinstance(x, ComplexRational) else x == 0


def qt_form(T: TruncatedTuple, n: int) -> WindowedForm:
    """Form of Q_T^n(I): sum over |gamma| = n of weighted power pairings."""
    if n < 0 or n > T.N:
        raise ValueError(f"need 0 <= n <= N = {T.N}")
    W = T.N - n
    labels = T.window_basis(W)
    gammas = enumerate_exact(T.d, n)
    exact = T.exact
    matrix: dict = {}
    for gm in gammas:
        weight = multinomial_weight(gm) * T.power_scale_sq(gm)
        vecs = {u: T.apply_power_base(gm, T.basis_vec(u)) for u in labels}
        for u in labels:
            for v in labels:
                val = T.pair(vecs[u], vecs[v])
                if _is_zero_scalar(val):
                    continue
                term = val * weight if isinstance(val, ComplexRational) else _cx(val) * float(weight)
                cur = matrix.get((u, v))
                matrix[(u, v)] = term if cur is None else cur + term
    matrix = {k: v for k, v in matrix.items() if not _is_zero_scalar(v)}
    return WindowedForm(W, labels, matrix, exact)


def bm_form(T: TruncatedTuple, m: int) -> WindowedForm:
    """Form of B_m(T) = sum_n (-1)^n C(m, n) Q_T^n(I), window N - m."""
    if m < 0 or m > T.N:
        raise ValueError(f"need 0 <= m <= N = {T.N}")
    forms = [qt_form(T, n) for n in range(m + 1)]
    coeffs = [(-1) ** n * _binom(m, n) for n in range(m + 1)]
    return _form_combine(forms, coeffs)


def _binom(m: int, n: int) -> int:
    from math import comb

    return comb(m, n)


@dataclass(frozen=True)
class ClassificationResult:
    kind: str  # "m-isometry" | "m-concave" | "m-convex" | "none" | "inconclusive"
    m: int
    window: int
    exact: bool
    max_residual: float

    def is_isometry(self) -> bool:
        return self.kind == "m-isometry"


def classify(T: TruncatedTuple, m: int, tol: float = _linalg.PSD_TOL) -> ClassificationResult:
    """Classify the tuple's B_m form on its valid window.

    Exact tables use literal zero / sign tests; float tables compare
    eigenvalues against tol scaled by the form's magnitude.  An empty
    window is reported as inconclusive, never as a pass.
    """
    if m > T.N:
        return ClassificationResult("inconclusive", m, -1, T.exact, 0.0)
    form = bm_form(T, m)
    if not form.labels:
        return ClassificationResult("inconclusive", m, form.window, form.exact, 0.0)
    resid = form.max_abs()
    scale = max(1.0, _gram_scale(T))
    if form.exact:
        if form.is_zero():
            return ClassificationResult("m-isometry", m, form.window, True, 0.0)
    elif resid <= tol * scale:
        return ClassificationResult("m-isometry", m, form.window, False, resid)
    signed = form if m % 2 == 0 else form.negated()
    # joint m-concave: (-1)^m B_m <= 0; joint m-convex: (-1)^m B_m >= 0
    if signed.negated().is_psd(tol):
        return ClassificationResult("m-concave", m, form.window, form.exact, resid)
    if signed.is_psd(tol):
        return ClassificationResult("m-convex", m, form.window, form.exact, resid)
    return ClassificationResult("none", m, form.window, form.exact, resid)


def _gram_scale(T: TruncatedTuple) -> float:
    worst = 0.0
    for v in T.gram.values():
        worst = max(worst, abs(v.to_complex() if isinstance(v, ComplexRational) else v))
    return worst


def joint_kernel(T: TruncatedTuple) -> list[Vec]:
    """Basis of {v in the degree <= N-1 span : <v, T_j u> = 0 for all j, u}.

    Computed as the Gram-orthocomplement of the joint range; requires the
    Gram restricted to the window to be positive definite.
    """
    labels = T.window_basis(T.N - 1)
    if not labels:
        return []
    _require_pd(T, labels)
    rows = []
    for j in range(T.d):
        for u in labels:
            img = T.apply_base(j, T.basis_vec(u))
            row = []
            for w in labels:
                total = QC_ZERO if T.exact else 0j
                for t, c in img.items():
                    g = T.gram.get((w, t))
                    if g is None:
                        continue
                    term = c.conjugate() * g if isinstance(g, ComplexRational) else np.conj(complex(c)) * g
                    total = total + term
                row.append(total)
            rows.append(row)
    if T.exact:
        null = _linalg.exact_null_space(rows)
        return [
            {lab: x for lab, x in zip(labels, vec) if not x.is_zero()} for vec in null
        ]
    arr = np.array([[complex(x) for x in row] for row in rows], dtype=complex)
    null = _linalg.float_null_space(arr)
    out = []
    for col in null.T:
        out.append({lab: complex(x) for lab, x in zip(labels, col) if abs(x) > 1e-12})
    return out


def _require_pd(T: TruncatedTuple, labels) -> None:
    n = len(labels)
    if T.exact:
        # standard orientation: rows indexed by the conjugated slot
        flat = [[T.gram.get((a, b), QC_ZERO) for a in labels] for b in labels]
        if not _linalg.exact_is_psd(flat) or _linalg.exact_rank(flat) < n:
            raise ValueError("Gram table is singular on the window")
    else:
        arr = np.zeros((n, n), dtype=complex)
        for i, b in enumerate(labels):
            for j, a in enumerate(labels):
                g = T.gram.get((a, b))
                if g is not None:
                    arr[i, j] = _cx(g)
        if _linalg.float_min_eig(arr) <= _linalg.PSD_TOL:
            raise ValueError("Gram table is singular on the window")


def orthogonalize(T: TruncatedTuple, vectors: list[Vec]) -> list[tuple[Vec, object]]:
    """Gram-Schmidt against the tuple's pairing; returns (vector, norm^2)."""
    out: list[tuple[Vec, object]] = []
    for v in vectors:
        w = dict(v)
        for u, n2 in out:
            c = T.pair(w, u)
            if _is_zero_scalar(c):
                continue
            coef = c / n2 if isinstance(c, ComplexRational) else complex(c) / float(n2)
            for k, x in u.items():
                cur = w.get(k)
                term = coef * x
                w[k] = -term if cur is None else cur - term
        w = {k: x for k, x in w.items() if not _is_zero_scalar(x)}
        if not w:
            continue
        n2 = T.pair(w, w)
        out.append((w, n2.re if isinstance(n2, ComplexRational) else float(np.real(n2))))
    return out
