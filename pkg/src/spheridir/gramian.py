"""Gramian arrays over a wandering frame and their defect calculus.

For a tuple T with joint kernel frame {f_i}, the Gramian array stores
G(alpha, beta)[i][j] = <T^alpha f_i, T^beta f_j> over an orthonormalized
frame.  The backward shifts sigma_j re-index blocks by alpha+e_j,
beta+e_j, and the n-th defect array is

    defect(A, n) = sum_{j=0..n} (-1)^(j+n) C(n,j) sum_{|g|=j} (|g|!/g!) sigma^g A,

equivalently (Q - I)^n A with Q = sum_j sigma_j.  The characterization
checks: the tuple is window-consistent with a joint m-isometry iff
defect(G, m) = 0, iff the spherical shift sums match the binomial
combination of lower defects, iff Q fixes defect(G, m-1).

All statements here are about the truncated window only; a pass means
"consistent with" the operator statement up to degree N, never a proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .exactpoly import ComplexRational, sqrt_fraction
from .multiindex import MultiIndex, add, enumerate_exact, multinomial_weight, order
from .tables import GramTable, linear_combination
from .tuples import TruncatedTuple, joint_kernel, orthogonalize

GramianArray = GramTable


def backward_shift(a: GramTable, gamma: MultiIndex) -> GramTable:
    """sigma^gamma: entries re-indexed by +gamma, degree bound N - |gamma|."""
    g = order(gamma)
    if g > a.N:
        raise ValueError(f"|gamma| = {g} exceeds the degree bound {a.N}")
    out = GramTable(a.d, a.N - g, r=a.r)
    for al in out.labels():
        for be in out.labels():
            v = a.entries.get((add(al, gamma), add(be, gamma)))
            if v is not None:
                out.set_entry(al, be, v)
    return out


def spherical_shift_sum(a: GramTable, j: int) -> GramTable:
    """sum over |gamma| = j of (|gamma|!/gamma!) sigma^gamma, bound N - j."""
    gammas = enumerate_exact(a.d, j)
    parts = [backward_shift(a, gm) for gm in gammas]
    coeffs = [multinomial_weight(gm) for gm in gammas]
    return linear_combination(parts, coeffs)


def defect(a: GramTable, n: int) -> GramTable:
    """The n-th defect array, on degree bound N - n."""
    if n > a.N:
        raise ValueError(f"defect order {n} exceeds the degree bound {a.N}")
    parts = [spherical_shift_sum(a, j) for j in range(n + 1)]
    coeffs = [(-1) ** (j + n) * comb(n, j) for j in range(n + 1)]
    return linear_combination(parts, coeffs)


@dataclass(frozen=True)
class TheoremReport:
    """Window-level residuals of the defect-array characterizations.

    Assumes the wandering subspace property of the source tuple; on a
    truncation that property is itself only checkable up to degree N.
    """

    m: int
    window: int
    cond_defect_zero: bool
    res_defect_zero: float
    cond_shift_sums: dict
    cond_fixed_point: bool
    res_fixed_point: float
    defect_prev_psd: bool
    assumption: str = "wandering subspace property assumed; window-level check"

    def all_pass(self, k_values=None) -> bool:
        ks = self.cond_shift_sums if k_values is None else k_values
        return (
            self.cond_defect_zero
            and self.cond_fixed_point
            and all(self.cond_shift_sums[k][0] for k in ks)
        )

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "window": self.window,
            "defect_zero": {"pass": self.cond_defect_zero, "residual": self.res_defect_zero},
            "shift_sums": {
                str(k): {"pass": ok, "residual": res}
                for k, (ok, res) in sorted(self.cond_shift_sums.items())
            },
            "fixed_point": {"pass": self.cond_fixed_point, "residual": self.res_fixed_point},
            "defect_prev_psd": self.defect_prev_psd,
            "assumption": self.assumption,
        }


def _table_residual(x: GramTable, y: GramTable) -> float:
    w = min(x.N, y.N)
    return (x.restrict(w) - y.restrict(w)).max_abs()


def check_theorem(a: GramTable, m: int, k_max: int = 3, tol: float = 1e-10) -> TheoremReport:
    """Evaluate the m-isometry characterizations on the array's window."""
    if a.N < m:
        raise ValueError("window too small for the requested defect order")
    dm = defect(a, m)
    res_ii = dm.max_abs()
    ok_ii = dm.is_zero() if a.exact else res_ii <= tol * max(1.0, a.max_abs())

    defects = [defect(a, j) for j in range(m)]
    cond_iii: dict = {}
    for k in range(0, k_max + 1):
        if a.N < max(k, m - 1):
            continue
        lhs = spherical_shift_sum(a, k)
        rhs = linear_combination(defects, [comb(k, j) for j in range(m)])
        res = _table_residual(lhs, rhs)
        ok = res == 0.0 if a.exact else res <= tol * max(1.0, a.max_abs())
        cond_iii[k] = (ok, res)

    prev = defects[m - 1]
    q_prev = spherical_shift_sum(prev, 1)
    res_iv = _table_residual(q_prev, prev)
    ok_iv = res_iv == 0.0 if a.exact else res_iv <= tol * max(1.0, a.max_abs())

    psd_prev = prev.is_psd()
    return TheoremReport(m, a.N - m, ok_ii, res_ii, cond_iii, ok_iv, res_iv, psd_prev)


def gramian_of(T: TruncatedTuple) -> GramTable:
    """Gramian over the orthonormalized joint kernel of the adjoint tuple.

    Entries are <T^alpha f_i, T^beta f_j> / (||f_i|| ||f_j||); the degree
    bound shrinks by the largest frame degree so every power stays inside
    the truncation.
    """
    kernel = joint_kernel(T)
    if not kernel:
        raise ValueError("joint kernel is trivial; no wandering frame")
    frame = orthogonalize(T, kernel)
    max_deg = 0
    for vec, _n2 in frame:
        max_deg = max(max_deg, max(T._deg[lab] for lab in vec))
    bound = T.N - max_deg
    r = len(frame)
    table = GramTable(T.d, bound, r=r)
    norms = [n2 for _v, n2 in frame]
    for al in table.labels():
        for be in table.labels():
            block = [[None] * r for _ in range(r)]
            nonzero = False
            for i, (fi, _) in enumerate(frame):
                for j, (fj, _) in enumerate(frame):
                    val = T.pair_powers(al, fi, be, fj)
                    val = _normalize(val, norms[i], norms[j])
                    block[i][j] = val
                    if not _is_zero(val):
                        nonzero = True
            if nonzero:
                table.set_entry(al, be, block[0][0] if r == 1 else tuple(map(tuple, block)))
    return table


def _normalize(val, n2i, n2j):
    if _is_zero(val):
        return val
    prod = n2i * n2j
    if isinstance(val, ComplexRational) and not isinstance(prod, float):
        root = sqrt_fraction(prod)
        if root is not None:
            return val / root
        return val.to_complex() / float(np.sqrt(float(prod)))
    return complex(val) / float(np.sqrt(float(prod)))


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, ComplexRational) else x == 0
