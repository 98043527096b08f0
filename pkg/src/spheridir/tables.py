"""Hermitian tables keyed by pairs of multi-indexes.

A table stores pairings entry(alpha, beta) = <v_alpha, v_beta> for basis
labels with |alpha|, |beta| <= N, either as scalars (r = 1) or as r x r
blocks, with entries exact (ComplexRational) or float (complex).  The same
structure carries inner-product tables of model spaces, Gramians over a
wandering frame, and moment kernels.

Flattening convention: the matrix M returned by ``flatten`` satisfies
x* M x = ||sum_u x_u v_u||^2, i.e. M[row (beta,j), col (alpha,i)] =
entry(alpha, beta)[i][j].  All PSD tests and solves go through it.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from . import _linalg
from .exactpoly import QC_ZERO, ComplexRational
from .multiindex import MultiIndex, enumerate_upto, order

Entry = ComplexRational | complex
Block = tuple[tuple[Entry, ...], ...]


def _is_zero_entry(v) -> bool:
    if isinstance(v, ComplexRational):
        return v.is_zero()
    if isinstance(v, complex):
        return v == 0
    return all(_is_zero_entry(x) for row in v for x in row)


def _conj_transpose(v):
    if isinstance(v, ComplexRational):
        return v.conjugate()
    if isinstance(v, complex):
        return v.conjugate()
    r = len(v)
    return tuple(tuple(v[i][j].conjugate() for i in range(r)) for j in range(len(v[0])))


def _entry_to_complex(v):
    if isinstance(v, ComplexRational):
        return v.to_complex()
    return v


def _block_of(v, r: int):
    if r == 1 and isinstance(v, (ComplexRational, complex)):
        return ((v,),)
    return v


class GramTable:
    """Hermitian pairing table over the graded monomial labels."""

    def __init__(self, d: int, N: int, entries: dict | None = None, r: int = 1):
        if d < 1 or N < 0 or r < 1:
            raise ValueError("invalid table shape")
        self.d = d
        self.N = N
        self.r = r
        self.entries: dict[tuple[MultiIndex, MultiIndex], Entry | Block] = {}
        for (a, b), v in (entries or {}).items():
            self.set_entry(a, b, v)

    # -- element access ----------------------------------------------------

    def set_entry(self, alpha: MultiIndex, beta: MultiIndex, value) -> None:
        alpha, beta = tuple(alpha), tuple(beta)
        if len(alpha) != self.d or len(beta) != self.d:
            raise ValueError("key dimension mismatch")
        if order(alpha) > self.N or order(beta) > self.N:
            raise ValueError("key exceeds table degree bound")
        if isinstance(value, (int, Fraction)):
            value = ComplexRational.coerce(value)
        if isinstance(value, (list, tuple)):
            value = tuple(
                tuple(
                    ComplexRational.coerce(x)
                    if isinstance(x, (int, Fraction, ComplexRational))
                    else complex(x)
                    for x in row
                )
                for row in value
            )
            if len(value) != self.r or any(len(row) != self.r for row in value):
                raise ValueError("block shape mismatch")
        if _is_zero_entry(value):
            self.entries.pop((alpha, beta), None)
        else:
            self.entries[(alpha, beta)] = value

    def zero_entry(self):
        if self.r == 1:
            return QC_ZERO if self.exact else 0j
        z = QC_ZERO if self.exact else 0j
        return tuple(tuple(z for _ in range(self.r)) for _ in range(self.r))

    def get(self, alpha: MultiIndex, beta: MultiIndex):
        v = self.entries.get((tuple(alpha), tuple(beta)))
        return self.zero_entry() if v is None else v

    @property
    def exact(self) -> bool:
        for v in self.entries.values():
            if isinstance(v, complex):
                return False
            if isinstance(v, tuple) and not isinstance(v, ComplexRational):
                if any(isinstance(x, complex) for row in v for x in row):
                    return False
        return True

    def labels(self, W: int | None = None) -> list[MultiIndex]:
        return enumerate_upto(self.d, self.N if W is None else W)

    def is_hermitian(self, tol: float = 0.0) -> bool:
        for (a, b), v in self.entries.items():
            mirror = self.entries.get((b, a))
            want = _conj_transpose(v)
            if mirror is None:
                if not _is_zero_entry(want):
                    return False
            elif self.exact:
                if mirror != want:
                    return False
            else:
                mw = np.array(_block_of(mirror, self.r), dtype=complex)
                ww = np.array(_block_of(want, self.r), dtype=complex)
                if not np.allclose(mw, ww, atol=tol, rtol=tol):
                    return False
        return True

    # -- linear structure ---------------------------------------------------

    def restrict(self, W: int) -> "GramTable":
        if W > self.N:
            raise ValueError("cannot enlarge a table by restriction")
        out = GramTable(self.d, W, r=self.r)
        for (a, b), v in self.entries.items():
            if order(a) <= W and order(b) <= W:
                out.entries[(a, b)] = v
        return out

    def __add__(self, other: "GramTable") -> "GramTable":
        return linear_combination([self, other], [1, 1])

    def __sub__(self, other: "GramTable") -> "GramTable":
        return linear_combination([self, other], [1, -1])

    def scaled(self, c) -> "GramTable":
        return linear_combination([self], [c])

    def is_zero(self) -> bool:
        return not self.entries

    def max_abs(self) -> float:
        worst = 0.0
        for v in self.entries.values():
            for row in _block_of(v, self.r):
                for x in row:
                    worst = max(worst, abs(_entry_to_complex(x)))
        return worst

    # -- flattening and PSD -------------------------------------------------

    def flat_labels(self, W: int | None = None) -> list[tuple[MultiIndex, int]]:
        return [(a, i) for a in self.labels(W) for i in range(self.r)]

    def flatten(self, W: int | None = None):
        """Matrix M with M[(beta,j), (alpha,i)] = entry(alpha,beta)[i][j].

        Exact tables give a ComplexRational matrix, float tables a numpy
        array; both satisfy x* M x = ||sum x_u v_u||^2.
        """
        labels = self.flat_labels(W)
        exact = self.exact
        n = len(labels)
        if exact:
            m = [[QC_ZERO] * n for _ in range(n)]
        else:
            m = np.zeros((n, n), dtype=complex)
        for row, (b, j) in enumerate(labels):
            for col, (a, i) in enumerate(labels):
                v = self.entries.get((a, b))
                if v is None:
                    continue
                x = _block_of(v, self.r)[i][j]
                if exact:
                    m[row][col] = x
                else:
                    m[row, col] = _entry_to_complex(x)
        return m

    def is_psd(self, W: int | None = None, tol: float = _linalg.PSD_TOL) -> bool:
        flat = self.flatten(W)
        if self.exact:
            return _linalg.exact_is_psd(flat)
        return _linalg.float_is_psd(flat, tol)

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        ent = []
        for (a, b), v in sorted(self.entries.items()):
            rec: dict = {"alpha": list(a), "beta": list(b)}
            if self.r == 1:
                rec.update(_encode_scalar(v))
            else:
                rec["block"] = [[_encode_pair(x) for x in row] for row in _block_of(v, self.r)]
            ent.append(rec)
        out = {"d": self.d, "N": self.N, "entries": ent}
        if self.r != 1:
            out["r"] = self.r
        return out

    @staticmethod
    def from_json_dict(data: dict) -> "GramTable":
        t = GramTable(int(data["d"]), int(data["N"]), r=int(data.get("r", 1)))
        for rec in data["entries"]:
            a = tuple(int(x) for x in rec["alpha"])
            b = tuple(int(x) for x in rec["beta"])
            if "block" in rec:
                v = tuple(tuple(_decode_pair(x) for x in row) for row in rec["block"])
            else:
                v = _decode_scalar(rec)
            t.set_entry(a, b, v)
        return t

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def __eq__(self, other):
        if not isinstance(other, GramTable):
            return NotImplemented
        return (
            self.d == other.d
            and self.N == other.N
            and self.r == other.r
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"GramTable(d={self.d}, N={self.N}, r={self.r}, {len(self.entries)} entries)"


def linear_combination(tables: list[GramTable], coeffs) -> GramTable:
    """Entrywise sum of integer/rational multiples; degree bound is the min."""
    if not tables:
        raise ValueError("empty combination")
    d, r = tables[0].d, tables[0].r
    if any(t.d != d or t.r != r for t in tables):
        raise ValueError("incompatible tables in combination")
    N = min(t.N for t in tables)
    acc: dict = {}
    for t, c in zip(tables, coeffs):
        for (a, b), v in t.entries.items():
            if order(a) > N or order(b) > N:
                continue
            blk = _block_of(v, r)
            cur = acc.get((a, b))
            if cur is None:
                cur = [[QC_ZERO for _ in range(r)] for _ in range(r)]
            for i in range(r):
                for j in range(r):
                    x = blk[i][j]
                    term = x * c if isinstance(x, ComplexRational) else complex(x) * complex(c)
                    prev = cur[i][j]
                    if isinstance(prev, ComplexRational) and prev.is_zero():
                        cur[i][j] = term
                    elif isinstance(prev, ComplexRational) and isinstance(term, ComplexRational):
                        cur[i][j] = prev + term
                    else:
                        cur[i][j] = _entry_to_complex(prev) + _entry_to_complex(term)
            acc[(a, b)] = cur
    out = GramTable(d, N, r=r)
    for (a, b), blk in acc.items():
        v = blk[0][0] if r == 1 else tuple(tuple(row) for row in blk)
        out.set_entry(a, b, v)
    return out


# -- rational wire encoding ---------------------------------------------------


def format_fraction(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def parse_fraction(s) -> Fraction:
    if isinstance(s, str):
        return Fraction(s)
    raise ValueError(f"expected 'p/q' string, got {s!r}")


def _encode_scalar(v) -> dict:
    if isinstance(v, ComplexRational):
        return {"re": format_fraction(v.re), "im": format_fraction(v.im)}
    return {"re": v.real, "im": v.imag}


def _decode_scalar(rec: dict):
    re, im = rec["re"], rec["im"]
    if isinstance(re, str):
        return ComplexRational(parse_fraction(re), parse_fraction(im))
    return complex(float(re), float(im))


def _encode_pair(v) -> list:
    if isinstance(v, ComplexRational):
        return [format_fraction(v.re), format_fraction(v.im)]
    return [v.real, v.imag]


def _decode_pair(x):
    re, im = x
    if isinstance(re, str):
        return ComplexRational(parse_fraction(re), parse_fraction(im))
    return complex(float(re), float(im))
