"""Positive measures on the unit sphere and their Poisson integrals.

Three representable families: the normalized surface measure, surface
measures with a polynomial weight, and finitely atomic measures whose
weights are positive rationals or PSD matrix blocks.  For a harmonic
polynomial weight the Poisson integral is the weight itself (uniqueness of
the Dirichlet-problem solution), so those integrals are exact; everything
else is a finite sum over atoms or a Monte Carlo estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _linalg
from .exactpoly import (
    ComplexRational,
    HermitianPolynomial,
    laplacian,
    sphere_integral,
)
from .poisson import (
    BOUNDARY_TOL,
    BallPoint,
    McConfig,
    McResult,
    eval_poly_terms,
    mc_sphere,
    poisson_kernel,
    poisson_kernel_array,
)
from .tables import format_fraction, parse_fraction


@dataclass(frozen=True)
class SurfaceMeasure:
    """The normalized surface measure sigma."""

    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be >= 1")


class PolyWeightMeasure:
    """Surface measure with density w dsigma, w a real-valued polynomial."""

    def __init__(self, weight: HermitianPolynomial):
        if not weight.is_real_valued():
            raise ValueError("weight polynomial is not real-valued")
        self.weight = weight
        self.d = weight.dim

    def is_harmonic(self) -> bool:
        return laplacian(self.weight).is_zero()

    def is_torus_invariant(self) -> bool:
        """True iff the weight depends only on (|z_1|^2, ..., |z_d|^2)."""
        return all(a == b for (a, b) in self.weight.coeffs)

    def __eq__(self, other):
        return isinstance(other, PolyWeightMeasure) and self.weight == other.weight

    def __repr__(self):
        return f"PolyWeightMeasure(d={self.d}, weight={self.weight!r})"


class AtomicMeasure:
    """Finitely many boundary atoms with positive scalar or PSD block weights.

    Points whose coordinates are given exactly (ComplexRational) keep an
    exact representation, which downstream moment tables exploit; float
    coordinates are accepted for randomized fixtures.
    """

    def __init__(self, d: int, points, weights):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        if len(points) != len(weights) or not points:
            raise ValueError("need equally many points and weights, at least one")
        self.d = d
        exact = all(
            all(isinstance(c, ComplexRational) for c in pt) for pt in points
        )
        self.exact = exact
        pts = []
        for pt in points:
            if len(pt) != d:
                raise ValueError("point dimension mismatch")
            if exact:
                norm2 = sum((c.abs2() for c in pt), Fraction(0))
                if norm2 != 1:
                    raise ValueError(f"atom {pt} is not on the unit sphere")
                pts.append(tuple(pt))
            else:
                cs = tuple(complex(c) for c in pt)
                norm = math.sqrt(sum(abs(c) ** 2 for c in cs))
                if abs(norm - 1.0) > BOUNDARY_TOL:
                    raise ValueError(f"atom {cs} is not on the unit sphere")
                pts.append(cs)
        self.points = tuple(pts)

        ws = []
        r = None
        for w in weights:
            if isinstance(w, (int, Fraction)):
                w = Fraction(w)
                if w <= 0:
                    raise ValueError("scalar atom weights must be positive")
                if r is None:
                    r = 1
                elif r != 1:
                    raise ValueError("mixed scalar and matrix weights")
                ws.append(w)
            else:
                block = _linalg.qc_matrix(w) if not isinstance(w, np.ndarray) else w
                size = len(block) if isinstance(block, list) else block.shape[0]
                if r is None:
                    r = size
                elif r != size:
                    raise ValueError("all matrix weights must share one size")
                ok = (
                    _linalg.exact_is_psd(block)
                    if isinstance(block, list)
                    else _linalg.float_is_psd(np.asarray(block, dtype=complex))
                )
                if not ok:
                    raise ValueError("matrix atom weights must be PSD")
                ws.append(
                    tuple(tuple(row) for row in block)
                    if isinstance(block, list)
                    else np.asarray(block, dtype=complex)
                )
        self.weights = tuple(ws)
        self.r = r or 1

    def float_points(self) -> np.ndarray:
        if self.exact:
            return np.array(
                [[c.to_complex() for c in pt] for pt in self.points], dtype=complex
            )
        return np.array(self.points, dtype=complex)

    def float_weights(self) -> list:
        out = []
        for w in self.weights:
            if isinstance(w, Fraction):
                out.append(float(w))
            elif isinstance(w, np.ndarray):
                out.append(w)
            else:
                out.append(np.array([[x.to_complex() for x in row] for row in w]))
        return out

    def __repr__(self):
        return f"AtomicMeasure(d={self.d}, {len(self.points)} atoms, r={self.r})"


Measure = SurfaceMeasure | PolyWeightMeasure | AtomicMeasure


def make_lambda_c(lam, c, d: int | None = None) -> PolyWeightMeasure:
    """Rotation-invariant family: weight lambda + sum_j c_j |z_j|^2.

    Requires lambda > max_j |c_j| (positivity on the sphere) and
    sum_j c_j = 0 (harmonicity of the weight).
    """
    lam = Fraction(lam)
    c = [Fraction(x) for x in c]
    d = len(c) if d is None else d
    if len(c) != d:
        raise ValueError("c must have one entry per variable")
    worst = max((abs(x) for x in c), default=Fraction(0))
    if not lam > worst:
        raise ValueError(
            f"requires lambda > max|c_j|: lambda = {lam}, max|c_j| = {worst}"
        )
    if sum(c) != 0:
        raise ValueError(f"requires sum(c) = 0: sum = {sum(c)}")
    w = HermitianPolynomial.constant(d, lam)
    for j, cj in enumerate(c):
        if cj:
            e = tuple(1 if i == j else 0 for i in range(d))
            w = w + HermitianPolynomial.term(d, e, e, cj)
    return PolyWeightMeasure(w)


def make_b_lambda(lam, b, d: int | None = None) -> PolyWeightMeasure:
    """Pluriharmonic family: weight lambda + sum_j (b_j z_j + conj(b_j z_j)).

    Requires lambda^2 > 2 sum_j |b_j|^2.
    """
    lam = Fraction(lam)
    b = [ComplexRational.coerce(x) for x in b]
    d = len(b) if d is None else d
    if len(b) != d:
        raise ValueError("b must have one entry per variable")
    bound = 2 * sum((x.abs2() for x in b), Fraction(0))
    if not lam * lam > bound:
        raise ValueError(
            f"requires lambda^2 > 2*sum|b_j|^2: lambda^2 = {lam * lam}, bound = {bound}"
        )
    w = HermitianPolynomial.constant(d, lam)
    zero = (0,) * d
    for j, bj in enumerate(b):
        if bj.is_zero():
            continue
        e = tuple(1 if i == j else 0 for i in range(d))
        w = w + HermitianPolynomial.term(d, e, zero, bj)
        w = w + HermitianPolynomial.term(d, zero, e, bj.conjugate())
    return PolyWeightMeasure(w)


def surface(d: int) -> SurfaceMeasure:
    return SurfaceMeasure(d)


def dirac(point, d: int | None = None, weight=1) -> AtomicMeasure:
    d = len(point) if d is None else d
    return AtomicMeasure(d, [tuple(point)], [weight])


def weight_polynomial(mu: Measure) -> HermitianPolynomial:
    """The sigma-density of a surface-type measure, as a polynomial."""
    if isinstance(mu, SurfaceMeasure):
        return HermitianPolynomial.constant(mu.d, 1)
    if isinstance(mu, PolyWeightMeasure):
        return mu.weight
    raise ValueError("atomic measures have no polynomial density")


def has_harmonic_weight(mu: Measure) -> bool:
    if isinstance(mu, SurfaceMeasure):
        return True
    if isinstance(mu, PolyWeightMeasure):
        return mu.is_harmonic()
    return False


def total_mass(mu: Measure):
    """Exact total mass: a Fraction, or an r x r block for matrix atoms."""
    if isinstance(mu, SurfaceMeasure):
        return Fraction(1)
    if isinstance(mu, PolyWeightMeasure):
        v = sphere_integral(mu.weight)
        if not v.is_real():
            raise ValueError("real-valued weight integrated to non-real mass")
        return v.re
    if mu.r == 1:
        return sum(mu.weights, Fraction(0))
    if any(isinstance(w, np.ndarray) for w in mu.weights):
        return sum(mu.float_weights())
    acc = [[ComplexRational(0)] * mu.r for _ in range(mu.r)]
    for w in mu.weights:
        acc = [[a + x for a, x in zip(ar, wr)] for ar, wr in zip(acc, w)]
    return tuple(tuple(row) for row in acc)


def poisson_integral(mu: Measure, z, cfg: McConfig | None = None):
    """P[mu](z) for interior z: float scalar (or r x r float matrix).

    Exact routes: 1 for sigma, the weight value for harmonic polynomial
    weights, and the finite atom sum.  Non-harmonic polynomial weights fall
    back to Monte Carlo over the sphere (use poisson_integral_mc for the
    error bar).
    """
    zp = z if isinstance(z, BallPoint) else BallPoint.interior(z)
    if isinstance(mu, SurfaceMeasure):
        return 1.0
    if isinstance(mu, PolyWeightMeasure):
        if mu.is_harmonic():
            return mu.weight.evaluate(zp.coords).real
        return poisson_integral_mc(mu, zp, cfg).estimate
    vals = [poisson_kernel(zp, BallPoint.boundary(pt)) for pt in _float_atoms(mu)]
    ws = mu.float_weights()
    if mu.r == 1:
        return float(sum(v * w for v, w in zip(vals, ws)))
    return sum((v * w for v, w in zip(vals, ws)), np.zeros((mu.r, mu.r), dtype=complex))


def poisson_integral_mc(
    mu: PolyWeightMeasure, z, cfg: McConfig | None = None
) -> McResult:
    """Monte Carlo sigma-integral of P(z, .) w(.), with standard error."""
    zp = z if isinstance(z, BallPoint) else BallPoint.interior(z)
    cfg = cfg or McConfig(sample_count=200_000, seed=7)
    zarr = zp.array()
    terms = mu.weight.float_terms()

    def f(Z):
        return poisson_kernel_array(
            np.broadcast_to(zarr, Z.shape), Z
        ) * eval_poly_terms(terms, Z)

    return mc_sphere(f, mu.d, cfg)


def _float_atoms(mu: AtomicMeasure):
    return [tuple(row) for row in mu.float_points()]


# -- JSON descriptors ----------------------------------------------------------


def _encode_coord(c) -> list:
    if isinstance(c, ComplexRational):
        return [format_fraction(c.re), format_fraction(c.im)]
    c = complex(c)
    return [c.real, c.imag]


def _decode_coord(pair):
    re, im = pair
    if isinstance(re, str):
        return ComplexRational(parse_fraction(re), parse_fraction(im))
    return complex(float(re), float(im))


def measure_to_json(mu: Measure) -> dict:
    if isinstance(mu, SurfaceMeasure):
        return {"type": "surface", "d": mu.d}
    if isinstance(mu, PolyWeightMeasure):
        lam, c, b = _recognize_family(mu)
        if c is not None:
            return {"type": "lambda_c", "d": mu.d, "lambda": format_fraction(lam),
                    "c": [format_fraction(x) for x in c]}
        if b is not None:
            return {"type": "b_lambda", "d": mu.d, "lambda": format_fraction(lam),
                    "b": [_encode_coord(x) for x in b]}
        raise ValueError("only the lambda_c and b_lambda weight families serialize")
    out = {"type": "atomic", "d": mu.d,
           "points": [[_encode_coord(c) for c in pt] for pt in mu.points]}
    ws = []
    for w in mu.weights:
        if isinstance(w, Fraction):
            ws.append(format_fraction(w))
        elif isinstance(w, np.ndarray):
            ws.append([[_encode_coord(x) for x in row] for row in w])
        else:
            ws.append([[_encode_coord(x) for x in row] for row in w])
    out["weights"] = ws
    return out


def _recognize_family(mu: PolyWeightMeasure):
    """Split a weight into (lambda, c, b); c or b is None when not that family."""
    d = mu.d
    zero = (0,) * d
    lam = Fraction(0)
    c = [Fraction(0)] * d
    b = [ComplexRational(0)] * d
    is_c = True
    is_b = True
    for (a, bb), v in mu.weight.coeffs.items():
        if (a, bb) == (zero, zero):
            lam = v.re
        elif a == bb and sum(a) == 1:
            c[a.index(1)] = v.re
            is_b = False
        elif sum(a) == 1 and sum(bb) == 0:
            b[a.index(1)] = v
            is_c = False
        elif sum(a) == 0 and sum(bb) == 1:
            is_c = False  # conjugate partner of a b-term
        else:
            return lam, None, None
    if is_c:
        return lam, c, None
    if is_b:
        return lam, None, b
    return lam, None, None


def measure_from_json(data: dict) -> Measure:
    kind = data.get("type")
    d = int(data["d"])
    if kind == "surface":
        return SurfaceMeasure(d)
    if kind == "lambda_c":
        return make_lambda_c(parse_fraction(data["lambda"]),
                             [parse_fraction(x) for x in data["c"]], d)
    if kind == "b_lambda":
        return make_b_lambda(parse_fraction(data["lambda"]),
                             [_decode_coord(x) for x in data["b"]], d)
    if kind == "atomic":
        points = [[_decode_coord(c) for c in pt] for pt in data["points"]]
        weights = []
        for w in data["weights"]:
            if isinstance(w, str):
                weights.append(parse_fraction(w))
            else:
                weights.append([[_decode_coord(x) for x in row] for row in w])
        return AtomicMeasure(d, points, weights)
    raise ValueError(f"unknown measure type {kind!r}")
