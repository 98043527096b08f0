"""Catalog of model spaces with exact monomial Gram data.

Covered: the reproducing-kernel family H_p with kernel (1 - <z,w>)^(-p)
(p = d is the Hardy space, p = 1 the Drury-Arveson space), the two
explicit Dirichlet-type families (rotation-invariant weights
lambda + sum c_j |z_j|^2 and pluriharmonic weights
lambda + 2 sum Re(b_j z_j)), one-dimensional Dirichlet spaces, and custom
user-supplied tables.

Monomial pairings of H_p follow a! Gamma(p) / Gamma(|a|+p); the Gamma
ratio is the reciprocal Pochhammer 1/(p)_{|a|}, exact for rational p.
Float p falls back to a float-entry table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .dirichlet import dirichlet_inner
from .exactpoly import ComplexRational, sphere_monomial_integral
from .measures import (
    Measure,
    PolyWeightMeasure,
    SurfaceMeasure,
    make_b_lambda,
    make_lambda_c,
    measure_from_json,
)
from .multiindex import (
    MultiIndex,
    enumerate_upto,
    index_factorial,
    order,
    unit,
)
from .tables import GramTable, parse_fraction

__all__ = [
    "GramTable",
    "Hp",
    "DirichletLambdaC",
    "DirichletBLambda",
    "Custom",
    "SpaceSpec",
    "gram",
    "multishift_weights",
    "one_d_dirichlet",
    "hardy_norm_sq",
    "space_from_json",
]


@dataclass(frozen=True)
class Hp:
    """Reproducing-kernel space with kernel (1 - <z, w>)^(-p), p > 0."""

    p: object  # Fraction for the exact path, float otherwise
    d: int

    def __post_init__(self):
        if isinstance(self.p, (int, Fraction)):
            object.__setattr__(self, "p", Fraction(self.p))
        if float(self.p) <= 0:
            raise ValueError("H_p requires p > 0")


@dataclass(frozen=True)
class DirichletLambdaC:
    lam: Fraction
    c: tuple
    d: int

    def measure(self) -> PolyWeightMeasure:
        return make_lambda_c(self.lam, list(self.c), self.d)


@dataclass(frozen=True)
class DirichletBLambda:
    lam: Fraction
    b: tuple
    d: int

    def measure(self) -> PolyWeightMeasure:
        return make_b_lambda(self.lam, list(self.b), self.d)


@dataclass(frozen=True)
class Custom:
    table: GramTable


SpaceSpec = Hp | DirichletLambdaC | DirichletBLambda | Custom


def hardy_norm_sq(alpha: MultiIndex, d: int) -> Fraction:
    return sphere_monomial_integral(alpha, alpha, d)


def _pochhammer(p: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out *= p + i
    return out


def lambda_c_diagonal(spec: DirichletLambdaC, alpha: MultiIndex) -> Fraction:
    """Squared monomial norm in D(mu_{lambda,c}) (closed form)."""
    lam = Fraction(spec.lam)
    n = order(alpha)
    kc = _k_c(spec, alpha)
    return hardy_norm_sq(alpha, spec.d) * (1 + lam * n + kc)


def _k_c(spec: DirichletLambdaC, alpha: MultiIndex) -> Fraction:
    n = order(alpha)
    s = sum((Fraction(ck) * ak for ck, ak in zip(spec.c, alpha)), Fraction(0))
    return Fraction(n - 1, n + spec.d) * s


def gram(spec: SpaceSpec, N: int) -> GramTable:
    """Exact monomial Gram table of the space up to total degree N."""
    if isinstance(spec, Custom):
        return spec.table.restrict(min(N, spec.table.N))
    if isinstance(spec, Hp):
        return _gram_hp(spec, N)
    if isinstance(spec, DirichletLambdaC):
        t = GramTable(spec.d, N)
        for a in enumerate_upto(spec.d, N):
            t.set_entry(a, a, ComplexRational(lambda_c_diagonal(spec, a)))
        return t
    if isinstance(spec, DirichletBLambda):
        return _gram_b_lambda(spec, N)
    raise TypeError(f"unknown space spec {spec!r}")


def _gram_hp(spec: Hp, N: int) -> GramTable:
    t = GramTable(spec.d, N)
    if isinstance(spec.p, Fraction):
        for a in enumerate_upto(spec.d, N):
            t.set_entry(a, a, ComplexRational(
                Fraction(index_factorial(a)) / _pochhammer(spec.p, order(a))))
    else:
        p = float(spec.p)
        for a in enumerate_upto(spec.d, N):
            val = index_factorial(a) * math.gamma(p) / math.gamma(order(a) + p)
            t.set_entry(a, a, complex(val))
    return t


def _gram_b_lambda(spec: DirichletBLambda, N: int) -> GramTable:
    d = spec.d
    lam = Fraction(spec.lam)
    t = GramTable(d, N)
    for a in enumerate_upto(d, N):
        n = order(a)
        t.set_entry(a, a, ComplexRational(hardy_norm_sq(a, d) * (1 + lam * n)))
        # bands <z^a, z^(a+e_l)> = b_l |a| (a+e_l)! (d-1)! / (|a|+d)!
        if n == 0:
            continue
        for l in range(d):
            up = tuple(x + e for x, e in zip(a, unit(d, l)))
            if order(up) > N:
                continue
            coef = Fraction(
                n * index_factorial(up) * math.factorial(d - 1),
                math.factorial(n + d),
            )
            bl = ComplexRational.coerce(spec.b[l])
            band = bl * coef
            if not band.is_zero():
                t.set_entry(a, up, band)
                t.set_entry(up, a, band.conjugate())
    return t


def multishift_weights(spec: DirichletLambdaC, alpha: MultiIndex, j: int) -> Fraction:
    """Squared shift weight ||z^(a+e_j)||^2 / ||z^a||^2 of the multishift."""
    lam = Fraction(spec.lam)
    n = order(alpha)
    d = spec.d

    def L(k: int) -> Fraction:
        return 1 + lam * k

    up = tuple(x + e for x, e in zip(alpha, unit(d, j)))
    num = L(n + 1) + _k_c(spec, up)
    den = L(n) + _k_c(spec, alpha)
    return Fraction(alpha[j] + 1, n + d) * num / den


def one_d_dirichlet(nu: Measure, N: int) -> GramTable:
    """Gram table of the disc Dirichlet-type space D(nu), d = 1.

    Constant-weight measures give the diagonal 1 + k * mass directly;
    anything else goes through the quadrature-backed inner product.
    """
    if nu.d != 1:
        raise ValueError("one-dimensional construction needs d = 1")
    t = GramTable(1, N)
    const_mass = _constant_weight_mass(nu)
    if const_mass is not None:
        for k in range(N + 1):
            t.set_entry((k,), (k,), ComplexRational(1 + k * const_mass))
        return t
    from .dirichlet import VectorPolynomial

    basis = [VectorPolynomial.monomial(1, (k,)) for k in range(N + 1)]
    for i in range(N + 1):
        for j in range(N + 1):
            r = dirichlet_inner(basis[i], basis[j], nu)
            if r.mode != "exact":
                raise ValueError("one_d_dirichlet needs an exactly integrable measure")
            t.set_entry((i,), (j,), r.value)
    return t


def _constant_weight_mass(nu: Measure) -> Fraction | None:
    if isinstance(nu, SurfaceMeasure):
        return Fraction(1)
    if isinstance(nu, PolyWeightMeasure):
        zero = ((0,) * nu.d, (0,) * nu.d)
        if not nu.weight.coeffs:
            return Fraction(0)
        if set(nu.weight.coeffs) == {zero}:
            return nu.weight.coeffs[zero].re
    return None


def space_from_json(data: dict) -> SpaceSpec:
    kind = data.get("type")
    d = int(data.get("d", 0) or 0)
    if kind == "hp":
        p = data["p"]
        p = parse_fraction(p) if isinstance(p, str) else float(p)
        return Hp(p, d)
    if kind == "lambda_c":
        mu = measure_from_json(data)
        lam, c = _family_params(mu)
        return DirichletLambdaC(lam, tuple(c), d)
    if kind == "b_lambda":
        return DirichletBLambda(
            parse_fraction(data["lambda"]),
            tuple(_decode_b(x) for x in data["b"]),
            d,
        )
    if kind == "custom":
        return Custom(GramTable.from_json_dict(data["gram"]))
    raise ValueError(f"unknown space type {kind!r}")


def _decode_b(pair):
    re, im = pair
    if isinstance(re, str):
        return ComplexRational(parse_fraction(re), parse_fraction(im))
    return ComplexRational(Fraction(re), Fraction(im))


def _family_params(mu: PolyWeightMeasure):
    from .measures import _recognize_family

    lam, c, _b = _recognize_family(mu)
    return lam, c
