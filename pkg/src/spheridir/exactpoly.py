"""Exact calculus of Hermitian polynomials sum c_{ab} z^a conj(z)^b.

Scalars are complex rationals (pairs of Fraction), so every operation in
this module is exact: identities that hold as polynomial equalities come
out with residual literally zero.  The two integral rules,

    integral over the unit sphere (normalized surface measure):
        z^a conj(z)^b  ->  delta_{ab} * a! (d-1)! / (|a|+d-1)!
    integral over the unit ball (normalized volume measure):
        z^a conj(z)^b  ->  delta_{ab} * a! d! / (|a|+d)!

are hard-coded closed forms; the test suite cross-validates each against a
radial-decomposition oracle and Monte Carlo before trusting them.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, isqrt

from .multiindex import MultiIndex, index_factorial, order, sub, validate


class ComplexRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @staticmethod
    def coerce(x) -> "ComplexRational":
        if isinstance(x, ComplexRational):
            return x
        if isinstance(x, (int, Fraction)):
            return ComplexRational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to ComplexRational")

    def __add__(self, other):
        o = ComplexRational.coerce(other)
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = ComplexRational.coerce(other)
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return ComplexRational.coerce(other) - self

    def __mul__(self, other):
        o = ComplexRational.coerce(other)
        return ComplexRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = ComplexRational.coerce(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero ComplexRational")
        return ComplexRational(
            (self.re * o.re + self.im * o.im) / den,
            (self.im * o.re - self.re * o.im) / den,
        )

    def __rtruediv__(self, other):
        return ComplexRational.coerce(other) / self

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.re == other and self.im == 0
        if isinstance(other, ComplexRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"ComplexRational({self.re!r}, {self.im!r})"


QC_ZERO = ComplexRational(0)
QC_ONE = ComplexRational(1)


def sqrt_fraction(f: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    if f < 0:
        raise ValueError("square root of negative rational")
    pn, pd = isqrt(f.numerator), isqrt(f.denominator)
    if pn * pn == f.numerator and pd * pd == f.denominator:
        return Fraction(pn, pd)
    return None


class HermitianPolynomial:
    """Finite sum of terms c * z^alpha * conj(z)^beta in d complex variables.

    Coefficients are ComplexRational; zero coefficients are never stored,
    so equality of canonical forms is polynomial identity.
    """

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: dict | None = None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = dim
        clean: dict[tuple[MultiIndex, MultiIndex], ComplexRational] = {}
        for (a, b), c in (coeffs or {}).items():
            validate(a, dim)
            validate(b, dim)
            c = ComplexRational.coerce(c)
            if not c.is_zero():
                clean[(a, b)] = c
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(d: int) -> "HermitianPolynomial":
        return HermitianPolynomial(d)

    @staticmethod
    def constant(d: int, c) -> "HermitianPolynomial":
        return HermitianPolynomial(d, {((0,) * d, (0,) * d): ComplexRational.coerce(c)})

    @staticmethod
    def term(d: int, alpha: MultiIndex, beta: MultiIndex, c=1) -> "HermitianPolynomial":
        return HermitianPolynomial(d, {(tuple(alpha), tuple(beta)): ComplexRational.coerce(c)})

    @staticmethod
    def holomorphic_monomial(d: int, alpha: MultiIndex, c=1) -> "HermitianPolynomial":
        return HermitianPolynomial.term(d, alpha, (0,) * d, c)

    @staticmethod
    def norm_squared(d: int) -> "HermitianPolynomial":
        """The polynomial ||z||^2 = sum_j z_j conj(z_j)."""
        coeffs = {}
        for j in range(d):
            e = tuple(1 if i == j else 0 for i in range(d))
            coeffs[(e, e)] = QC_ONE
        return HermitianPolynomial(d, coeffs)

    # -- ring operations ---------------------------------------------------

    def _require_same_dim(self, other: "HermitianPolynomial") -> None:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch between polynomials")

    def __add__(self, other: "HermitianPolynomial") -> "HermitianPolynomial":
        self._require_same_dim(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, QC_ZERO) + c
        return HermitianPolynomial(self.dim, out)

    def __sub__(self, other: "HermitianPolynomial") -> "HermitianPolynomial":
        return self + (-other)

    def __neg__(self) -> "HermitianPolynomial":
        return HermitianPolynomial(self.dim, {k: -c for k, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, HermitianPolynomial):
            self._require_same_dim(other)
            out: dict = {}
            for (a1, b1), c1 in self.coeffs.items():
                for (a2, b2), c2 in other.coeffs.items():
                    key = (
                        tuple(x + y for x, y in zip(a1, a2)),
                        tuple(x + y for x, y in zip(b1, b2)),
                    )
                    prod = c1 * c2
                    if key in out:
                        out[key] = out[key] + prod
                    else:
                        out[key] = prod
            return HermitianPolynomial(self.dim, out)
        c = ComplexRational.coerce(other)
        return HermitianPolynomial(self.dim, {k: v * c for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, HermitianPolynomial):
            return NotImplemented
        return self.dim == other.dim and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.dim, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def conjugate(self) -> "HermitianPolynomial":
        return HermitianPolynomial(
            self.dim, {(b, a): c.conjugate() for (a, b), c in self.coeffs.items()}
        )

    def is_real_valued(self) -> bool:
        """True iff the polynomial equals its own conjugate."""
        for (a, b), c in self.coeffs.items():
            mirror = self.coeffs.get((b, a))
            if mirror is None or mirror != c.conjugate():
                return False
        return True

    def is_holomorphic(self) -> bool:
        return all(order(b) == 0 for (_, b) in self.coeffs)

    def total_degree(self) -> int:
        if not self.coeffs:
            return 0
        return max(order(a) + order(b) for (a, b) in self.coeffs)

    # -- calculus ----------------------------------------------------------

    def d_dz(self, j: int) -> "HermitianPolynomial":
        out: dict = {}
        for (a, b), c in self.coeffs.items():
            if a[j] == 0:
                continue
            a2 = list(a)
            a2[j] -= 1
            key = (tuple(a2), b)
            add = c * a[j]
            out[key] = out.get(key, QC_ZERO) + add
        return HermitianPolynomial(self.dim, out)

    def d_dzbar(self, j: int) -> "HermitianPolynomial":
        out: dict = {}
        for (a, b), c in self.coeffs.items():
            if b[j] == 0:
                continue
            b2 = list(b)
            b2[j] -= 1
            key = (a, tuple(b2))
            add = c * b[j]
            out[key] = out.get(key, QC_ZERO) + add
        return HermitianPolynomial(self.dim, out)

    # -- evaluation --------------------------------------------------------

    def evaluate(self, point) -> complex:
        """Float evaluation at a point given as a sequence of complex numbers."""
        z = [complex(p) for p in point]
        if len(z) != self.dim:
            raise ValueError("point dimension mismatch")
        total = 0j
        for (a, b), c in self.coeffs.items():
            v = c.to_complex()
            for j in range(self.dim):
                if a[j]:
                    v *= z[j] ** a[j]
                if b[j]:
                    v *= z[j].conjugate() ** b[j]
            total += v
        return total

    def evaluate_exact(self, point: list[ComplexRational]) -> ComplexRational:
        if len(point) != self.dim:
            raise ValueError("point dimension mismatch")
        total = QC_ZERO
        for (a, b), c in self.coeffs.items():
            v = c
            for j in range(self.dim):
                for _ in range(a[j]):
                    v = v * point[j]
                for _ in range(b[j]):
                    v = v * point[j].conjugate()
            total = total + v
        return total

    def scale_radius(self, R: Fraction) -> "HermitianPolynomial":
        """The polynomial z -> p(R z), R rational."""
        R = Fraction(R)
        return HermitianPolynomial(
            self.dim,
            {k: c * R ** (order(k[0]) + order(k[1])) for k, c in self.coeffs.items()},
        )

    def float_terms(self) -> list[tuple[MultiIndex, MultiIndex, complex]]:
        """Terms with float coefficients, for vectorized numeric evaluation."""
        return [(a, b, c.to_complex()) for (a, b), c in self.coeffs.items()]

    def __repr__(self):
        if not self.coeffs:
            return f"HermitianPolynomial({self.dim}, 0)"
        bits = []
        for (a, b), c in sorted(self.coeffs.items()):
            bits.append(f"({c.re}{'+' if c.im >= 0 else ''}{c.im}j) z^{a} zbar^{b}")
        return f"HermitianPolynomial({self.dim}, {' + '.join(bits)})"


def gradient_pairing(
    f: HermitianPolynomial, g: HermitianPolynomial
) -> HermitianPolynomial:
    """<grad f, grad g> = sum_j (df/dz_j) conj(dg/dz_j) for holomorphic f, g."""
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    if not f.is_holomorphic() or not g.is_holomorphic():
        raise ValueError("gradient pairing requires holomorphic arguments")
    total = HermitianPolynomial.zero(f.dim)
    for j in range(f.dim):
        total = total + f.d_dz(j) * g.d_dz(j).conjugate()
    return total


def laplacian(h: HermitianPolynomial) -> HermitianPolynomial:
    """Complex Laplacian sum_j d^2/(dzbar_j dz_j)."""
    total = HermitianPolynomial.zero(h.dim)
    for j in range(h.dim):
        total = total + h.d_dz(j).d_dzbar(j)
    return total


def sphere_monomial_integral(alpha: MultiIndex, beta: MultiIndex, d: int) -> Fraction:
    if alpha != beta:
        return Fraction(0)
    return Fraction(
        index_factorial(alpha) * factorial(d - 1), factorial(order(alpha) + d - 1)
    )


def ball_monomial_integral(alpha: MultiIndex, beta: MultiIndex, d: int) -> Fraction:
    if alpha != beta:
        return Fraction(0)
    return Fraction(
        index_factorial(alpha) * factorial(d), factorial(order(alpha) + d)
    )


def sphere_integral(h: HermitianPolynomial) -> ComplexRational:
    """Exact integral against the normalized surface measure."""
    total = QC_ZERO
    for (a, b), c in h.coeffs.items():
        if a == b:
            total = total + c * sphere_monomial_integral(a, b, h.dim)
    return total


def ball_integral(h: HermitianPolynomial) -> ComplexRational:
    """Exact integral against the normalized volume measure."""
    total = QC_ZERO
    for (a, b), c in h.coeffs.items():
        if a == b:
            total = total + c * ball_monomial_integral(a, b, h.dim)
    return total
