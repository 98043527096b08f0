"""Dirichlet-type inner products and verifiers for the Richter identity.

The inner product of D(F) on polynomials is the Hardy pairing plus the
gradient pairing weighted by the Poisson integral of F:

    <f, g> = <f, g>_{H^2} + (1/d) * integral_B <P[F] grad f, grad g> dV.

For a harmonic polynomial weight the Poisson integral equals the weight,
so everything reduces to the exact monomial rules and residuals of the
verified identities are rational zeros.  Atomic measures go through Monte
Carlo; the ball integrals against a Poisson kernel anchored at an atom use
the anchor value of the integrand as a control variate (the kernel has
unit ball integral), which tames the variance blow-up near the pole.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactpoly import (
    QC_ZERO,
    ComplexRational,
    HermitianPolynomial,
    ball_integral,
    gradient_pairing,
    sphere_integral,
    sphere_monomial_integral,
)
from .measures import (
    AtomicMeasure,
    Measure,
    PolyWeightMeasure,
    SurfaceMeasure,
    measure_to_json,
    weight_polynomial,
)
from .multiindex import MultiIndex, enumerate_exact, multinomial_weight, order, zero
from .poisson import (
    SINGULARITY_GUARD,
    McConfig,
    ball_points,
    eval_poly_terms,
    invariant_poisson_kernel_array,
    poisson_kernel_array,
    sphere_points,
    mc_ball,
    mc_sphere,
)
from .tables import format_fraction

DEFAULT_MC = McConfig(sample_count=100_000, seed=0)


class VectorPolynomial:
    """Holomorphic polynomial with values in C^r (r = 1 is the scalar case)."""

    __slots__ = ("dim", "r", "coeffs")

    def __init__(self, dim: int, r: int = 1, coeffs: dict | None = None):
        if dim < 1 or r < 1:
            raise ValueError("invalid polynomial shape")
        self.dim = dim
        self.r = r
        clean: dict[MultiIndex, tuple[ComplexRational, ...]] = {}
        for a, vec in (coeffs or {}).items():
            vec = tuple(ComplexRational.coerce(x) for x in vec)
            if len(vec) != r:
                raise ValueError("coefficient vector has wrong length")
            if any(not x.is_zero() for x in vec):
                clean[tuple(a)] = vec
        self.coeffs = clean

    @staticmethod
    def monomial(d: int, alpha: MultiIndex, r: int = 1, component: int = 0, coeff=1):
        vec = [ComplexRational(0)] * r
        vec[component] = ComplexRational.coerce(coeff)
        return VectorPolynomial(d, r, {tuple(alpha): tuple(vec)})

    @staticmethod
    def from_scalar(p: HermitianPolynomial) -> "VectorPolynomial":
        if not p.is_holomorphic():
            raise ValueError("expected a holomorphic polynomial")
        return VectorPolynomial(
            p.dim, 1, {a: (c,) for (a, _b), c in p.coeffs.items()}
        )

    def component(self, i: int) -> HermitianPolynomial:
        d = self.dim
        return HermitianPolynomial(
            d, {(a, zero(d)): vec[i] for a, vec in self.coeffs.items()}
        )

    def shifted(self, gamma: MultiIndex) -> "VectorPolynomial":
        """Multiplication by the monomial z^gamma."""
        return VectorPolynomial(
            self.dim,
            self.r,
            {tuple(x + g for x, g in zip(a, gamma)): vec for a, vec in self.coeffs.items()},
        )

    def value_at_zero(self) -> tuple[ComplexRational, ...]:
        return self.coeffs.get(zero(self.dim), tuple([QC_ZERO] * self.r))

    def __add__(self, other: "VectorPolynomial") -> "VectorPolynomial":
        if (self.dim, self.r) != (other.dim, other.r):
            raise ValueError("shape mismatch")
        out = dict(self.coeffs)
        for a, vec in other.coeffs.items():
            cur = out.get(a)
            out[a] = vec if cur is None else tuple(x + y for x, y in zip(cur, vec))
        return VectorPolynomial(self.dim, self.r, out)

    def scaled(self, c) -> "VectorPolynomial":
        c = ComplexRational.coerce(c)
        return VectorPolynomial(
            self.dim, self.r, {a: tuple(x * c for x in vec) for a, vec in self.coeffs.items()}
        )

    def __repr__(self):
        return f"VectorPolynomial(d={self.dim}, r={self.r}, {len(self.coeffs)} terms)"


def _as_vector(p, d: int) -> VectorPolynomial:
    if isinstance(p, VectorPolynomial):
        return p
    if isinstance(p, HermitianPolynomial):
        return VectorPolynomial.from_scalar(p)
    raise TypeError("expected a VectorPolynomial or holomorphic HermitianPolynomial")


@dataclass(frozen=True)
class PairingResult:
    """Value of an inner product, with the error bar of the numeric path."""

    value: object  # ComplexRational on the exact path, complex otherwise
    std_error: float
    mode: str  # "exact" | "monte_carlo"

    def as_complex(self) -> complex:
        return self.value.to_complex() if isinstance(self.value, ComplexRational) else complex(self.value)


@dataclass(frozen=True)
class RichterReport:
    lhs: object
    rhs: object
    residual: object
    mode: str
    k: int
    d: int
    measure: str
    std_error: float = 0.0
    n_samples: int = 0
    n_rejected: int = 0
    kernel: str = "euclidean"

    def residual_complex(self) -> complex:
        r = self.residual
        return r.to_complex() if isinstance(r, ComplexRational) else complex(r)

    def passes(self, sigmas: float = 3.0) -> bool:
        """Exact mode: residual must vanish; MC mode: |residual| <= sigmas * se."""
        if self.mode == "exact":
            return self.residual == QC_ZERO or (
                isinstance(self.residual, ComplexRational) and self.residual.is_zero()
            )
        return abs(self.residual_complex()) <= sigmas * self.std_error

    def to_json_dict(self) -> dict:
        def enc(v):
            if isinstance(v, ComplexRational):
                return {"re": format_fraction(v.re), "im": format_fraction(v.im)}
            v = complex(v)
            return {"re": v.real, "im": v.imag}

        return {
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "residual": enc(self.residual),
            "mode": self.mode,
            "k": self.k,
            "d": self.d,
            "measure": self.measure,
            "std_error": self.std_error,
            "n_samples": self.n_samples,
            "n_rejected": self.n_rejected,
            "kernel": self.kernel,
        }


def hardy_pairing(f: VectorPolynomial, g: VectorPolynomial) -> ComplexRational:
    """<f, g> in the Hardy space of the ball (vector-valued)."""
    total = QC_ZERO
    for a, fv in f.coeffs.items():
        gv = g.coeffs.get(a)
        if gv is None:
            continue
        ip = QC_ZERO
        for x, y in zip(fv, gv):
            ip = ip + x * y.conjugate()
        total = total + ip * sphere_monomial_integral(a, a, f.dim)
    return total


def _pairing_sum(f: VectorPolynomial, g: VectorPolynomial) -> HermitianPolynomial:
    """sum_components <grad f_i, grad g_i> as one Hermitian polynomial."""
    total = HermitianPolynomial.zero(f.dim)
    for i in range(f.r):
        total = total + gradient_pairing(f.component(i), g.component(i))
    return total


# -- Monte Carlo sample context for atomic measures ----------------------------


class AtomBallSamples:
    """Ball samples, kernel values and cached monomial arrays for one atom.

    Pole-adjacent samples (within SINGULARITY_GUARD of the atom) are
    rejected up front and counted; the expected fraction is ~guard^(2d).
    """

    def __init__(self, zeta, d: int, cfg: McConfig, kernel: str = "euclidean"):
        self.d = d
        self.zeta = np.asarray([complex(c) for c in zeta], dtype=complex)
        seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.streams)
        base, rem = divmod(cfg.sample_count, cfg.streams)
        chunks = []
        for i, ss in enumerate(seeds):
            n = base + (1 if i < rem else 0)
            if n:
                rng = np.random.Generator(np.random.PCG64(ss))
                chunks.append(ball_points(rng, n, d))
        Z = np.concatenate(chunks, axis=0)
        dist2 = np.sum(np.abs(Z - self.zeta[None, :]) ** 2, axis=1)
        mask = dist2 < SINGULARITY_GUARD**2
        self.n_rejected = int(mask.sum())
        self.Z = Z[~mask]
        if kernel == "euclidean":
            self.K = poisson_kernel_array(self.Z, self.zeta)
        elif kernel == "invariant":
            self.K = invariant_poisson_kernel_array(self.Z, self.zeta)
        else:
            raise ValueError(f"unknown kernel {kernel!r}")
        self.kernel = kernel
        self._pow: dict[MultiIndex, np.ndarray] = {}

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    def monomial(self, delta: MultiIndex) -> np.ndarray:
        cached = self._pow.get(delta)
        if cached is not None:
            return cached
        v = np.ones(self.n, dtype=complex)
        for j, e in enumerate(delta):
            if e:
                v = v * self.Z[:, j] ** e
        self._pow[delta] = v
        return v

    def eval_poly(self, h: HermitianPolynomial) -> np.ndarray:
        out = np.zeros(self.n, dtype=complex)
        for (a, b), c in h.coeffs.items():
            out += c.to_complex() * self.monomial(a) * np.conj(self.monomial(b))
        return out

    def kernel_weighted_integral(self, h: HermitianPolynomial, control: bool = True):
        """Per-sample values whose mean estimates integral_B h K(., atom) dV.

        With `control`, subtracts h(atom) * (K - 1); unbiased because both
        kernels have unit ball integral (boundary normalization plus the
        r-symmetry K(r eta, zeta) = K(r zeta, eta), in polar coordinates).
        The difference h - h(atom) vanishes at the pole, which tames the
        variance of the kernel singularity.
        """
        vals = self.eval_poly(h) * self.K
        if control:
            h_at = h.evaluate(self.zeta)
            vals = vals - h_at * (self.K - 1.0)
        return vals


def atom_contexts(mu: AtomicMeasure, cfg: McConfig, kernel: str = "euclidean"):
    """One sample context per atom; the budget is split across atoms.

    Contexts are deterministic in (seed, budget, atoms) and can be passed
    back into the verifiers to share samples across a grid of checks.
    """
    n_atoms = len(mu.points)
    pts = mu.float_points()
    seeds = np.random.SeedSequence(cfg.seed).spawn(n_atoms)
    base, rem = divmod(cfg.sample_count, n_atoms)
    out = []
    for i in range(n_atoms):
        n = base + (1 if i < rem else 0)
        sub = McConfig(max(n, 1), seed=int(seeds[i].generate_state(1)[0]), streams=cfg.streams)
        out.append(AtomBallSamples(pts[i], mu.d, sub, kernel))
    return out


# -- inner products -------------------------------------------------------------


def dirichlet_inner(f, g, F: Measure, cfg: McConfig | None = None) -> PairingResult:
    """<f, g> in D(F): Hardy part plus the weighted gradient part."""
    d = F.d
    f, g = _as_vector(f, d), _as_vector(g, d)
    if f.dim != d or g.dim != d or f.r != g.r:
        raise ValueError("dimension mismatch between polynomials and measure")
    if isinstance(F, AtomicMeasure) and F.r not in (1, f.r):
        raise ValueError("matrix measure size does not match polynomial values")
    hardy = hardy_pairing(f, g)

    if isinstance(F, (SurfaceMeasure, PolyWeightMeasure)) and _has_harmonic(F):
        grad = _gradient_term_exact(f, g, weight_polynomial(F))
        return PairingResult(hardy + grad, 0.0, "exact")

    if isinstance(F, PolyWeightMeasure):
        est, se = _gradient_term_pair_mc(_pairing_sum(f, g), F, cfg or DEFAULT_MC)
        return PairingResult(hardy.to_complex() + est / d, se / d, "monte_carlo")

    est, se, _ = _gradient_term_atomic(f, g, F, cfg or DEFAULT_MC)
    return PairingResult(hardy.to_complex() + est / d, se / d, "monte_carlo")


def circ_inner(f, g, mu: Measure, cfg: McConfig | None = None) -> PairingResult:
    """Auxiliary pairing f(0) conj(g(0)) + (1/d) integral <grad f, grad g> P[mu] dV."""
    d = mu.d
    f, g = _as_vector(f, d), _as_vector(g, d)
    if f.r != 1 or g.r != 1:
        raise ValueError("the circ pairing is scalar-valued only")
    head = f.value_at_zero()[0] * g.value_at_zero()[0].conjugate()
    if _has_harmonic(mu):
        grad = _gradient_term_exact(f, g, weight_polynomial(mu))
        return PairingResult(head + grad, 0.0, "exact")
    if isinstance(mu, PolyWeightMeasure):
        est, se = _gradient_term_pair_mc(_pairing_sum(f, g), mu, cfg or DEFAULT_MC)
        return PairingResult(head.to_complex() + est / d, se / d, "monte_carlo")
    est, se, _ = _gradient_term_atomic(f, g, mu, cfg or DEFAULT_MC)
    return PairingResult(head.to_complex() + est / d, se / d, "monte_carlo")


def _has_harmonic(mu: Measure) -> bool:
    from .measures import has_harmonic_weight

    return has_harmonic_weight(mu)


def _gradient_term_exact(f, g, w: HermitianPolynomial) -> ComplexRational:
    """(1/d) integral_B <grad f, grad g> w dV, exactly."""
    d = w.dim
    val = ball_integral(_pairing_sum(f, g) * w)
    return val * Fraction(1, d)


def _pair_samples(mu: PolyWeightMeasure, cfg: McConfig):
    """Independent (ball, sphere) sample pairs with kernel and weight values."""
    d = mu.d
    seeds = np.random.SeedSequence(cfg.seed).spawn(2)
    rng_b = np.random.Generator(np.random.PCG64(seeds[0]))
    rng_s = np.random.Generator(np.random.PCG64(seeds[1]))
    n = cfg.sample_count
    Z = ball_points(rng_b, n, d)
    W = sphere_points(rng_s, n, d)
    dist2 = np.sum(np.abs(Z - W) ** 2, axis=1)
    keep = dist2 >= SINGULARITY_GUARD**2
    Z, W = Z[keep], W[keep]
    P = (1.0 - np.sum(np.abs(Z) ** 2, axis=1)) / np.sum(np.abs(Z - W) ** 2, axis=1) ** d
    wv = eval_poly_terms(mu.weight.float_terms(), W).real
    return Z, W, P, wv, int(n - Z.shape[0])


def _pair_cv_values(h: HermitianPolynomial, Z, W, P, wv) -> np.ndarray:
    """Per-pair values estimating integral_B h P[mu] dV with the anchor
    control variate: (h(z) - h(zeta)) P(z, zeta) w(zeta) + h(zeta) w(zeta)."""
    hterms = h.float_terms()
    hv = eval_poly_terms(hterms, Z)
    hw = eval_poly_terms(hterms, W)
    return (hv - hw) * P * wv + hw * wv


def _gradient_term_pair_mc(h: HermitianPolynomial, mu: PolyWeightMeasure, cfg: McConfig):
    """integral_B h P[mu] dV for a non-harmonic polynomial weight."""
    Z, W, P, wv, _ = _pair_samples(mu, cfg)
    vals = _pair_cv_values(h, Z, W, P, wv)
    mean = complex(vals.mean())
    var = max(float(np.mean(np.abs(vals) ** 2)) - abs(mean) ** 2, 0.0)
    return mean, float(np.sqrt(var / vals.size))


def _gradient_term_atomic(f, g, mu: AtomicMeasure, cfg: McConfig, contexts=None):
    """sum_j integral <P[F] d_j f, d_j g> dV for atomic F, via Monte Carlo."""
    r = f.r
    contexts = contexts or atom_contexts(mu, cfg, "euclidean")
    ws = mu.float_weights()
    total = 0j
    var = 0.0
    for ctx, w in zip(contexts, ws):
        if mu.r == 1 or r == 1:
            h = _pairing_sum(f, g)
            scalar_w = w if isinstance(w, float) else complex(w[0][0])
            vals = ctx.kernel_weighted_integral(h) * scalar_w
        else:
            vals = np.zeros(ctx.n, dtype=complex)
            for u in range(r):
                for v in range(r):
                    wuv = complex(np.asarray(w)[u, v])
                    if wuv == 0:
                        continue
                    h_vu = gradient_pairing(f.component(v), g.component(u))
                    vals += wuv * ctx.kernel_weighted_integral(h_vu)
        mean = complex(vals.mean())
        total += mean
        second = float(np.mean(np.abs(vals) ** 2))
        var += max(second - abs(mean) ** 2, 0.0) / ctx.n
    return total, float(np.sqrt(var)), contexts


# -- Richter identity verifiers --------------------------------------------------


def _measure_label(mu: Measure) -> str:
    try:
        data = measure_to_json(mu)
    except ValueError:
        return repr(mu)
    return str(data)


def verify_richter(p, q, mu: Measure, k: int, cfg: McConfig | None = None,
                   contexts=None) -> RichterReport:
    """Both sides of the k-fold Richter identity for the measure mu.

    lhs = sum_{|gamma|=k} (|gamma|!/gamma!) integral <grad z^g p, grad z^g q> P[mu] dV
    rhs = integral <grad p, grad q> P[mu] dV + k d integral p conj(q) dmu

    Exact (zero residual expected) for harmonic polynomial weights; Monte
    Carlo with a propagated error bar otherwise.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    d = mu.d
    p, q = _as_vector(p, d), _as_vector(q, d)
    gammas = enumerate_exact(d, k)
    label = _measure_label(mu)

    if _has_harmonic(mu):
        w = weight_polynomial(mu)
        lhs = QC_ZERO
        for gm in gammas:
            pairing = _pairing_sum(p.shifted(gm), q.shifted(gm))
            lhs = lhs + multinomial_weight(gm) * ball_integral(pairing * w)
        boundary = _boundary_exact(p, q, w)
        rhs = ball_integral(_pairing_sum(p, q) * w) + (k * d) * boundary
        return RichterReport(lhs, rhs, lhs - rhs, "exact", k, d, label)

    if isinstance(mu, PolyWeightMeasure):
        return _richter_pair_mc(p, q, mu, k, cfg or DEFAULT_MC, label)

    return _richter_atomic(p, q, mu, k, cfg or DEFAULT_MC, label,
                           kernel="euclidean", contexts=contexts)


def _boundary_exact(p, q, w: HermitianPolynomial) -> ComplexRational:
    total = QC_ZERO
    for i in range(p.r):
        total = total + sphere_integral(p.component(i) * q.component(i).conjugate() * w)
    return total


def _lhs_rhs_polys(p, q, k: int):
    """Exact gradient-pairing polynomials entering each side at level k."""
    d = p.dim
    h_lhs = HermitianPolynomial.zero(d)
    for gm in enumerate_exact(d, k):
        h_lhs = h_lhs + multinomial_weight(gm) * _pairing_sum(p.shifted(gm), q.shifted(gm))
    h_rhs = _pairing_sum(p, q)
    return h_lhs, h_rhs


def _richter_atomic(p, q, mu: AtomicMeasure, k, cfg, label, kernel,
                    contexts=None) -> RichterReport:
    d = mu.d
    h_lhs, h_rhs = _lhs_rhs_polys(p, q, k)
    contexts = contexts or atom_contexts(mu, cfg, kernel)
    ws = mu.float_weights()
    pts = mu.float_points()

    lhs = 0j
    rhs = 0j
    var = 0.0
    n_total = 0
    n_rejected = 0
    for ctx, w, pt in zip(contexts, ws, pts):
        scalar_w = w if isinstance(w, float) else None
        if scalar_w is None:
            raise ValueError("Richter verification supports scalar atomic weights")
        vals_l = ctx.kernel_weighted_integral(h_lhs) * scalar_w
        vals_r = ctx.kernel_weighted_integral(h_rhs) * scalar_w
        lhs += complex(vals_l.mean())
        rhs += complex(vals_r.mean())
        res_vals = vals_l - vals_r
        mean_res = complex(res_vals.mean())
        var += max(float(np.mean(np.abs(res_vals) ** 2)) - abs(mean_res) ** 2, 0.0) / ctx.n
        n_total += ctx.n
        n_rejected += ctx.n_rejected

    boundary = 0j
    for w, pt in zip(ws, pts):
        for i in range(p.r):
            boundary += w * p.component(i).evaluate(pt) * np.conj(q.component(i).evaluate(pt))
    rhs += k * d * boundary
    residual = lhs - rhs
    return RichterReport(lhs, rhs, residual, "monte_carlo", k, d, label,
                         std_error=float(np.sqrt(var)), n_samples=n_total,
                         n_rejected=n_rejected, kernel=kernel)


def _richter_pair_mc(p, q, mu: PolyWeightMeasure, k, cfg, label) -> RichterReport:
    d = mu.d
    h_lhs, h_rhs = _lhs_rhs_polys(p, q, k)
    Z, W, P, wv, n_rejected = _pair_samples(mu, cfg)
    vals_l = _pair_cv_values(h_lhs, Z, W, P, wv)
    vals_r = _pair_cv_values(h_rhs, Z, W, P, wv)
    boundary = _boundary_exact(p, q, mu.weight).to_complex()
    lhs = complex(vals_l.mean())
    rhs = complex(vals_r.mean()) + k * d * boundary
    res_vals = vals_l - vals_r
    mean_res = complex(res_vals.mean())
    var = max(float(np.mean(np.abs(res_vals) ** 2)) - abs(mean_res) ** 2, 0.0)
    return RichterReport(lhs, rhs, lhs - rhs, "monte_carlo", k, d, label,
                         std_error=float(np.sqrt(var / res_vals.size)),
                         n_samples=cfg.sample_count, n_rejected=n_rejected)


def verify_radius_identity(f, g, mu: Measure, R, cfg: McConfig | None = None) -> RichterReport:
    """Radius-R precursor identity on the ball of radius R < 1.

    lhs = sum_j integral_{RB} <grad z_j f, grad z_j g> P[mu] dV
          - R^2 integral_{RB} <grad f, grad g> P[mu] dV
    rhs = d R^{2d} integral_boundary f(R zeta) conj(g(R zeta)) P[mu](R zeta) dsigma

    Exact for harmonic polynomial weights via the substitution z = R w.
    """
    d = mu.d
    f, g = _as_vector(f, d), _as_vector(g, d)
    label = _measure_label(mu)
    h1 = HermitianPolynomial.zero(d)
    for j in range(d):
        ej = tuple(1 if i == j else 0 for i in range(d))
        h1 = h1 + _pairing_sum(f.shifted(ej), g.shifted(ej))
    h0 = _pairing_sum(f, g)

    if _has_harmonic(mu):
        R = Fraction(R)
        if not 0 < R < 1:
            raise ValueError("R must lie in (0, 1)")
        w = weight_polynomial(mu)
        scale = R ** (2 * d)
        lhs = scale * (
            ball_integral((h1 * w).scale_radius(R))
            - R * R * ball_integral((h0 * w).scale_radius(R))
        )
        fg = HermitianPolynomial.zero(d)
        for i in range(f.r):
            fg = fg + f.component(i) * g.component(i).conjugate()
        rhs = (d * scale) * sphere_integral((fg * w).scale_radius(R))
        return RichterReport(lhs, rhs, lhs - rhs, "exact", 1, d, label)

    if not isinstance(mu, AtomicMeasure) or mu.r != 1:
        raise ValueError("radius identity needs a harmonic weight or scalar atoms")
    Rf = float(R)
    if not 0.0 < Rf < 1.0:
        raise ValueError("R must lie in (0, 1)")
    cfg = cfg or DEFAULT_MC
    pts = mu.float_points()
    ws = [float(w) for w in mu.weights]
    h1t, h0t = h1.float_terms(), h0.float_terms()

    def pofmu(Z):
        acc = np.zeros(Z.shape[0])
        for w_i, pt in zip(ws, pts):
            acc += w_i * poisson_kernel_array(Z, np.asarray(pt))
        return acc

    def ball_f(Z):
        ZR = Rf * Z
        return (eval_poly_terms(h1t, ZR) - Rf * Rf * eval_poly_terms(h0t, ZR)) * pofmu(ZR)

    est = mc_ball(ball_f, d, cfg)
    lhs = est.estimate * Rf ** (2 * d)

    fg = HermitianPolynomial.zero(d)
    for i in range(f.r):
        fg = fg + f.component(i) * g.component(i).conjugate()
    fgt = fg.float_terms()

    def bd_f(W):
        WR = Rf * W
        return eval_poly_terms(fgt, WR) * pofmu(WR)

    bd = mc_sphere(bd_f, d, McConfig(cfg.sample_count, cfg.seed + 1, cfg.stratification, cfg.streams))
    rhs = d * Rf ** (2 * d) * bd.estimate
    se = float(np.hypot(est.std_error * Rf ** (2 * d), d * Rf ** (2 * d) * bd.std_error))
    return RichterReport(lhs, rhs, lhs - rhs, "monte_carlo", 1, d, label,
                         std_error=se, n_samples=2 * cfg.sample_count)


def falsify_invariant_kernel(mu: Measure, p, q, k: int, cfg: McConfig | None = None,
                             contexts=None) -> RichterReport:
    """Richter verification with the invariant kernel in place of the
    Euclidean one; for atoms the residual is expected to be nonzero.

    Rejects d = 1 (the two kernels coincide there).
    """
    d = mu.d
    if d < 2:
        raise ValueError("the kernels coincide at d = 1; falsification needs d >= 2")
    p, q = _as_vector(p, d), _as_vector(q, d)
    label = _measure_label(mu)
    if isinstance(mu, SurfaceMeasure):
        # invariant Poisson integral of sigma is the constant 1 = P[sigma]
        return verify_richter(p, q, mu, k, cfg)
    if not isinstance(mu, AtomicMeasure):
        raise ValueError("falsification fixture must be atomic (or sigma)")
    return _richter_atomic(p, q, mu, k, cfg or DEFAULT_MC, label,
                           kernel="invariant", contexts=contexts)
