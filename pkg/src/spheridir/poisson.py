"""Poisson kernels on the complex unit ball and Monte Carlo quadrature.

Two kernels: the Euclidean one, (1 - ||z||^2) / ||z - zeta||^(2d), which is
harmonic in z and drives everything else in this package, and the invariant
one, (1 - ||z||^2)^d / |1 - <z, zeta>|^(2d), kept around as the natural
foil (it is M-harmonic but not harmonic for d >= 2).

Monte Carlo estimators draw uniform sphere points from normalized complex
Gaussian vectors and ball points by scaling with radius u^(1/2d).  A fixed
seed fully determines the result: the sample budget is split across
independent child streams of the seed and merged by sample count, so the
estimate does not depend on how the streams are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BOUNDARY_TOL = 1e-12
SINGULARITY_GUARD = 1e-8


class QuadratureError(RuntimeError):
    """Raised when an integrand produces a non-finite sample."""


@dataclass(frozen=True)
class BallPoint:
    """A point of the closed unit ball in C^d, with its norm cached."""

    coords: tuple[complex, ...]
    norm: float

    @staticmethod
    def of(coords) -> "BallPoint":
        cs = tuple(complex(c) for c in coords)
        if not cs:
            raise ValueError("point needs at least one coordinate")
        return BallPoint(cs, float(np.sqrt(sum(abs(c) ** 2 for c in cs))))

    @staticmethod
    def interior(coords) -> "BallPoint":
        p = BallPoint.of(coords)
        if p.norm >= 1.0:
            raise ValueError(f"not an interior point: ||z|| = {p.norm}")
        return p

    @staticmethod
    def boundary(coords) -> "BallPoint":
        p = BallPoint.of(coords)
        if abs(p.norm - 1.0) > BOUNDARY_TOL:
            raise ValueError(f"not a boundary point: ||zeta|| = {p.norm}")
        return p

    @property
    def dim(self) -> int:
        return len(self.coords)

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)


def _as_interior(z) -> BallPoint:
    return z if isinstance(z, BallPoint) else BallPoint.interior(z)


def _as_boundary(z) -> BallPoint:
    return z if isinstance(z, BallPoint) else BallPoint.boundary(z)


def poisson_kernel(z, zeta) -> float:
    """Euclidean Poisson kernel (1 - ||z||^2) / ||z - zeta||^(2d)."""
    zp, bp = _as_interior(z), _as_boundary(zeta)
    if zp.dim != bp.dim:
        raise ValueError("dimension mismatch")
    d = zp.dim
    dist2 = sum(abs(a - b) ** 2 for a, b in zip(zp.coords, bp.coords))
    if dist2 == 0.0:
        raise ValueError("kernel is singular at z = zeta")
    return (1.0 - zp.norm**2) / dist2**d


def invariant_poisson_kernel(z, zeta) -> float:
    """Invariant Poisson kernel (1 - ||z||^2)^d / |1 - <z, zeta>|^(2d)."""
    zp, bp = _as_interior(z), _as_boundary(zeta)
    if zp.dim != bp.dim:
        raise ValueError("dimension mismatch")
    d = zp.dim
    ip = sum(a * b.conjugate() for a, b in zip(zp.coords, bp.coords))
    den = abs(1.0 - ip) ** 2
    if den == 0.0:
        raise ValueError("kernel is singular at z = zeta")
    return (1.0 - zp.norm**2) ** d / den**d


def poisson_kernel_array(Z: np.ndarray, zeta: np.ndarray) -> np.ndarray:
    """Vectorized Euclidean kernel over rows of Z (shape (n, d))."""
    d = Z.shape[1]
    dist2 = np.sum(np.abs(Z - zeta[None, :]) ** 2, axis=1)
    return (1.0 - np.sum(np.abs(Z) ** 2, axis=1)) / dist2**d


def invariant_poisson_kernel_array(Z: np.ndarray, zeta: np.ndarray) -> np.ndarray:
    d = Z.shape[1]
    ip = Z @ zeta.conj()
    return (1.0 - np.sum(np.abs(Z) ** 2, axis=1)) ** d / np.abs(1.0 - ip) ** (2 * d)


def pole_rejector(zeta: np.ndarray, guard: float = SINGULARITY_GUARD):
    """Mask function rejecting samples within `guard` of the pole at zeta."""

    def reject(Z: np.ndarray) -> np.ndarray:
        return np.sum(np.abs(Z - zeta[None, :]) ** 2, axis=1) < guard**2

    return reject


def eval_poly_terms(terms, Z: np.ndarray) -> np.ndarray:
    """Evaluate sum c z^a conj(z)^b over the rows of Z (float path).

    `terms` is a list of (alpha, beta, complex coefficient) triples, as
    produced by HermitianPolynomial.float_terms().
    """
    out = np.zeros(Z.shape[0], dtype=complex)
    for a, b, c in terms:
        v = np.full(Z.shape[0], c, dtype=complex)
        for j, e in enumerate(a):
            if e:
                v = v * Z[:, j] ** e
        for j, e in enumerate(b):
            if e:
                v = v * np.conj(Z[:, j]) ** e
        out += v
    return out


# -- sampling -----------------------------------------------------------------


@dataclass(frozen=True)
class McConfig:
    sample_count: int
    seed: int = 0
    stratification: str = "none"
    streams: int = 1

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        if self.stratification not in ("none", "radial"):
            raise ValueError(f"unknown stratification {self.stratification!r}")
        if self.streams < 1:
            raise ValueError("streams must be >= 1")


@dataclass(frozen=True)
class McResult:
    estimate: complex | float
    std_error: float
    n_samples: int
    n_rejected: int

    def __iter__(self):
        return iter((self.estimate, self.std_error))


def sphere_points(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    g = rng.standard_normal((n, 2 * d))
    z = g[:, :d] + 1j * g[:, d:]
    norms = np.linalg.norm(z, axis=1, keepdims=True)
    # probability of a exact zero Gaussian vector is nil, but stay safe
    norms[norms == 0.0] = 1.0
    return z / norms


def ball_points(
    rng: np.random.Generator, n: int, d: int, u_range: tuple[float, float] = (0.0, 1.0)
) -> np.ndarray:
    z = sphere_points(rng, n, d)
    u = rng.uniform(u_range[0], u_range[1], size=n)
    r = u ** (1.0 / (2 * d))
    return z * r[:, None]


N_RADIAL_STRATA = 32


def _run_batches(batches, f, reject) -> McResult:
    """Accumulate weighted batch means; batches yield (points, weight)."""
    total_w = 0.0
    est = 0.0j
    var_terms: list[tuple[float, complex, float, int]] = []
    n_total = 0
    n_rejected = 0
    for Z, w in batches:
        if reject is not None:
            mask = np.asarray(reject(Z), dtype=bool)
            n_rejected += int(mask.sum())
            Z = Z[~mask]
        if Z.shape[0] == 0:
            raise QuadratureError("all samples of a batch were rejected")
        vals = np.asarray(f(Z))
        if not np.all(np.isfinite(vals)):
            raise QuadratureError("non-finite integrand sample")
        vals = vals.astype(complex)
        n = Z.shape[0]
        mean = complex(vals.mean())
        second = float(np.mean(np.abs(vals) ** 2))
        var = max(second - abs(mean) ** 2, 0.0)
        var_terms.append((w, mean, var, n))
        total_w += w
        n_total += n
    est = sum(w * m for w, m, _, _ in var_terms) / total_w
    se2 = sum((w / total_w) ** 2 * v / n for w, _, v, n in var_terms)
    estimate = est.real if abs(est.imag) == 0.0 else est
    return McResult(estimate, float(np.sqrt(se2)), n_total, n_rejected)


def _stream_counts(total: int, streams: int) -> list[int]:
    base, rem = divmod(total, streams)
    return [base + (1 if i < rem else 0) for i in range(streams)]


def mc_sphere(f, d: int, cfg: McConfig, reject=None) -> McResult:
    """Monte Carlo estimate of the integral of f over the unit sphere.

    f must accept an (n, d) complex array of boundary points and return n
    values.  Estimate is the mean under the normalized surface measure.
    """
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.streams)
    counts = _stream_counts(cfg.sample_count, cfg.streams)

    def batches():
        for ss, n in zip(seeds, counts):
            if n == 0:
                continue
            rng = np.random.Generator(np.random.PCG64(ss))
            yield sphere_points(rng, n, d), float(n)

    return _run_batches(batches(), f, reject)


def mc_ball(f, d: int, cfg: McConfig, reject=None) -> McResult:
    """Monte Carlo estimate of the integral of f over the unit ball.

    Under radial stratification the radius quantile u is split into
    N_RADIAL_STRATA equal slices with proportional allocation.
    """
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.streams)
    counts = _stream_counts(cfg.sample_count, cfg.streams)

    def batches():
        for ss, n in zip(seeds, counts):
            if n == 0:
                continue
            rng = np.random.Generator(np.random.PCG64(ss))
            if cfg.stratification == "radial" and n >= N_RADIAL_STRATA:
                sub = _stream_counts(n, N_RADIAL_STRATA)
                for k, m in enumerate(sub):
                    lo, hi = k / N_RADIAL_STRATA, (k + 1) / N_RADIAL_STRATA
                    yield ball_points(rng, m, d, (lo, hi)), float(n) / N_RADIAL_STRATA
            else:
                yield ball_points(rng, n, d), float(n)

    return _run_batches(batches(), f, reject)
