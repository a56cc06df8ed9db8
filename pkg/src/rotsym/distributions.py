"""Samplers and densities for distributions built on the tangent-normal split.

Families covered: rotationally symmetric laws driven by an angular function g,
the von Mises-Fisher special case g(t) = exp(kappa t), the angular central
Gaussian on the tangent sphere, and the two tangent families that perturb the
sign distribution (elliptical sign -> axial scatter alternative, vMF sign ->
skewed location alternative).  Finite mixtures compose any of these.

All samplers take an explicit numpy Generator; none touch global state.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import geometry, numerics
from .errors import (
    ConfigError,
    DimensionError,
    InvalidShapeError,
    NormalizationError,
    UnsupportedAngularFunctionError,
)


class AngularFunction:
    """Function g on [-1, 1] driving a rotationally symmetric cosine density.

    `log_deriv` is the score phi_g = g'/g; `log_deriv_deriv` its derivative,
    needed only by efficient score tests.  Normalizing constants are cached
    per dimension; a closed form can be registered via `norm_const_fn`.
    """

    def __init__(
        self,
        eval_fn,
        log_deriv=None,
        log_deriv_deriv=None,
        label: str = "",
        bounded: bool = True,
        norm_const_fn=None,
        cosine_sampler=None,
    ):
        self.eval = eval_fn
        self.log_deriv = log_deriv
        self.log_deriv_deriv = log_deriv_deriv
        self.label = label
        self.bounded = bounded
        self._norm_const_fn = norm_const_fn
        self._cosine_sampler = cosine_sampler
        self._norm_cache: dict[int, float] = {}
        self._envelope_cache: dict[int, float] = {}

    def __repr__(self):
        return f"AngularFunction({self.label or 'anonymous'})"

    def norm_const(self, p: int) -> float:
        """Constant c making x -> c g(x'theta) a density on S^{p-1}."""
        if p < 2:
            raise DimensionError(f"p must be >= 2, got {p}")
        if p not in self._norm_cache:
            if self._norm_const_fn is not None:
                c = self._norm_const_fn(p)
            else:
                omega = numerics.surface_area(p - 1)
                if p == 2:
                    total = numerics.integrate_chebyshev(self.eval)
                else:
                    # substitute t = sin(s) so the half powers of (1 - t^2)
                    # become smooth powers of cos(s)
                    rule = numerics.gauss_legendre()
                    s = rule.nodes * (np.pi / 2.0)
                    vals = np.cos(s) ** (p - 2) * np.asarray(self.eval(np.sin(s)), dtype=float)
                    total = float(np.pi / 2.0 * np.sum(rule.weights * vals))
                if not np.isfinite(total) or total <= 0.0:
                    raise NormalizationError(
                        f"angular function {self.label!r} has non-normalizable mass {total!r}"
                    )
                c = 1.0 / (omega * total)
            self._norm_cache[p] = float(c)
        return self._norm_cache[p]


def vmf_angular(kappa: float) -> AngularFunction:
    """g(t) = exp(kappa t); kappa = 0 gives the uniform law."""
    if kappa < 0:
        raise DimensionError(f"concentration must be >= 0, got {kappa}")

    return AngularFunction(
        eval_fn=lambda t: np.exp(kappa * np.asarray(t, dtype=float)),
        log_deriv=lambda t: np.full_like(np.asarray(t, dtype=float), kappa),
        log_deriv_deriv=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        label=f"vmf({kappa:g})",
        norm_const_fn=lambda p: vmf_norm_const(p, kappa),
        cosine_sampler=lambda p, n, rng: _sample_vmf_cosine(p, kappa, n, rng),
    )


def uniform_angular() -> AngularFunction:
    return vmf_angular(0.0)


def arcsine_tilt_angular(kappa: float) -> AngularFunction:
    """g(t) = exp(kappa arcsin t): the family where the location score vanishes
    after projection, i.e. the Jensen bound is tight."""
    return AngularFunction(
        eval_fn=lambda t: np.exp(kappa * np.arcsin(np.clip(t, -1.0, 1.0))),
        log_deriv=lambda t: kappa / np.sqrt(np.clip(1.0 - np.asarray(t) ** 2, 1e-300, None)),
        label=f"arcsine-tilt({kappa:g})",
    )


def vmf_norm_const(p: int, kappa: float) -> float:
    """Normalizing constant of the vMF density on S^{p-1}."""
    if p < 2:
        raise DimensionError(f"p must be >= 2, got {p}")
    if kappa < 0:
        raise DimensionError(f"kappa must be >= 0, got {kappa}")
    if kappa == 0.0:
        return 1.0 / numerics.surface_area(p)
    nu = (p - 2) / 2.0
    # exp(-kappa) I_nu(kappa) stays finite; fold exp(kappa) into the prefactor
    log_c = (
        nu * np.log(kappa)
        - (p / 2.0) * np.log(2.0 * np.pi)
        - kappa
        - np.log(numerics.bessel_i(nu, kappa, scaled=True))
    )
    return float(np.exp(log_c))


def cosine_density(g: AngularFunction, p: int, v) -> np.ndarray | float:
    """Density of the cosine x'theta under the rotationally symmetric law."""
    v = np.asarray(v, dtype=float)
    if np.any(np.abs(v) > 1.0 + 1e-12):
        raise DimensionError("cosine values must lie in [-1, 1]")
    vv = np.clip(v, -1.0, 1.0)
    out = (
        numerics.surface_area(p - 1)
        * g.norm_const(p)
        * (1.0 - vv * vv) ** ((p - 3) / 2.0)
        * g.eval(vv)
    )
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Cosine samplers


def _sample_vmf_cosine(p: int, kappa: float, n: int, rng) -> np.ndarray:
    """Envelope rejection for the Beta-tilted vMF cosine density (Wood 1994)."""
    m = p - 1
    if kappa == 0.0:
        return 1.0 - 2.0 * rng.beta(m / 2.0, m / 2.0, size=n)
    b = m / (np.sqrt(4.0 * kappa * kappa + m * m) + 2.0 * kappa)
    x0 = (1.0 - b) / (1.0 + b)
    c = kappa * x0 + m * np.log(1.0 - x0 * x0)
    out = np.empty(n)
    filled = 0
    while filled < n:
        todo = n - filled
        z = rng.beta(m / 2.0, m / 2.0, size=todo)
        w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z)
        logu = np.log(rng.uniform(size=todo))
        keep = kappa * w + m * np.log1p(-x0 * w) - c >= logu
        taken = w[keep]
        out[filled : filled + taken.size] = taken
        filled += taken.size
    return out


def sample_cosine(g: AngularFunction, p: int, n: int, rng) -> np.ndarray:
    """Draws from the cosine density of (g, p).

    Generic path: the (1 - v^2)^((p-3)/2) factor is exactly a symmetric Beta
    in s = (1 + v)/2, so rejection only has to envelope the g ratio.  Requires
    bounded g; registered samplers (vMF) bypass this.
    """
    if g._cosine_sampler is not None:
        return g._cosine_sampler(p, n, rng)
    if not g.bounded:
        raise UnsupportedAngularFunctionError(
            f"{g.label!r} is unbounded and has no registered cosine sampler"
        )
    if p not in g._envelope_cache:
        grid = np.linspace(-1.0, 1.0, 512)
        vals = np.asarray(g.eval(grid), dtype=float)
        k = int(np.argmax(vals))
        lo, hi = grid[max(0, k - 1)], grid[min(grid.size - 1, k + 1)]
        fine = np.linspace(lo, hi, 256)
        peak = float(np.max(g.eval(fine)))
        if not np.isfinite(peak) or peak <= 0.0:
            raise UnsupportedAngularFunctionError(
                f"{g.label!r} has no positive finite maximum on [-1, 1]"
            )
        g._envelope_cache[p] = peak * (1.0 + 1e-9)
    peak = g._envelope_cache[p]
    out = np.empty(n)
    filled = 0
    while filled < n:
        todo = n - filled
        s = rng.beta((p - 1) / 2.0, (p - 1) / 2.0, size=todo)
        v = 2.0 * s - 1.0
        accept = rng.uniform(size=todo) * peak <= np.asarray(g.eval(v), dtype=float)
        taken = v[accept]
        out[filled : filled + taken.size] = taken
        filled += taken.size
    return out


# ---------------------------------------------------------------------------
# Sphere samplers


def sample_uniform_sphere(dim: int, n: int, rng) -> np.ndarray:
    """n uniform draws on S^{dim-1}."""
    z = rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def sample_vmf(theta, kappa: float, n: int, rng) -> np.ndarray:
    """n vMF draws via cosine sampling + uniform tangent sign + reconstruction."""
    frame = geometry.tangent_frame(theta)
    p = frame.p
    v = _sample_vmf_cosine(p, kappa, n, rng)
    u = sample_uniform_sphere(p - 1, n, rng)
    return geometry.reconstruct_sample(v, u, frame)


def shape_matrix(lam, warn: bool = True) -> np.ndarray:
    """Validate a symmetric positive-definite shape matrix, rescaling the trace
    to its dimension (the identifiability normalization) when needed."""
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 2 or lam.shape[0] != lam.shape[1]:
        raise InvalidShapeError(f"shape matrix must be square, got {lam.shape}")
    if not np.allclose(lam, lam.T, atol=1e-10):
        raise InvalidShapeError("shape matrix must be symmetric")
    q = lam.shape[0]
    tr = float(np.trace(lam))
    if tr <= 0:
        raise InvalidShapeError(f"shape matrix trace {tr} must be positive")
    if abs(tr - q) > 1e-10:
        if warn:
            warnings.warn(
                f"shape matrix trace {tr:g} rescaled to {q} for identifiability",
                stacklevel=2,
            )
        lam = lam * (q / tr)
    try:
        np.linalg.cholesky(lam)
    except np.linalg.LinAlgError as exc:
        raise InvalidShapeError("shape matrix is not positive-definite") from exc
    return lam


def sample_acg(lam, n: int, rng) -> np.ndarray:
    """Angular central Gaussian: radial projection of N(0, lam) draws."""
    lam = shape_matrix(lam, warn=False)
    chol = np.linalg.cholesky(lam)
    z = rng.standard_normal((n, lam.shape[0])) @ chol.T
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def density_acg(u, lam) -> float:
    """ACG density on S^{q-1} (q the matrix dimension), axial by construction."""
    lam = shape_matrix(lam, warn=False)
    q = lam.shape[0]
    u = np.asarray(u, dtype=float)
    c = 1.0 / (numerics.surface_area(q) * np.sqrt(np.linalg.det(lam)))
    quad = float(u @ np.linalg.solve(lam, u))
    return c * quad ** (-q / 2.0)


# ---------------------------------------------------------------------------
# Tangent families


@dataclass(frozen=True)
class TangentEllipticalParams:
    theta: np.ndarray
    g: AngularFunction
    lam: np.ndarray  # (p-1, p-1) shape matrix

    def __post_init__(self):
        theta = geometry.as_unit_vector(self.theta)
        lam = shape_matrix(self.lam)
        if lam.shape[0] != theta.size - 1:
            raise DimensionError(
                f"shape matrix dimension {lam.shape[0]} != p - 1 = {theta.size - 1}"
            )
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "lam", lam)

    @property
    def p(self) -> int:
        return self.theta.size


@dataclass(frozen=True)
class TangentVmfParams:
    theta: np.ndarray
    g: AngularFunction
    mu: np.ndarray  # (p-1,) unit vector
    kappa: float

    def __post_init__(self):
        theta = geometry.as_unit_vector(self.theta)
        mu = geometry.as_unit_vector(self.mu) if self.mu is not None else None
        if mu is not None and mu.size != theta.size - 1:
            raise DimensionError(f"mu dimension {mu.size} != p - 1 = {theta.size - 1}")
        if self.kappa < 0:
            raise DimensionError(f"skewness intensity must be >= 0, got {self.kappa}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "mu", mu)

    @property
    def p(self) -> int:
        return self.theta.size


def sample_tangent_elliptical(params: TangentEllipticalParams, n: int, rng) -> np.ndarray:
    frame = geometry.tangent_frame(params.theta)
    v = sample_cosine(params.g, params.p, n, rng)
    u = sample_acg(params.lam, n, rng)
    return geometry.reconstruct_sample(v, u, frame)


def sample_tangent_vmf(params: TangentVmfParams, n: int, rng) -> np.ndarray:
    frame = geometry.tangent_frame(params.theta)
    p = params.p
    v = sample_cosine(params.g, p, n, rng)
    if params.kappa == 0.0:
        u = sample_uniform_sphere(p - 1, n, rng)
    else:
        u = sample_vmf(params.mu, params.kappa, n, rng)
    return geometry.reconstruct_sample(v, u, frame)


def density_tangent_elliptical(x, params: TangentEllipticalParams) -> float:
    frame = geometry.tangent_frame(params.theta)
    sc = geometry.decompose(x, frame)
    p = params.p
    quad = float(sc.u @ np.linalg.solve(params.lam, sc.u))
    c_acg = 1.0 / (numerics.surface_area(p - 1) * np.sqrt(np.linalg.det(params.lam)))
    return (
        numerics.surface_area(p - 1)
        * params.g.norm_const(p)
        * c_acg
        * float(params.g.eval(sc.v))
        * quad ** (-(p - 1) / 2.0)
    )


def density_tangent_vmf(x, params: TangentVmfParams) -> float:
    frame = geometry.tangent_frame(params.theta)
    sc = geometry.decompose(x, frame)
    p = params.p
    tilt = 1.0 if params.kappa == 0.0 else float(np.exp(params.kappa * (params.mu @ sc.u)))
    return (
        numerics.surface_area(p - 1)
        * params.g.norm_const(p)
        * vmf_norm_const(p - 1, params.kappa)
        * float(params.g.eval(sc.v))
        * tilt
    )


# ---------------------------------------------------------------------------
# Mixtures


@dataclass(frozen=True)
class Mixture:
    """Finite mixture of samplers; each component is (weight, sampler(n, rng))."""

    components: tuple = field(default_factory=tuple)

    def __post_init__(self):
        weights = np.array([w for w, _ in self.components], dtype=float)
        if weights.size == 0:
            raise ConfigError("mixture needs at least one component")
        if np.any(weights <= 0):
            raise ConfigError("mixture weights must be positive")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise ConfigError(f"mixture weights sum to {weights.sum()!r}, expected 1")


def sample_mixture(components, n: int, rng) -> np.ndarray:
    """Each draw picks component k with probability w_k, then samples it."""
    mix = Mixture(components=tuple(components))
    weights = np.array([w for w, _ in mix.components])
    counts = rng.multinomial(n, weights)
    blocks = [
        sampler(int(cnt), rng)
        for (_, sampler), cnt in zip(mix.components, counts)
        if cnt > 0
    ]
    out = np.vstack(blocks)
    return out[rng.permutation(n)]
