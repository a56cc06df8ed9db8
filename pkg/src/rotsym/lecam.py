"""Asymptotic efficiency machinery: information functionals, relative
efficiency of the unspecified- vs specified-axis location tests, local
noncentrality parameters, and noncentral chi-square power predictions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics
from .distributions import AngularFunction, cosine_density
from .errors import DimensionError, SingularInformationError


@dataclass(frozen=True)
class InfoFunctionals:
    """Score integrals against the cosine density of g.

    i_p, j_p are the (squared-)score moments of g itself; j_fg, h_fg, k_fg
    are cross moments of an external score f against g.
    """

    i_p: float
    j_p: float
    j_fg: float
    h_fg: float
    k_fg: float


def _quad_against_cosine_density(g: AngularFunction, p: int, weight_fn, order: int = 256) -> float:
    out = _raw(g, p, weight_fn, order)
    check = _raw(g, p, weight_fn, 2 * order)
    if not np.isfinite(out) or abs(out - check) > max(1e-9, 1e-9 * abs(out)):
        raise SingularInformationError(
            f"information integral did not converge ({out!r} vs {check!r})"
        )
    return out


def _raw(g: AngularFunction, p: int, weight_fn, order: int) -> float:
    # substitute t = sin(s): the half powers of (1 - t^2) in the density and
    # the weights become powers of cos(s), so the integrand is smooth
    rule = numerics.gauss_legendre(order)
    s = rule.nodes * (np.pi / 2.0)
    t = np.sin(s)
    jac = (np.pi / 2.0) * np.cos(s)
    vals = weight_fn(t) * np.asarray(cosine_density(g, p, t), dtype=float)
    return float(np.sum(rule.weights * jac * vals))


def info_functionals(f: AngularFunction, g: AngularFunction, p: int) -> InfoFunctionals:
    """All five score integrals by quadrature against the cosine density of g."""
    if g.log_deriv is None or f.log_deriv is None:
        raise DimensionError("both angular functions need log_deriv")
    phi_g = lambda t: np.asarray(g.log_deriv(t), dtype=float)
    phi_f = lambda t: np.asarray(f.log_deriv(t), dtype=float)
    i_p = _quad_against_cosine_density(g, p, lambda t: phi_g(t) * np.sqrt(1.0 - t * t))
    j_p = _quad_against_cosine_density(g, p, lambda t: phi_g(t) ** 2 * (1.0 - t * t))
    j_fg = _quad_against_cosine_density(g, p, lambda t: phi_f(t) * phi_g(t) * (1.0 - t * t))
    h_fg = _quad_against_cosine_density(g, p, lambda t: phi_f(t) * np.sqrt(1.0 - t * t))
    k_fg = _quad_against_cosine_density(g, p, lambda t: phi_f(t) ** 2 * (1.0 - t * t))
    return InfoFunctionals(i_p=i_p, j_p=j_p, j_fg=j_fg, h_fg=h_fg, k_fg=k_fg)


def location_score_moment(g: AngularFunction, p: int) -> float:
    """Integration-by-parts twin of i_p: (p-2) E[ t (1-t^2)^(-1/2) ] under the
    cosine density.  Does not touch the score of g, so it provides an
    independent route to the same number."""
    weight = lambda t: t / np.sqrt(1.0 - t * t)
    return (p - 2) * _quad_against_cosine_density(g, p, weight)


def are_vmf(p: int, eta: float) -> float:
    """Efficiency of the unspecified-axis location test relative to the
    specified-axis one, at the vMF angular function with concentration eta.

    Closed form in Bessel ratios; scaled Bessel values keep it finite for
    large eta.
    """
    if p < 3:
        raise DimensionError(f"p must be >= 3, got {p}")
    if eta <= 0:
        raise DimensionError(f"eta must be > 0, got {eta}")
    from scipy.special import gamma as _gamma

    num = 2.0 * _gamma(p / 2.0) ** 2 * numerics.bessel_i((p - 1) / 2.0, eta, scaled=True) ** 2
    den = (
        (p - 1)
        * _gamma((p - 1) / 2.0) ** 2
        * numerics.bessel_i((p - 2) / 2.0, eta, scaled=True)
        * numerics.bessel_i(p / 2.0, eta, scaled=True)
    )
    return 1.0 - num / den


def noncentrality_te(big_l, p: int) -> float:
    """Local scatter perturbation I + n^(-1/2) L: lambda = (p-1) tr[L^2] / (2(p+1))."""
    big_l = np.asarray(big_l, dtype=float)
    if big_l.ndim != 2 or big_l.shape != (p - 1, p - 1):
        raise DimensionError(f"perturbation must be ({p - 1}, {p - 1}), got {big_l.shape}")
    if not np.allclose(big_l, big_l.T, atol=1e-10):
        raise DimensionError("perturbation must be symmetric")
    if abs(np.trace(big_l)) > 1e-10:
        raise DimensionError(f"perturbation must be traceless, trace = {np.trace(big_l)!r}")
    return (p - 1) * float(np.trace(big_l @ big_l)) / (2.0 * (p + 1))


def noncentrality_tm(k: float, p: int) -> float:
    """Local skewness intensity k/sqrt(n): lambda = k^2 / (p-1)."""
    if k < 0:
        raise DimensionError(f"k must be >= 0, got {k}")
    return k * k / (p - 1)


def noncentrality_semiparam(f: AngularFunction, g: AngularFunction, k: float, p: int) -> float:
    """Noncentrality of the efficient location test targeted at f under true g."""
    if k < 0:
        raise DimensionError(f"k must be >= 0, got {k}")
    info = info_functionals(f, g, p)
    ratio = info.i_p / info.j_fg
    denom = 1.0 - 2.0 * ratio * info.h_fg + ratio * ratio * info.k_fg
    if denom <= 0:
        raise SingularInformationError(f"information denominator {denom!r} not positive")
    numer = (1.0 - ratio * info.h_fg) ** 2
    return k * k / (p - 1) * numer / denom


def predicted_power(lam: float, df: int, alpha: float) -> float:
    """Asymptotic power of a chi^2_df test under noncentrality lam."""
    if lam < 0:
        raise DimensionError(f"noncentrality must be >= 0, got {lam}")
    if not 0.0 < alpha < 1.0:
        raise DimensionError(f"alpha must be in (0, 1), got {alpha}")
    crit = numerics.chi2_quantile(df, 1.0 - alpha)
    return 1.0 - numerics.noncentral_chi2_cdf(crit, df, lam)
