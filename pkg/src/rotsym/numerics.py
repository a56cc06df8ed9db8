"""Special functions, chi-square tails, and 1-d quadrature on [-1, 1].

Thin, contract-checked wrappers around scipy plus the quadrature rules used
to evaluate cosine-density normalizations and information functionals.
Integrands carrying a (1 - t^2)^(-1/2) endpoint singularity should go
through `integrate_chebyshev`, which absorbs the weight into the rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special, stats

from .errors import DimensionError


def bessel_i(nu: float, x: float, scaled: bool = False) -> float:
    """Modified Bessel function of the first kind I_nu(x).

    With scaled=True returns exp(-x) I_nu(x), which stays finite for the
    large concentrations reached in efficiency curves.
    """
    if nu < 0 or x < 0:
        raise DimensionError(f"bessel_i requires nu >= 0 and x >= 0, got nu={nu}, x={x}")
    value = special.ive(nu, x) if scaled else special.iv(nu, x)
    return float(value)


def chi2_cdf(x: float, df: float) -> float:
    if df <= 0:
        raise DimensionError(f"df must be positive, got {df}")
    return float(special.gammainc(df / 2.0, np.maximum(x, 0.0) / 2.0))


def chi2_sf(x: float, df: float) -> float:
    """Upper tail 1 - F_df(x), computed without cancellation."""
    if df <= 0:
        raise DimensionError(f"df must be positive, got {df}")
    return float(special.gammaincc(df / 2.0, np.maximum(x, 0.0) / 2.0))


def chi2_quantile(df: float, q: float) -> float:
    if df <= 0:
        raise DimensionError(f"df must be positive, got {df}")
    if not 0.0 <= q < 1.0:
        raise DimensionError(f"quantile level must be in [0, 1), got {q}")
    return float(stats.chi2.ppf(q, df))


def noncentral_chi2_cdf(x: float, df: float, lam: float) -> float:
    """CDF of the noncentral chi-square; lam = 0 reduces exactly to chi2_cdf."""
    if df <= 0:
        raise DimensionError(f"df must be positive, got {df}")
    if lam < 0:
        raise DimensionError(f"noncentrality must be >= 0, got {lam}")
    if lam == 0.0:
        return chi2_cdf(x, df)
    return float(stats.ncx2.cdf(x, df, lam))


def surface_area(d: int) -> float:
    """Surface measure of S^{d-1} embedded in R^d: 2 pi^{d/2} / Gamma(d/2)."""
    if d < 1:
        raise DimensionError(f"dimension must be >= 1, got {d}")
    return float(2.0 * np.pi ** (d / 2.0) / special.gamma(d / 2.0))


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for integration over [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray


@lru_cache(maxsize=32)
def gauss_legendre(order: int = 256) -> QuadratureRule:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return QuadratureRule(nodes=nodes, weights=weights)


@lru_cache(maxsize=32)
def gauss_chebyshev(order: int = 512) -> QuadratureRule:
    """Rule with the (1 - t^2)^(-1/2) weight built in: use on h where the
    full integrand is h(t) (1 - t^2)^(-1/2)."""
    k = np.arange(1, order + 1)
    nodes = np.cos((2 * k - 1) * np.pi / (2 * order))
    weights = np.full(order, np.pi / order)
    return QuadratureRule(nodes=nodes, weights=weights)


def integrate(f, rule: QuadratureRule | None = None) -> float:
    """Integral of f over [-1, 1]; f must accept a vector of nodes."""
    rule = rule if rule is not None else gauss_legendre()
    return float(np.sum(rule.weights * f(rule.nodes)))


def integrate_chebyshev(h, rule: QuadratureRule | None = None) -> float:
    """Integral of h(t) (1 - t^2)^(-1/2) over [-1, 1]."""
    rule = rule if rule is not None else gauss_chebyshev()
    return float(np.sum(rule.weights * h(rule.nodes)))
