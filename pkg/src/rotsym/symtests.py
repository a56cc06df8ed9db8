"""Test statistics for rotational symmetry and their reference distributions.

Specified-axis statistics (location, scatter, hybrid, Fisher-hybrid,
sign-cosine covariance) and unspecified-axis ones (plug-in scatter, the
efficient vMF location test, their hybrids, and the general efficient score
test).  Every statistic is computed in its O(n) moment form; the quadratic
double-sum definitions live in the test suite as oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy import stats as _scipy_stats

from . import geometry
from .errors import DegenerateCosinesError, DimensionError, SingularInformationError
from .numerics import chi2_sf

P_UNDERFLOW_CLAMP = 1e-300

METHODS = (
    "loc",
    "sc",
    "hyb",
    "hyb_fisher",
    "cov",
    "loc_vmf_unspec",
    "sc_unspec",
    "hyb_vmf_unspec",
    "hyb_fisher_unspec",
)

# labels used in reports and power tables
METHOD_LABELS = {
    "loc": "s-loc",
    "sc": "s-sc",
    "hyb": "s-hyb",
    "hyb_fisher": "s-hybF",
    "cov": "s-cov",
    "loc_vmf_unspec": "u-loc",
    "sc_unspec": "u-sc",
    "hyb_vmf_unspec": "u-hyb",
    "hyb_fisher_unspec": "u-hybF",
}
LABEL_TO_METHOD = {v: k for k, v in METHOD_LABELS.items()}


@dataclass(frozen=True)
class TestResult:
    statistic: float
    df: int | None
    p_value: float
    method: str
    theta_mode: str  # "specified" or "estimated:<name>"
    n: int
    p: int
    clamped: bool = False

    def asdict(self) -> dict:
        return {
            "method": METHOD_LABELS.get(self.method, self.method),
            "statistic": self.statistic,
            "df": self.df,
            "p_value": self.p_value,
            "n": self.n,
            "p": self.p,
            "theta_mode": self.theta_mode,
        }


def _check_p(p: int):
    if p < 3:
        raise DimensionError(f"tests require p >= 3, got p = {p}")


def _signs(sample, theta):
    sample = geometry.as_sample(sample)
    frame = geometry.tangent_frame(theta)
    _check_p(frame.p)
    v, u = geometry.decompose_sample(sample, frame)
    return sample.shape[0], frame.p, v, u


def _resolve_theta(sample, estimator):
    """Estimator name, or an explicit axis passed through as a degenerate one."""
    if isinstance(estimator, str):
        try:
            fn = geometry.ESTIMATORS[estimator]
        except KeyError:
            raise DimensionError(
                f"unknown estimator {estimator!r}; expected one of {sorted(geometry.ESTIMATORS)}"
            ) from None
        return fn(sample), f"estimated:{estimator}"
    return np.asarray(estimator, dtype=float), "estimated:fixed"


def _loc_statistic(n, p, u):
    ubar = u.mean(axis=0)
    return n * (p - 1) * float(ubar @ ubar)


def _sc_statistic(n, p, u):
    s = u.T @ u / n
    return n * (p * p - 1) / 2.0 * (float(np.trace(s @ s)) - 1.0 / (p - 1))


def q_loc(sample, theta) -> TestResult:
    """Rayleigh statistic on the tangent signs; chi^2_{p-1} under the null."""
    n, p, _, u = _signs(sample, theta)
    stat = _loc_statistic(n, p, u)
    df = p - 1
    return TestResult(stat, df, chi2_sf(stat, df), "loc", "specified", n, p)


def q_sc(sample, theta) -> TestResult:
    """Sign covariance sphericity statistic; chi^2_{(p-2)(p+1)/2} under the null."""
    n, p, _, u = _signs(sample, theta)
    stat = _sc_statistic(n, p, u)
    df = (p - 2) * (p + 1) // 2
    return TestResult(stat, df, chi2_sf(stat, df), "sc", "specified", n, p)


def q_hyb(sample, theta) -> TestResult:
    """Sum of location and scatter statistics; consistent against both families."""
    n, p, _, u = _signs(sample, theta)
    stat = _loc_statistic(n, p, u) + _sc_statistic(n, p, u)
    df = (p - 1) + (p - 2) * (p + 1) // 2
    return TestResult(stat, df, chi2_sf(stat, df), "hyb", "specified", n, p)


def _fisher_combine(stat_loc, df_loc, stat_sc, df_sc):
    clamped = False
    parts = []
    for stat, df in ((stat_loc, df_loc), (stat_sc, df_sc)):
        tail = chi2_sf(stat, df)
        if tail < P_UNDERFLOW_CLAMP:
            tail = P_UNDERFLOW_CLAMP
            clamped = True
        parts.append(-2.0 * np.log(tail))
    return float(sum(parts)), clamped


def q_hyb_fisher(sample, theta) -> TestResult:
    """Fisher combination of the two component p-values; chi^2_4 reference."""
    n, p, _, u = _signs(sample, theta)
    stat, clamped = _fisher_combine(
        _loc_statistic(n, p, u), p - 1, _sc_statistic(n, p, u), (p - 2) * (p + 1) // 2
    )
    return TestResult(stat, 4, chi2_sf(stat, 4), "hyb_fisher", "specified", n, p, clamped)


def q_cov(sample, theta) -> TestResult:
    """Zero-covariance check between cosines and signs; chi^2_{p-1} reference."""
    n, p, v, u = _signs(sample, theta)
    v2sum = float(v @ v)
    if v2sum <= 1e-12:
        raise DegenerateCosinesError("all cosines numerically zero")
    weighted = v @ u
    stat = (p - 1) / v2sum * float(weighted @ weighted)
    df = p - 1
    return TestResult(stat, df, chi2_sf(stat, df), "cov", "specified", n, p)


# ---------------------------------------------------------------------------
# Unspecified-axis tests


def q_sc_unspecified(sample, estimator="spherical_mean") -> TestResult:
    """Scatter test at an estimated axis; plug-in has no asymptotic cost."""
    theta_hat, mode = _resolve_theta(sample, estimator)
    result = q_sc(sample, theta_hat)
    return replace(result, method="sc_unspec", theta_mode=mode)


@dataclass(frozen=True)
class UnspecifiedLocStats:
    """Sample functionals entering the efficient vMF location test."""

    d_hat: float
    e_hat: float
    f_hat: float
    delta_hat: np.ndarray  # (p-1,)
    gamma_hat_scalar: float


def unspecified_loc_stats(sample, theta_hat) -> UnspecifiedLocStats:
    n, p, v, u = _signs(sample, theta_hat)
    vsum = float(v.sum())
    if abs(vsum) <= 1e-10:
        raise DegenerateCosinesError(
            "sum of cosines numerically zero; the vMF location test presumes unimodal data"
        )
    root = np.sqrt(1.0 - v * v)
    d_hat = (p - 2) * float(np.sum(v / root)) / ((p - 1) * vsum)
    e_hat = float(root.mean())
    f_hat = float(np.mean(v * v))
    delta_hat = (1.0 - d_hat * root) @ u / np.sqrt(n)
    gamma_hat_scalar = (1.0 - 2.0 * d_hat * e_hat + d_hat * d_hat * (1.0 - f_hat)) / (p - 1)
    return UnspecifiedLocStats(d_hat, e_hat, f_hat, delta_hat, gamma_hat_scalar)


def q_loc_vmf(sample, estimator="spherical_mean") -> TestResult:
    """Efficient location test, vMF score; valid under any angular function."""
    theta_hat, mode = _resolve_theta(sample, estimator)
    sample = geometry.as_sample(sample)
    n, p = sample.shape
    _check_p(p)
    parts = unspecified_loc_stats(sample, theta_hat)
    if parts.gamma_hat_scalar <= 1e-12:
        raise SingularInformationError(
            f"information scalar {parts.gamma_hat_scalar:.3e} not positive"
        )
    stat = float(parts.delta_hat @ parts.delta_hat) / parts.gamma_hat_scalar
    df = p - 1
    return TestResult(stat, df, chi2_sf(stat, df), "loc_vmf_unspec", mode, n, p)


def q_hyb_vmf(sample, estimator="spherical_mean") -> TestResult:
    loc = q_loc_vmf(sample, estimator)
    sc = q_sc_unspecified(sample, estimator)
    stat = loc.statistic + sc.statistic
    df = loc.df + sc.df
    return TestResult(
        stat, df, chi2_sf(stat, df), "hyb_vmf_unspec", loc.theta_mode, loc.n, loc.p
    )


def q_hyb_fisher_vmf(sample, estimator="spherical_mean") -> TestResult:
    loc = q_loc_vmf(sample, estimator)
    sc = q_sc_unspecified(sample, estimator)
    stat, clamped = _fisher_combine(loc.statistic, loc.df, sc.statistic, sc.df)
    return TestResult(
        stat, 4, chi2_sf(stat, 4), "hyb_fisher_unspec", loc.theta_mode, loc.n, loc.p, clamped
    )


def efficient_score_loc(sample, f: "AngularFunction", estimator="spherical_mean") -> TestResult:
    """Efficient location test targeting optimality at score function f.

    Needs phi_f and its derivative; with the vMF score this reduces exactly
    to q_loc_vmf (the concentration cancels).
    """
    if f.log_deriv is None or f.log_deriv_deriv is None:
        raise DimensionError("score function needs log_deriv and log_deriv_deriv")
    theta_hat, mode = _resolve_theta(sample, estimator)
    n, p, v, u = _signs(sample, theta_hat)
    root2 = 1.0 - v * v
    root = np.sqrt(root2)
    phi = np.asarray(f.log_deriv(v), dtype=float)
    dphi = np.asarray(f.log_deriv_deriv(v), dtype=float)
    i_hat = (p - 2) * float(np.mean(v / root))
    j_hat = (p - 1) * float(np.mean(phi * v)) - float(np.mean(dphi * root2))
    h_hat = float(np.mean(phi * root))
    k_hat = float(np.mean(phi * phi * root2))
    if abs(j_hat) <= 1e-12:
        raise SingularInformationError(f"cross-information {j_hat:.3e} numerically zero")
    ratio = i_hat / j_hat
    delta = (1.0 - ratio * phi * root) @ u / np.sqrt(n)
    gamma = (1.0 - 2.0 * ratio * h_hat + ratio * ratio * k_hat) / (p - 1)
    if gamma <= 1e-12:
        raise SingularInformationError(f"information scalar {gamma:.3e} not positive")
    stat = float(delta @ delta) / gamma
    df = p - 1
    return TestResult(stat, df, chi2_sf(stat, df), "loc_vmf_unspec", mode, n, p)


# ---------------------------------------------------------------------------
# High-dimensional standardization

_HIGH_DIM = {
    "loc": lambda p: (p - 1.0, np.sqrt(2.0 * (p - 1.0))),
    "sc": lambda p: ((p - 2.0) * (p + 1.0) / 2.0, np.sqrt((p - 2.0) * (p + 1.0))),
    "hyb": lambda p: ((p * (p + 1.0) - 4.0) / 2.0, np.sqrt(p * (p + 1.0) - 4.0)),
}


def high_dim_standardize(result: TestResult) -> TestResult:
    """Center/scale a specified-axis statistic to its standard normal limit."""
    if result.method not in _HIGH_DIM or result.theta_mode != "specified":
        raise DimensionError(
            f"high-dimensional standardization supports specified-axis loc/sc/hyb, got "
            f"{result.method}/{result.theta_mode}"
        )
    center, scale = _HIGH_DIM[result.method](result.p)
    z = (result.statistic - center) / scale
    return TestResult(
        z, None, float(_scipy_stats.norm.sf(z)), result.method, "specified",
        result.n, result.p,
    )


# label-driven dispatch used by the Monte Carlo harness and the CLI

SPECIFIED_TESTS = {
    "s-loc": q_loc,
    "s-sc": q_sc,
    "s-hyb": q_hyb,
    "s-hybF": q_hyb_fisher,
    "s-cov": q_cov,
}

UNSPECIFIED_TESTS = {
    "u-loc": q_loc_vmf,
    "u-sc": q_sc_unspecified,
    "u-hyb": q_hyb_vmf,
    "u-hybF": q_hyb_fisher_vmf,
}


def run_test(label: str, sample, theta=None, estimator="spherical_mean") -> TestResult:
    """Run one test by its report label (s-loc, u-sc, ...)."""
    if label in SPECIFIED_TESTS:
        if theta is None:
            raise DimensionError(f"test {label} needs a specified axis")
        return SPECIFIED_TESTS[label](sample, theta)
    if label in UNSPECIFIED_TESTS:
        return UNSPECIFIED_TESTS[label](sample, estimator)
    raise DimensionError(f"unknown test label {label!r}")
