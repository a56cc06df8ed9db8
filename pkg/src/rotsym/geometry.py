"""Tangent-normal decomposition on the unit hypersphere.

A point x on S^{p-1} splits, relative to an axis theta, into the cosine
v = x'theta and the tangent sign u = Gamma' x / sqrt(1 - v^2), where the
columns of Gamma form an orthonormal basis of the orthogonal complement
of theta.  Everything downstream (test statistics, tangent families) is
built from (v, u) pairs, so this module also provides the two classical
axis estimators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousAxisError, DimensionError, PoleError, UndefinedMeanError

UNIT_TOL = 1e-10
POLE_TOL = 1e-12


def as_unit_vector(x, tol: float = UNIT_TOL) -> np.ndarray:
    """Validate x as a point on S^{p-1} and return it as a float array."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise DimensionError(f"unit vector must be 1-d with p >= 2, got shape {x.shape}")
    nrm = np.linalg.norm(x)
    if abs(nrm - 1.0) > tol:
        raise DimensionError(f"vector has norm {nrm!r}, not unit within {tol}")
    return x


def as_sample(rows) -> np.ndarray:
    """Validate an (n, p) array of unit vectors."""
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 2:
        raise DimensionError(f"sample must be (n >= 1, p >= 2), got shape {rows.shape}")
    norms = np.linalg.norm(rows, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > UNIT_TOL)
    if bad.size:
        raise DimensionError(f"rows {bad.tolist()} are not unit vectors")
    return rows


@dataclass(frozen=True)
class TangentFrame:
    """Axis theta together with an orthonormal basis of its orthogonal complement."""

    theta: np.ndarray  # (p,)
    gamma: np.ndarray  # (p, p-1), gamma' gamma = I, gamma gamma' = I - theta theta'

    @property
    def p(self) -> int:
        return self.theta.size


def tangent_frame(theta) -> TangentFrame:
    """Deterministic frame via the Householder reflector mapping e1 to theta.

    Columns 2..p of the reflector are orthonormal and orthogonal to theta.
    """
    theta = as_unit_vector(theta)
    p = theta.size
    e1 = np.zeros(p)
    e1[0] = 1.0
    w = e1 - theta
    wnorm2 = w @ w
    if wnorm2 < 1e-24:
        gamma = np.eye(p)[:, 1:]
    else:
        house = np.eye(p) - 2.0 * np.outer(w, w) / wnorm2
        gamma = house[:, 1:]
    return TangentFrame(theta=theta, gamma=gamma)


@dataclass(frozen=True)
class SignCosine:
    """Cosine v in [-1, 1] and unit tangent sign u of length p-1."""

    v: float
    u: np.ndarray


def decompose(x, frame: TangentFrame) -> SignCosine:
    """Split x into (v, u) relative to the frame; errors near the poles."""
    x = as_unit_vector(x)
    if x.size != frame.p:
        raise DimensionError(f"x has dimension {x.size}, frame has {frame.p}")
    v = float(x @ frame.theta)
    one_minus_v2 = 1.0 - v * v
    if one_minus_v2 <= POLE_TOL:
        raise PoleError(f"x within pole tolerance of +/-theta (1 - v^2 = {one_minus_v2:.3e})")
    u = (frame.gamma.T @ x) / np.sqrt(one_minus_v2)
    return SignCosine(v=v, u=u)


def decompose_sample(rows, frame: TangentFrame) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized decomposition of an (n, p) sample into cosines and signs.

    Returns (v, U) with v of shape (n,) and U of shape (n, p-1).  Raises
    PoleError listing offending row indices if any observation sits at a pole.
    """
    rows = as_sample(rows)
    if rows.shape[1] != frame.p:
        raise DimensionError(f"sample dimension {rows.shape[1]} != frame dimension {frame.p}")
    v = rows @ frame.theta
    one_minus_v2 = 1.0 - v * v
    bad = np.flatnonzero(one_minus_v2 <= POLE_TOL)
    if bad.size:
        raise PoleError(f"observations at poles: rows {bad.tolist()}", indices=bad.tolist())
    u = (rows @ frame.gamma) / np.sqrt(one_minus_v2)[:, None]
    return v, u


def reconstruct(sc: SignCosine, frame: TangentFrame) -> np.ndarray:
    """Invert the decomposition: v theta + sqrt(1 - v^2) Gamma u."""
    v = float(sc.v)
    if abs(v) > 1.0 + 1e-12:
        raise DimensionError(f"|v| = {abs(v)} exceeds 1")
    v = min(1.0, max(-1.0, v))
    u = np.asarray(sc.u, dtype=float)
    if u.size != frame.p - 1:
        raise DimensionError(f"sign has dimension {u.size}, expected {frame.p - 1}")
    x = v * frame.theta + np.sqrt(max(0.0, 1.0 - v * v)) * (frame.gamma @ u)
    return x


def reconstruct_sample(v, u, frame: TangentFrame) -> np.ndarray:
    """Vectorized inverse: rows v[i] theta + sqrt(1 - v[i]^2) Gamma u[i]."""
    v = np.asarray(v, dtype=float)
    u = np.asarray(u, dtype=float)
    radial = np.sqrt(np.clip(1.0 - v * v, 0.0, None))
    return v[:, None] * frame.theta + radial[:, None] * (u @ frame.gamma.T)


def spherical_mean(rows) -> np.ndarray:
    """Normalized resultant Xbar / ||Xbar||; the classical unimodal axis estimate."""
    rows = as_sample(rows)
    xbar = rows.mean(axis=0)
    nrm = np.linalg.norm(xbar)
    if nrm <= 1e-12:
        raise UndefinedMeanError(f"resultant length {nrm:.3e} too small")
    return xbar / nrm


def principal_axis(rows, tol: float = 1e-10) -> np.ndarray:
    """Leading unit eigenvector of the sample covariance; for axial data.

    Sign fixed so the first nonzero coordinate is positive, since axial
    distributions identify only the pair {+axis, -axis}.
    """
    rows = as_sample(rows)
    n, p = rows.shape
    if n < p:
        raise DimensionError(f"need n >= p for the principal axis, got n={n}, p={p}")
    centered = rows - rows.mean(axis=0)
    cov = centered.T @ centered / n
    eigvals, eigvecs = np.linalg.eigh(cov)
    if eigvals[-1] - eigvals[-2] <= tol:
        raise AmbiguousAxisError(
            f"top eigenvalue gap {eigvals[-1] - eigvals[-2]:.3e} below {tol}"
        )
    axis = eigvecs[:, -1]
    for coord in axis:
        if abs(coord) > 1e-12:
            if coord < 0:
                axis = -axis
            break
    return axis / np.linalg.norm(axis)


ESTIMATORS = {
    "spherical_mean": spherical_mean,
    "principal_axis": principal_axis,
}
