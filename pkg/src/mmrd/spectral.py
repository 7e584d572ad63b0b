"""Principal Dirichlet eigenpair and the Kaplan blow-up functionals.

The eigenpair (lambda1, phi1) of -Lap phi = lambda phi with phi = 0 on the
boundary is available analytically on intervals and rectangles and via
inverse power iteration on the interior discrete Laplacian.  phi1 is
normalized so that its *discrete* integral over the domain equals 1, which
is the normalization every functional below relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConfigurationError, SolverFailure
from .mesh import Mesh, integrate

__all__ = [
    "EigenPair",
    "principal_eigenpair",
    "kaplan_y",
    "kaplan_z",
    "kaplan_threshold",
    "riccati_blowup_time",
    "check_nr_initial",
    "NrInitialVerdict",
]


@dataclass(frozen=True)
class EigenPair:
    """Principal Dirichlet eigenvalue and eigenfunction on the mesh.

    ``phi1`` is zero on the boundary, positive at interior nodes, and has
    discrete integral 1.  ``norm_residual`` is |integral(phi1) - 1| after
    normalization (rounding level by construction).  ``residual`` is the
    relative eigen-residual ||A phi - lambda1 phi|| / (lambda1 ||phi||) of
    the discrete interior operator; 0 for the analytic method where lambda1
    is exact.
    """

    mesh: Mesh
    lambda1: float
    phi1: np.ndarray
    method: str
    norm_residual: float
    residual: float


def _interior_laplacian(mesh: Mesh) -> sp.spmatrix:
    """Matrix of -Lap_h on interior nodes with homogeneous Dirichlet boundary."""
    mats = []
    for h, n in zip(mesh.spacing, mesh.counts):
        k = n - 2
        main = np.full(k, 2.0 / h**2)
        off = np.full(k - 1, -1.0 / h**2)
        mats.append(sp.diags([off, main, off], [-1, 0, 1], format="csc"))
    if mesh.dim == 1:
        return mats[0]
    ix = sp.identity(mesh.counts[0] - 2, format="csc")
    iy = sp.identity(mesh.counts[1] - 2, format="csc")
    return (sp.kron(mats[0], iy) + sp.kron(ix, mats[1])).tocsc()


def principal_eigenpair(mesh: Mesh, method: str = "analytic") -> EigenPair:
    """Compute (lambda1, phi1); ``method`` is "analytic" or "discrete"."""
    if method == "analytic":
        if mesh.dim == 1:
            (L,) = mesh.lengths
            lam = (math.pi / L) ** 2
            phi = np.sin(math.pi * mesh.axes[0] / L)
        else:
            lx, ly = mesh.lengths
            lam = math.pi**2 * (1.0 / lx**2 + 1.0 / ly**2)
            x, y = mesh.coords
            phi = np.sin(math.pi * x / lx) * np.sin(math.pi * y / ly)
        phi[mesh.boundary_mask] = 0.0
        mass = integrate(mesh, phi)
        phi = phi / mass
        return EigenPair(mesh, lam, phi, "analytic", abs(integrate(mesh, phi) - 1.0), 0.0)

    if method != "discrete":
        raise ConfigurationError(f"unknown eigenpair method {method!r}")

    A = _interior_laplacian(mesh)
    solve = spla.splu(A.tocsc()).solve
    v = np.ones(A.shape[0])
    v /= np.linalg.norm(v)
    lam = lam_prev = 0.0
    for _ in range(10_000):
        w = solve(v)
        v = w / np.linalg.norm(w)
        lam = float(v @ (A @ v))
        if abs(lam - lam_prev) <= 1e-10:
            break
        lam_prev = lam
    else:
        raise SolverFailure("inverse power iteration did not converge", abs(lam - lam_prev))
    residual = float(np.linalg.norm(A @ v - lam * v)) / lam

    phi = np.zeros(mesh.shape)
    if mesh.dim == 1:
        phi[1:-1] = v
    else:
        phi[1:-1, 1:-1] = v.reshape(mesh.counts[0] - 2, mesh.counts[1] - 2)
    if integrate(mesh, phi) < 0:
        phi = -phi
    phi = phi / integrate(mesh, phi)
    return EigenPair(mesh, lam, phi, "discrete", abs(integrate(mesh, phi) - 1.0), residual)


def kaplan_y(u: np.ndarray, ep: EigenPair) -> float:
    """Kaplan moment: integral of u * phi1."""
    return integrate(ep.mesh, np.asarray(u) * ep.phi1)


def kaplan_z(u1: np.ndarray, u2: np.ndarray, a: float, b: float, ep: EigenPair) -> float:
    """Derivative-free form of z = y' + (b + lambda1) y for the two-component
    system: integral of (a*u1 + b*u2 - u2^2/2) * phi1."""
    if a <= 0 or b <= 0:
        raise ConfigurationError(f"kaplan_z needs a, b > 0, got a={a}, b={b}")
    u1 = np.asarray(u1)
    u2 = np.asarray(u2)
    return integrate(ep.mesh, (a * u1 + b * u2 - 0.5 * np.square(u2)) * ep.phi1)


def kaplan_threshold(p: float, lambda1: float) -> float:
    """Critical value of the Kaplan moment: lambda1^(1/(p-2)) for p > 2."""
    if p <= 2:
        raise ConfigurationError(f"kaplan threshold needs p > 2, got {p}")
    return lambda1 ** (1.0 / (p - 2.0))


def riccati_blowup_time(y0: float, c: float) -> float:
    """Blow-up time of y' = y (y - 2c) / 2, y(0) = y0, for c > 0.

    Separation of variables with partial fractions
    1/(y(y-2c)) = (1/(2c)) (1/(y-2c) - 1/y) gives
    t(Y) = (1/c) * log( (y0 / (y0-2c)) * ((Y-2c) / Y) ), so letting Y -> inf
    the blow-up time is (1/c) * log(y0 / (y0 - 2c)); +inf when y0 <= 2c.
    """
    if c <= 0:
        raise ConfigurationError(f"riccati_blowup_time needs c > 0, got {c}")
    if y0 <= 2.0 * c:
        return math.inf
    return math.log(y0 / (y0 - 2.0 * c)) / c


@dataclass(frozen=True)
class NrInitialVerdict:
    satisfied: bool
    failed: str | None  # None | "first" | "second"
    z0: float  # integral of (a*u10 + b*u20 - u20^2/2) phi1
    y0: float  # integral of u20 phi1
    y0_threshold: float  # 2 (b + lambda1)


def check_nr_initial(
    u10: np.ndarray, u20: np.ndarray, a: float, b: float, ep: EigenPair
) -> NrInitialVerdict:
    """Check the blow-up initial conditions for the two-component system:
    z(0) >= 0 and y(0) > 2 (b + lambda1)."""
    z0 = kaplan_z(u10, u20, a, b, ep)
    y0 = kaplan_y(u20, ep)
    thr = 2.0 * (b + ep.lambda1)
    if z0 < 0.0:
        return NrInitialVerdict(False, "first", z0, y0, thr)
    if not y0 > thr:
        return NrInitialVerdict(False, "second", z0, y0, thr)
    return NrInitialVerdict(True, None, z0, y0, thr)
