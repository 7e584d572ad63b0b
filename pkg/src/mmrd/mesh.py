"""Uniform tensor grids on intervals and rectangles.

Grid functions ("fields") are plain float ndarrays of shape ``mesh.shape``:
``(n,)`` in 1D and ``(nx, ny)`` in 2D, boundary nodes included.  Quadrature
is the composite trapezoidal rule, consistent with the second-order spatial
discretization used throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigurationError
from .graphs import MonotoneGraph, minimal_section

__all__ = [
    "Mesh",
    "build_mesh",
    "integrate",
    "sup_norm",
    "positive_part_l2",
    "apply_diffusion",
]


@dataclass(frozen=True)
class Mesh:
    dim: int
    lengths: tuple[float, ...]
    counts: tuple[int, ...]

    @property
    def shape(self) -> tuple[int, ...]:
        return self.counts

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(L / (n - 1) for L, n in zip(self.lengths, self.counts))

    @cached_property
    def axes(self) -> tuple[np.ndarray, ...]:
        return tuple(np.linspace(0.0, L, n) for L, n in zip(self.lengths, self.counts))

    @cached_property
    def coords(self) -> tuple[np.ndarray, ...]:
        """Node coordinates broadcast to the grid shape (one array per axis)."""
        if self.dim == 1:
            return (self.axes[0],)
        return tuple(np.meshgrid(*self.axes, indexing="ij"))

    @cached_property
    def quad_weights(self) -> np.ndarray:
        """Trapezoidal quadrature weights, tensorized in 2D."""
        ws = []
        for h, n in zip(self.spacing, self.counts):
            w = np.full(n, h)
            w[0] = w[-1] = h / 2.0
            ws.append(w)
        if self.dim == 1:
            return ws[0]
        return np.multiply.outer(ws[0], ws[1])

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        if self.dim == 1:
            mask[0] = mask[-1] = True
        else:
            mask[0, :] = mask[-1, :] = True
            mask[:, 0] = mask[:, -1] = True
        return mask

    def zeros(self) -> np.ndarray:
        return np.zeros(self.shape)


def build_mesh(dim: int, lengths, counts) -> Mesh:
    """Uniform grid with ``counts`` nodes (boundary included) per axis."""
    if dim not in (1, 2):
        raise ConfigurationError(f"dim must be 1 or 2, got {dim}")
    lengths = tuple(float(L) for L in lengths)
    counts = tuple(int(n) for n in counts)
    if len(lengths) != dim or len(counts) != dim:
        raise ConfigurationError(f"expected {dim} lengths and counts, got {lengths}, {counts}")
    if any(L <= 0 for L in lengths):
        raise ConfigurationError(f"lengths must be > 0, got {lengths}")
    if any(n < 3 for n in counts):
        raise ConfigurationError(f"counts must be >= 3, got {counts}")
    return Mesh(dim, lengths, counts)


def integrate(mesh: Mesh, f: np.ndarray) -> float:
    """Composite trapezoidal rule over the domain."""
    f = np.asarray(f)
    if f.shape != mesh.shape:
        raise ConfigurationError(f"field shape {f.shape} does not match mesh {mesh.shape}")
    return float(np.sum(mesh.quad_weights * f))


def sup_norm(f: np.ndarray) -> float:
    return float(np.max(np.abs(f)))


def positive_part_l2(mesh: Mesh, f: np.ndarray) -> float:
    """Discrete L2 norm of max(f, 0)."""
    return math.sqrt(integrate(mesh, np.square(np.maximum(f, 0.0))))


def apply_diffusion(
    mesh: Mesh,
    f: np.ndarray,
    a: float,
    bc: MonotoneGraph,
    out: np.ndarray | None = None,
) -> np.ndarray:
    """Evaluate a * Lap_h f with the graph flux law closing the boundary rows.

    Interior nodes use the standard 3-point (1D) / 5-point (2D) stencil.  At
    a boundary node the ghost value is eliminated through the flux inclusion
    -a * d_nu f in gamma(f_b); since gamma may be multivalued there, the
    minimal-absolute-value section is used for this explicit evaluation (the
    implicit stepper never needs this choice: it solves the inclusion).
    Boundary values are projected onto the closure of the graph domain
    before taking the section, mirroring the projection applied to initial
    data.  Corners in 2D apply the flux law on each face independently.
    """
    if a <= 0:
        raise ConfigurationError(f"diffusion coefficient must be > 0, got {a}")
    f = np.asarray(f, dtype=float)
    if f.shape != mesh.shape:
        raise ConfigurationError(f"field shape {f.shape} does not match mesh {mesh.shape}")
    if out is None:
        out = np.zeros(mesh.shape)
    else:
        out.fill(0.0)

    def section(v: float) -> float:
        return minimal_section(bc, min(max(v, bc.domain_lo), bc.domain_hi))

    if mesh.dim == 1:
        (h,) = mesh.spacing
        out[1:-1] = a * (f[:-2] - 2.0 * f[1:-1] + f[2:]) / h**2
        out[0] = a * (2.0 * f[1] - 2.0 * f[0]) / h**2 - (2.0 / h) * section(float(f[0]))
        out[-1] = a * (2.0 * f[-2] - 2.0 * f[-1]) / h**2 - (2.0 / h) * section(float(f[-1]))
        return out

    hx, hy = mesh.spacing
    # second differences along each axis, faces via ghost elimination
    dxx = np.empty(mesh.shape)
    dxx[1:-1, :] = (f[:-2, :] - 2.0 * f[1:-1, :] + f[2:, :]) / hx**2
    gx_lo = np.array([section(float(v)) for v in f[0, :]])
    gx_hi = np.array([section(float(v)) for v in f[-1, :]])
    dxx[0, :] = (2.0 * f[1, :] - 2.0 * f[0, :]) / hx**2 - (2.0 / (a * hx)) * gx_lo
    dxx[-1, :] = (2.0 * f[-2, :] - 2.0 * f[-1, :]) / hx**2 - (2.0 / (a * hx)) * gx_hi
    dyy = np.empty(mesh.shape)
    dyy[:, 1:-1] = (f[:, :-2] - 2.0 * f[:, 1:-1] + f[:, 2:]) / hy**2
    gy_lo = np.array([section(float(v)) for v in f[:, 0]])
    gy_hi = np.array([section(float(v)) for v in f[:, -1]])
    dyy[:, 0] = (2.0 * f[:, 1] - 2.0 * f[:, 0]) / hy**2 - (2.0 / (a * hy)) * gy_lo
    dyy[:, -1] = (2.0 * f[:, -2] - 2.0 * f[:, -1]) / hy**2 - (2.0 / (a * hy)) * gy_hi
    np.add(dxx, dyy, out=out)
    out *= a
    return out
