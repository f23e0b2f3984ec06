"""Clifford-Fourier transform on uniform grids.

The kernel ``exp(-i <x, xi>)`` is scalar, so the transform acts channel by
channel. Output samples the continuous transform (prefactor ``(2 pi)^{-n/2}``)
at the centred frequency nodes ``xi_q = (q - N/2) * pi / L``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .field import GridMismatch, GridSpec, MVField, l2_norm


@dataclass(frozen=True)
class FrequencyGrid:
    dim: int
    n_points: int
    half_width: float  # of the spatial box this grid is dual to

    @property
    def spacing(self) -> float:
        return np.pi / self.half_width

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_points,) * self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        return (np.arange(self.n_points) - self.n_points // 2) * self.spacing

    def mesh(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*([self.axis] * self.dim), indexing="ij"))

    def coordinate(self, k: int) -> np.ndarray:
        if not 1 <= k <= self.dim:
            raise ValueError(f"coordinate index {k} outside [1, {self.dim}]")
        shape = [1] * self.dim
        shape[k - 1] = self.n_points
        return self.axis.reshape(shape)

    def radius(self) -> np.ndarray:
        return np.sqrt(sum(c**2 for c in self.mesh()))

    @property
    def spatial(self) -> GridSpec:
        return GridSpec(self.dim, self.n_points, self.half_width)


def dual_grid(grid: GridSpec) -> FrequencyGrid:
    return FrequencyGrid(grid.dim, grid.n_points, grid.half_width)


def _alternating(n_points: int, dim: int) -> np.ndarray:
    # (-1)^(m_1 + ... + m_n); also equals the post-twiddle exp(i xi_q L) up to (-1)^(nN/2)
    s = (-1.0) ** np.arange(n_points)
    out = s
    for _ in range(dim - 1):
        out = np.multiply.outer(out, s)
    return out


def _spatial_axes(dim: int) -> tuple[int, ...]:
    return tuple(range(1, dim + 1))


def forward(f: MVField) -> MVField:
    grid = f.grid
    if not isinstance(grid, GridSpec):
        raise GridMismatch("forward transform expects a spatial grid")
    n, N, h = grid.dim, grid.n_points, grid.spacing
    alt = _alternating(N, n)[None]
    # exp(-i xi_q x_m) = (-1)^(q - N/2) * exp(-2 pi i q m / N) * (-1)^m per axis
    post = alt * (-1.0) ** (n * (N // 2))
    spec = np.fft.fftn(f.data * alt, axes=_spatial_axes(n)) * post
    spec *= h**n / (2 * np.pi) ** (n / 2)
    return MVField(dual_grid(grid), spec)


def inverse(F: MVField) -> MVField:
    grid = F.grid
    if not isinstance(grid, FrequencyGrid):
        raise GridMismatch("inverse transform expects a frequency grid")
    n, N = grid.dim, grid.n_points
    alt = _alternating(N, n)[None]
    pre = alt * (-1.0) ** (n * (N // 2))
    vals = np.fft.ifftn(F.data * pre, axes=_spatial_axes(n)) * alt
    vals *= (grid.spacing * N) ** n / (2 * np.pi) ** (n / 2)
    return MVField(grid.spatial, vals)


def frequency_multiply(F: MVField, k: int) -> MVField:
    """``xi_k * F``."""
    return MVField(F.grid, F.data * F.grid.coordinate(k)[None])


def derivative_multiplier(F: MVField, k: int) -> MVField:
    """``i xi_k * F`` with the unpaired Nyquist bin zeroed."""
    xi = F.grid.coordinate(k).copy()
    xi.flat[0] = 0.0  # q = 0 is xi = -pi/h
    return MVField(F.grid, F.data * (1j * xi)[None])


def plancherel_ratio(f: MVField) -> float:
    nf = l2_norm(f)
    if nf == 0.0:
        warnings.warn("plancherel_ratio of a zero field; returning 1 by convention", stacklevel=2)
        return 1.0
    return l2_norm(forward(f)) / nf


def direct_forward(f: MVField) -> MVField:
    """Dense-matrix quadrature of the continuous transform (no FFT); oracle only."""
    grid = f.grid
    fg = dual_grid(grid)
    kernel = np.exp(-1j * np.outer(fg.axis, grid.axis)) * grid.spacing / np.sqrt(2 * np.pi)
    out = f.data
    for ax in range(1, grid.dim + 1):
        out = np.moveaxis(np.tensordot(kernel, out, axes=([1], [ax])), 0, ax)
    return MVField(fg, out)
