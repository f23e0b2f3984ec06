"""Multivector-valued functions sampled on uniform isotropic grids."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable

import numpy as np

from .multivector import (
    Multivector,
    dim_from_channels,
    hermitian_arrays,
    involution_signs,
    product_arrays,
    product_tables,
)

log = logging.getLogger(__name__)

# evaluator(coords) -> coefficient array (2**n, *coords[0].shape)
Evaluator = Callable[[tuple[np.ndarray, ...]], np.ndarray]


class GridMismatch(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """``N`` points per axis on ``[-L, L)``, nodes ``x_m = -L + m h``."""

    dim: int
    n_points: int
    half_width: float

    def __post_init__(self):
        if self.n_points < 2 or self.n_points % 2:
            raise ValueError(f"points per axis must be even and >= 2, got {self.n_points}")
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_points,) * self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.n_points)

    def mesh(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*([self.axis] * self.dim), indexing="ij"))

    def coordinate(self, k: int) -> np.ndarray:
        """Broadcastable array of the ``k``-th coordinate (1-based)."""
        if not 1 <= k <= self.dim:
            raise ValueError(f"coordinate index {k} outside [1, {self.dim}]")
        shape = [1] * self.dim
        shape[k - 1] = self.n_points
        return self.axis.reshape(shape)


@dataclass(frozen=True, eq=False)
class MVField:
    grid: object  # GridSpec or cft.FrequencyGrid
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.complex128)
        n = dim_from_channels(data.shape[0])
        if n != self.grid.dim or data.shape[1:] != self.grid.shape:
            raise GridMismatch(
                f"data shape {data.shape} does not match grid {self.grid.shape} with 2^{self.grid.dim} channels"
            )
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def dim(self) -> int:
        return self.grid.dim

    @classmethod
    def zeros(cls, grid) -> MVField:
        return cls(grid, np.zeros((1 << grid.dim,) + grid.shape, dtype=np.complex128))

    @classmethod
    def from_scalar(cls, grid, values: np.ndarray, mask: int = 0) -> MVField:
        data = np.zeros((1 << grid.dim,) + grid.shape, dtype=np.complex128)
        data[mask] = values
        return cls(grid, data)

    def _check(self, other: MVField) -> None:
        if other.grid != self.grid:
            raise GridMismatch(f"{self.grid} vs {other.grid}")

    def __add__(self, other: MVField) -> MVField:
        self._check(other)
        return MVField(self.grid, self.data + other.data)

    def __sub__(self, other: MVField) -> MVField:
        self._check(other)
        return MVField(self.grid, self.data - other.data)

    def __neg__(self) -> MVField:
        return MVField(self.grid, -self.data)

    def __mul__(self, c) -> MVField:
        if isinstance(c, Multivector):
            return self.right_mul(c)
        return MVField(self.grid, self.data * c)

    def __rmul__(self, c) -> MVField:
        if isinstance(c, Multivector):
            return self.left_mul(c)
        return MVField(self.grid, self.data * c)

    def _const(self, m: Multivector) -> np.ndarray:
        if m.n != self.dim:
            raise GridMismatch("multivector dimension does not match field")
        return m.coeffs.reshape((-1,) + (1,) * self.dim)

    def left_mul(self, m: Multivector) -> MVField:
        return MVField(self.grid, product_arrays(self._const(m), self.data))

    def right_mul(self, m: Multivector) -> MVField:
        return MVField(self.grid, product_arrays(self.data, self._const(m)))

    def product(self, other: MVField) -> MVField:
        """Pointwise geometric product."""
        self._check(other)
        return MVField(self.grid, product_arrays(self.data, other.data))

    def hermitian(self) -> MVField:
        return MVField(self.grid, hermitian_arrays(self.data))

    def at(self, index: tuple[int, ...]) -> Multivector:
        return Multivector(self.dim, self.data[(slice(None),) + tuple(index)])


def sample(evaluator: Evaluator, grid: GridSpec) -> MVField:
    values = np.asarray(evaluator(grid.mesh()), dtype=np.complex128)
    return MVField(grid, np.broadcast_to(values, (1 << grid.dim,) + grid.shape).copy())


def pointwise(fn: Callable[[np.ndarray], Multivector], n: int) -> Evaluator:
    """Adapt a per-point ``x -> Multivector`` function to the array evaluator protocol."""

    def evaluator(coords):
        shape = coords[0].shape
        flat = np.stack([c.reshape(-1) for c in coords])
        out = np.empty((1 << n, flat.shape[1]), dtype=np.complex128)
        for i in range(flat.shape[1]):
            out[:, i] = fn(flat[:, i]).coeffs
        return out.reshape((1 << n,) + shape)

    return evaluator


def _spatial_axes(f: MVField) -> tuple[int, ...]:
    return tuple(range(1, f.dim + 1))


def integral(f: MVField) -> Multivector:
    return Multivector(f.dim, f.data.sum(axis=_spatial_axes(f)) * f.grid.cell_volume)


def clifford_gram(fa: np.ndarray, ga: np.ndarray, axes) -> np.ndarray:
    """``G[A, B] = sum conj(f_A) g_B`` over ``axes`` (arrays with leading blade axis)."""
    return np.tensordot(np.conj(fa), ga, axes=(axes, axes))


def gram_to_multivector(gram: np.ndarray, n: int) -> Multivector:
    """Collapse a blade Gram matrix of ``f^dagger g`` into a multivector."""
    signs, masks = product_tables(n)
    herm = involution_signs(n)["conjugation"]
    terms = (herm[:, None] * signs) * gram
    size = 1 << n
    re = np.bincount(masks.ravel(), weights=terms.real.ravel(), minlength=size)
    im = np.bincount(masks.ravel(), weights=terms.imag.ravel(), minlength=size)
    return Multivector(n, re + 1j * im)


def inner_product(f: MVField, g: MVField) -> Multivector:
    """``<f, g> = int f(x)^dagger g(x) dV``, Clifford valued."""
    f._check(g)
    ax = list(_spatial_axes(f))
    gram = clifford_gram(f.data, g.data, ax)
    return gram_to_multivector(gram, f.dim) * f.grid.cell_volume


def channel_norm_sq(f: MVField) -> float:
    return float(np.sum(np.abs(f.data) ** 2) * f.grid.cell_volume)


def l2_norm(f: MVField) -> float:
    ip = inner_product(f, f)
    s = ip[0].real
    if s < -1e-12:
        raise ArithmeticError(f"negative squared norm {s}")
    residual = float(np.sqrt(np.sum(np.abs(ip.coeffs[1:]) ** 2) + ip[0].imag ** 2))
    if residual > 1e-10 * max(abs(s), 1.0):
        log.debug("non-scalar part of <f,f>: %.3e", residual)
    return float(np.sqrt(max(s, 0.0)))


def coordinate_multiply(f: MVField, k: int) -> MVField:
    return MVField(f.grid, f.data * f.grid.coordinate(k)[None])


def partial_derivative(f: MVField, k: int) -> MVField:
    """Spectral derivative: forward transform, multiply by ``i xi_k``, invert."""
    from . import cft

    F = cft.forward(f)
    return cft.inverse(cft.derivative_multiplier(F, k))


def central_difference(f: MVField, k: int, order: int = 4) -> MVField:
    """Periodic central difference of order 2 or 4; cross-check oracle only."""
    h = f.grid.spacing

    def shift(m):
        return np.roll(f.data, -m, axis=k)

    if order == 2:
        d = (shift(1) - shift(-1)) / (2 * h)
    elif order == 4:
        d = (-shift(2) + 8 * shift(1) - 8 * shift(-1) + shift(-2)) / (12 * h)
    else:
        raise ValueError(f"order must be 2 or 4, got {order}")
    return MVField(f.grid, d)


def cauchy_schwarz_check(f: MVField, g: MVField) -> float:
    """``magnitude(<f, g>) / (||f|| ||g||)``; 0 when either norm vanishes.

    At most 1 for scalar-valued fields and for real vector-valued fields. For
    general multivector-valued fields the coefficient magnitude of ``<f, g>``
    can exceed the product of norms.
    """
    nf, ng = l2_norm(f), l2_norm(g)
    if nf == 0.0 or ng == 0.0:
        return 0.0
    from .multivector import magnitude

    return magnitude(inner_product(f, g)) / (nf * ng)


def relative_l2_error(f: MVField, ref: MVField) -> float:
    den = np.sqrt(channel_norm_sq(ref))
    num = np.sqrt(channel_norm_sq(f - ref))
    return float(num / den) if den > 0 else float(num)


def export_table(f: MVField, path: str | Path) -> Path:
    """Write coordinates plus real/imag parts of every blade channel as text."""
    from .multivector import blade_label

    path = Path(path)
    coords = [c.reshape(-1) for c in f.grid.mesh()]
    cols = list(coords)
    names = [f"x{k + 1}" for k in range(f.dim)]
    for mask in range(1 << f.dim):
        label = blade_label(mask) or "1"
        cols += [f.data[mask].real.reshape(-1), f.data[mask].imag.reshape(-1)]
        names += [f"re_{label}", f"im_{label}"]
    np.savetxt(path, np.column_stack(cols), header=" ".join(names), fmt="%.17g")
    return path


def load_table(path: str | Path, grid: GridSpec) -> MVField:
    table = np.loadtxt(path)
    n = grid.dim
    data = np.empty((1 << n,) + grid.shape, dtype=np.complex128)
    for mask in range(1 << n):
        re = table[:, n + 2 * mask]
        im = table[:, n + 2 * mask + 1]
        data[mask] = (re + 1j * im).reshape(grid.shape)
    return MVField(grid, data)
