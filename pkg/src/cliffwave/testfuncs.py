"""Named, seedable test-function generators used by the property suites and the CLI."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .field import GridSpec, MVField


def _r2(coords, widths=None, center=None) -> np.ndarray:
    n = len(coords)
    widths = np.ones(n) if widths is None else np.broadcast_to(np.asarray(widths, float), (n,))
    center = np.zeros(n) if center is None else np.asarray(center, float)
    return sum(((c - x0) / w) ** 2 for c, x0, w in zip(coords, center, widths))


def gaussian(grid: GridSpec, width: float = 1.0, center=None, mask: int = 0) -> MVField:
    """``exp(-|x - c|^2 / (2 w^2))`` placed in blade channel ``mask``."""
    return MVField.from_scalar(grid, np.exp(-_r2(grid.mesh(), width, center) / 2), mask)


def squeezed(grid: GridSpec, widths=(0.5, 1.0)) -> MVField:
    """Axis-aligned anisotropic Gaussian with per-axis widths."""
    return MVField.from_scalar(grid, np.exp(-_r2(grid.mesh(), widths) / 2))


def dilated(grid: GridSpec, a: float = 1.0) -> MVField:
    """``g(x / a)`` for the unit Gaussian ``g``."""
    return gaussian(grid, width=a)


def modulated(grid: GridSpec, sigma: float = 4.0, omega: float = 0.75, axis: int = 1) -> MVField:
    """Gaussian envelope times ``cos(omega x_axis)``; its spectrum is an annulus-like pair of bumps."""
    x = grid.mesh()
    env = np.exp(-_r2(x, sigma) / 2)
    return MVField.from_scalar(grid, env * np.cos(omega * x[axis - 1]))


def random_bandlimited(
    grid: GridSpec,
    seed: int = 0,
    modes: int = 6,
    envelope: float = 1.5,
    band: float = 2.0,
    grades: tuple[int, ...] | None = None,
    real: bool = False,
) -> MVField:
    """Random superposition of plane waves under a Gaussian envelope.

    Frequencies are uniform in the ball ``|omega| <= band`` and every mode carries
    an independent complex coefficient in every blade channel, so the field is
    genuinely multivector valued. ``grades`` keeps only the listed blade grades
    and ``real`` drops the imaginary part.
    """
    rng = np.random.default_rng(seed)
    n = grid.dim
    x = grid.mesh()
    data = np.zeros((1 << n,) + grid.shape, dtype=np.complex128)
    for _ in range(modes):
        direction = rng.normal(size=n)
        direction /= np.linalg.norm(direction)
        omega = direction * band * rng.uniform() ** (1.0 / n)
        shift = rng.normal(size=n) * envelope / 2
        wave = np.exp(1j * sum(w * c for w, c in zip(omega, x))) * np.exp(
            -_r2(x, envelope, shift) / 2
        )
        coef = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        data += coef.reshape((-1,) + (1,) * n) * wave
    if grades is not None:
        keep = np.isin([bin(m).count("1") for m in range(1 << n)], grades)
        data[~keep] = 0.0
    if real:
        data = data.real.astype(np.complex128)
    return MVField(grid, data)


GENERATORS: dict[str, Callable[..., MVField]] = {
    "gaussian": gaussian,
    "squeezed": squeezed,
    "dilated": dilated,
    "modulated": modulated,
    "random_bandlimited": random_bandlimited,
}


def generate(name: str, grid: GridSpec, **params) -> MVField:
    try:
        gen = GENERATORS[name]
    except KeyError:
        raise KeyError(f"unknown test function {name!r}; known: {sorted(GENERATORS)}") from None
    return gen(grid, **params)
