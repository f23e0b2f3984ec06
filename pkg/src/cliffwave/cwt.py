"""Continuous Clifford-wavelet transform with spin-group rotations.

Daughters are ``a^{-n/2} s psi(sbar (x - b) s / a) sbar`` and coefficients are
``T(a, b, s) = int [daughter(x)]^dagger f(x) dV``. On a grid the b-dependence
is a linear correlation, evaluated with zero-padded FFTs so that the fast
path reproduces the direct quadrature sample for sample.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from . import cft
from .field import (
    Evaluator,
    GridMismatch,
    GridSpec,
    MVField,
    gram_to_multivector,
    inner_product,
    sample,
)
from .multivector import (
    Multivector,
    conjugation,
    embed,
    geometric_product,
    grade_projection,
    grades,
    hermitian_arrays,
    magnitude,
    product_arrays,
    vector_part,
)

log = logging.getLogger(__name__)

CONSTANT_MODES = ("nominal", "calibrated")


class InadmissibleWavelet(ValueError):
    pass


# --------------------------------------------------------------------------- spin


@dataclass(frozen=True, eq=False)
class SpinElement:
    rotor: Multivector
    provenance: tuple[np.ndarray, ...] = ()

    def __post_init__(self):
        odd = self.rotor.coeffs[grades(self.rotor.n) % 2 == 1]
        if np.any(np.abs(odd) > 1e-12):
            raise ValueError("spin element must be even")
        unit = geometric_product(self.rotor, conjugation(self.rotor))
        if not unit.allclose(Multivector.scalar(self.rotor.n), atol=1e-12):
            raise ValueError(f"rotor is not unit: s sbar = {unit}")

    @property
    def dim(self) -> int:
        return self.rotor.n

    @property
    def conj(self) -> Multivector:
        return conjugation(self.rotor)

    @cached_property
    def matrix(self) -> np.ndarray:
        """``R`` with ``sbar x s = R x``."""
        n = self.dim
        cols = [rotate_vector(self, np.eye(n)[k]) for k in range(n)]
        return np.stack(cols, axis=1)

    def is_identity(self) -> bool:
        return self.rotor.allclose(Multivector.scalar(self.dim), atol=1e-15)


def rotor_from_vectors(vectors: Sequence[Sequence[float]]) -> SpinElement:
    """Product of an even number of unit vectors."""
    if len(vectors) % 2:
        raise ValueError("need an even number of unit vectors")
    vs = [np.asarray(v, dtype=float) for v in vectors]
    out = Multivector.scalar(vs[0].size)
    for v in vs:
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError("vectors must be unit length")
        out = out * embed(v)
    return SpinElement(Multivector(out.n, out.coeffs.real), tuple(vs))


def _factor(rotor: Multivector) -> tuple[np.ndarray, ...]:
    # rotor = u * (-u rotor) for a unit vector u in the rotor's bivector plane
    n = rotor.n
    biv = grade_projection(rotor, 2).coeffs.real
    if n == 2 or np.linalg.norm(biv) < 1e-14:
        u = np.eye(n)[0]
    elif n == 3:
        axis = np.array([biv[0b110], -biv[0b101], biv[0b011]])
        probe = np.eye(3)[int(np.argmin(np.abs(axis)))]
        u = np.cross(axis, probe)
        u /= np.linalg.norm(u)
    else:
        return ()
    w = -(embed(u) * rotor)
    if magnitude(w - grade_projection(w, 1)) > 1e-10:
        return ()
    return (u, vector_part(w).real)


def spin2_from_angle(theta: float) -> SpinElement:
    """Rotor whose action ``sbar x s`` turns the plane counter-clockwise by ``2 theta``."""
    rotor = Multivector(2, [np.cos(theta), 0, 0, -np.sin(theta)])
    return SpinElement(rotor, _factor(rotor))


def spin3_from_quaternion(q: Sequence[float]) -> SpinElement:
    w, x, y, z = np.asarray(q, dtype=float) / np.linalg.norm(q)
    c = np.zeros(8)
    c[0], c[0b110], c[0b101], c[0b011] = w, x, y, z
    rotor = Multivector(3, c)
    return SpinElement(rotor, _factor(rotor))


def rotate_vector(s: SpinElement, x: Sequence[float]) -> np.ndarray:
    """``sbar x s``; raises if the result leaves grade 1."""
    x = np.asarray(x, dtype=float)
    if x.size != s.dim:
        raise ValueError("vector and rotor dimensions differ")
    out = s.conj * embed(x) * s.rotor
    residual = magnitude(out - grade_projection(out, 1))
    if residual > 1e-10:
        raise ValueError(f"invalid rotor: non-vector residual {residual:.2e}")
    return vector_part(out).real


def haar_samples(n: int, count: int) -> list[tuple[SpinElement, float]]:
    """Equal-weight samples of Spin(n), total mass 1.

    n=2 uses angles ``j pi / count``: ``s`` and ``-s`` act identically, so
    ``[0, pi)`` already covers every rotation once. n=3 maps a Halton
    sequence to unit quaternions (Shoemake).
    """
    if count < 1:
        raise ValueError("count must be positive")
    if n == 2:
        return [(spin2_from_angle(j * np.pi / count), 1.0 / count) for j in range(count)]
    if n == 3:
        from scipy.stats import qmc

        u = qmc.Halton(d=3, scramble=False).random(count)
        out = []
        for u1, u2, u3 in u:
            r1, r2 = np.sqrt(1 - u1), np.sqrt(u1)
            q = (r2 * np.cos(2 * np.pi * u3), r1 * np.sin(2 * np.pi * u2),
                 r1 * np.cos(2 * np.pi * u2), r2 * np.sin(2 * np.pi * u3))
            out.append((spin3_from_quaternion(q), 1.0 / count))
        return out
    raise ValueError(f"Haar sampling supports n in {{2, 3}}, got {n}")


def identity_spin(n: int) -> SpinElement:
    return SpinElement(Multivector.scalar(n))


# --------------------------------------------------------------------------- wavelets


@dataclass(frozen=True, eq=False)
class MotherWavelet:
    name: str
    grid: GridSpec
    evaluator: Evaluator
    spectrum_evaluator: Evaluator
    gradient: Callable[[tuple[np.ndarray, ...]], np.ndarray] | None = None
    # value of psî psî^dagger / |xi|^n at xi -> 0; None means integrable singularity
    origin_limit: float | None = 0.0
    scalar_ok: bool = False
    divergent: bool = False
    A_psi: float = float("nan")
    C_psi: float = float("nan")
    scalarness_residual: float = float("nan")

    @property
    def dim(self) -> int:
        return self.grid.dim

    @cached_property
    def field(self) -> MVField:
        return sample(self.evaluator, self.grid)

    @cached_property
    def spectrum(self) -> MVField:
        return cft.forward(self.field)

    @property
    def admissible(self) -> bool:
        return self.scalar_ok and not self.divergent and np.isfinite(self.A_psi)

    def scaled(self, c: float) -> MotherWavelet:
        ev, sp, gr = self.evaluator, self.spectrum_evaluator, self.gradient
        raw = replace(
            self,
            evaluator=lambda x: c * ev(x),
            spectrum_evaluator=lambda x: c * sp(x),
            gradient=None if gr is None else (lambda x: c * gr(x)),
            origin_limit=None if self.origin_limit is None else c**2 * self.origin_limit,
        )
        return with_admissibility(raw)


def _gauss(coords, width=1.0):
    return np.exp(-sum(c**2 for c in coords) / (2 * width**2))


def _vector_valued(coords, scale):
    n = len(coords)
    out = np.zeros((1 << n,) + coords[0].shape, dtype=np.complex128)
    for j, c in enumerate(coords):
        out[1 << j] = c * scale
    return out


def _mexican_hat_value(coords):
    return _vector_valued(coords, _gauss(coords))


def _mexican_hat_spectrum(xi):
    return _vector_valued(xi, -1j * _gauss(xi))


def _mexican_hat_gradient(coords):
    n = len(coords)
    g = _gauss(coords)
    out = np.zeros((n, 1 << n) + coords[0].shape, dtype=np.complex128)
    for j in range(n):
        for i in range(n):
            out[j, 1 << i] = ((i == j) - coords[i] * coords[j]) * g
    return out


def mexican_hat_clifford(grid: GridSpec) -> MotherWavelet:
    """``psi(x) = x exp(-|x|^2/2)``, grade-1 valued with spectrum ``-i xi exp(-|xi|^2/2)``."""
    n = grid.dim
    limit = {1: 0.0, 2: 1.0}.get(n)  # |xi|^(2-n) exp(-|xi|^2) at the origin
    raw = MotherWavelet(
        name="mexican_hat",
        grid=grid,
        evaluator=_mexican_hat_value,
        spectrum_evaluator=_mexican_hat_spectrum,
        gradient=_mexican_hat_gradient,
        origin_limit=limit,
    )
    return with_admissibility(raw)


def gaussian_scalar(grid: GridSpec) -> MotherWavelet:
    """Plain scalar Gaussian; its spectrum does not vanish at 0, so it is not admissible."""

    def value(coords):
        out = np.zeros((1 << grid.dim,) + coords[0].shape, dtype=np.complex128)
        out[0] = _gauss(coords)
        return out

    raw = MotherWavelet("gaussian", grid, value, value, origin_limit=float("inf"))
    return with_admissibility(raw)


WAVELETS: dict[str, Callable[[GridSpec], MotherWavelet]] = {
    "mexican_hat": mexican_hat_clifford,
    "gaussian": gaussian_scalar,
}


def get_wavelet(name: str, grid: GridSpec) -> MotherWavelet:
    try:
        factory = WAVELETS[name]
    except KeyError:
        raise KeyError(f"unknown wavelet {name!r}; known: {sorted(WAVELETS)}") from None
    return factory(grid)


# --------------------------------------------------------------------------- admissibility


@dataclass(frozen=True)
class Admissibility:
    scalar_ok: bool
    divergent: bool
    A_psi: float
    C_psi: float
    scalarness_residual: float

    @property
    def admissible(self) -> bool:
        return self.scalar_ok and not self.divergent


def _spectral_power(spec: np.ndarray) -> np.ndarray:
    return product_arrays(spec, hermitian_arrays(spec))


def _origin_cell_average(psi: MotherWavelet, fg: cft.FrequencyGrid, sub: int = 16) -> float:
    d = fg.spacing
    t = (np.arange(sub) + 0.5) / sub * d - d / 2
    pts = np.meshgrid(*([t] * fg.dim), indexing="ij")
    p = _spectral_power(psi.spectrum_evaluator(tuple(pts)))[0].real
    r = np.sqrt(sum(c**2 for c in pts))
    return float(np.mean(p / r**fg.dim))


def admissibility_integral(psi: MotherWavelet) -> float:
    """``(2 pi)^n int psî psî^dagger / |xi|^n dV`` by quadrature over the sampled spectrum."""
    spec = psi.spectrum
    fg = spec.grid
    n = fg.dim
    power = _spectral_power(spec.data)[0].real
    r = fg.radius()
    origin = tuple([fg.n_points // 2] * n)
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = power / r**n
    integrand[origin] = psi.origin_limit if psi.origin_limit is not None else _origin_cell_average(psi, fg)
    return float((2 * np.pi) ** n * integrand.sum() * fg.cell_volume)


def calibration_probes(grid: GridSpec) -> list[MVField]:
    """Probe fields whose spectra vanish at 0, so the missing xi=0 bin costs nothing."""
    probes = []
    for width in (0.75, 1.0, 1.5):
        probes.append(sample(lambda c, w=width: _vector_valued(c, _gauss(c, w)), grid))
    x1 = grid.mesh()[0]
    probes.append(MVField.from_scalar(grid, np.cos(1.5 * x1) * _gauss(grid.mesh(), 1.5)
                                      - np.exp(-1.5**2 * 1.5**2 / 2) * _gauss(grid.mesh(), 1.5)))
    return probes


def reference_energy_ratio(psi: MotherWavelet, f: MVField, spins_count: int = 4) -> float:
    """``[T f, T f] / ||f||^2`` with unit constant, integrated over a wide scale range.

    Uses Plancherel in ``b``: ``||T(a,.,s)||^2 = (2pi)^n a^n int P(a R xi) |f̂|^2`` where
    ``P = psî psî^dagger`` is scalar for an admissible wavelet.
    """
    n = f.dim
    F = cft.forward(f)
    fg = F.grid
    weight = np.sum(np.abs(F.data) ** 2, axis=0) * fg.cell_volume
    keep = weight > weight.max() * 1e-18
    xi = np.stack([c[keep] for c in fg.mesh()])
    w = weight[keep]
    xi_max = np.pi / f.grid.spacing * np.sqrt(n)
    a_lo, a_hi = 1e-3 / xi_max, 12.0 / fg.spacing
    scales = log_scales(a_lo, a_hi, int(np.ceil(np.log(a_hi / a_lo) / 0.05)) + 1, n)
    spins = haar_samples(n, spins_count) if n in (2, 3) else [(identity_spin(n), 1.0)]
    total = 0.0
    for a, wa in zip(scales.nodes, scales.weights):
        for s, ws in spins:
            rx = s.matrix @ xi * a
            p = _spectral_power(psi.spectrum_evaluator(tuple(rx)))[0].real
            total += wa * ws * a**n * float(np.dot(p, w))
    return (2 * np.pi) ** n * total / (float(np.sum(weight)))


def check_admissibility(psi: MotherWavelet, tol: float = 1e-10) -> Admissibility:
    spec = psi.spectrum
    power = _spectral_power(spec.data)
    scalar = power[0].real
    peak = float(np.max(np.abs(scalar)))
    nonscalar = np.sqrt(np.sum(np.abs(power[1:]) ** 2, axis=0) + power[0].imag ** 2)
    residual = float(nonscalar.max() / peak) if peak > 0 else float("inf")
    scalar_ok = residual < tol
    fg = spec.grid
    origin = tuple([fg.n_points // 2] * fg.dim)
    divergent = bool(abs(scalar[origin]) > 1e-8 * peak) or psi.origin_limit == float("inf")
    if divergent:
        log.warning("admissibility integral diverges for %s: spectrum nonzero at xi=0", psi.name)
        return Admissibility(scalar_ok, True, float("inf"), float("inf"), residual)
    A = admissibility_integral(psi)
    C = float("nan")
    if scalar_ok:
        C = float(np.median([reference_energy_ratio(psi, p) for p in calibration_probes(psi.grid)]))
    return Admissibility(scalar_ok, False, A, C, residual)


def with_admissibility(psi: MotherWavelet, tol: float = 1e-10) -> MotherWavelet:
    adm = check_admissibility(psi, tol)
    return replace(
        psi,
        scalar_ok=adm.scalar_ok,
        divergent=adm.divergent,
        A_psi=adm.A_psi,
        C_psi=adm.C_psi,
        scalarness_residual=adm.scalarness_residual,
    )


def resolve_constant(psi: MotherWavelet, mode: str) -> float:
    if mode == "nominal":
        return psi.A_psi
    if mode == "calibrated":
        return psi.C_psi
    if mode == "unit":
        return 1.0
    raise ValueError(f"constant mode must be one of {CONSTANT_MODES}, got {mode!r}")


def require_admissible(psi: MotherWavelet) -> None:
    if not psi.admissible:
        raise InadmissibleWavelet(
            f"{psi.name}: scalar_ok={psi.scalar_ok} divergent={psi.divergent} A_psi={psi.A_psi}"
        )


# --------------------------------------------------------------------------- quadrature


@dataclass(frozen=True, eq=False)
class ScaleQuadrature:
    """Log-uniform nodes with weights ``dln(a) * a^-n`` for ``da / a^(n+1)``."""

    nodes: np.ndarray
    weights: np.ndarray
    a_min: float
    a_max: float

    def __len__(self) -> int:
        return len(self.nodes)

    def describe(self) -> dict:
        return {"a_min": self.a_min, "a_max": self.a_max, "count": len(self.nodes)}


def log_scales(a_min: float, a_max: float, count: int, dim: int) -> ScaleQuadrature:
    if not 0 < a_min <= a_max:
        raise ValueError("need 0 < a_min <= a_max")
    if count < 1:
        raise ValueError("scale count must be positive")
    if count == 1:
        nodes = np.array([a_min])
        dlog = 1.0
    else:
        nodes = np.geomspace(a_min, a_max, count)
        dlog = np.log(a_max / a_min) / (count - 1)
    return ScaleQuadrature(nodes, dlog * nodes ** (-float(dim)), float(a_min), float(a_max))


def single_scale(a: float) -> ScaleQuadrature:
    return ScaleQuadrature(np.array([float(a)]), np.array([1.0]), float(a), float(a))


# --------------------------------------------------------------------------- daughters


def _local_coords(a, b, s: SpinElement, coords):
    b = np.zeros(len(coords)) if b is None else np.asarray(b, dtype=float)
    shifted = [c - bk for c, bk in zip(coords, b)]
    R = s.matrix
    n = len(coords)
    return tuple(sum(R[j, k] * shifted[k] for k in range(n)) / a for j in range(n))


def _sandwich(s: SpinElement, values: np.ndarray) -> np.ndarray:
    if s.is_identity():
        return values
    shape = (-1,) + (1,) * (values.ndim - 1)
    left = s.rotor.coeffs.reshape(shape)
    right = s.conj.coeffs.reshape(shape)
    return product_arrays(product_arrays(left, values), right)


def daughter_values(psi: MotherWavelet, a: float, b, s: SpinElement, coords) -> np.ndarray:
    if a <= 0:
        raise ValueError("scale must be positive")
    n = len(coords)
    y = _local_coords(a, b, s, coords)
    return a ** (-n / 2) * _sandwich(s, psi.evaluator(y))


def daughter_gradient_values(psi: MotherWavelet, a: float, b, s: SpinElement, coords, k: int) -> np.ndarray:
    """``d/dx_k`` of the daughter, from the mother's analytic gradient."""
    if psi.gradient is None:
        raise ValueError(f"{psi.name} has no analytic gradient")
    n = len(coords)
    y = _local_coords(a, b, s, coords)
    grad = psi.gradient(y)
    R = s.matrix
    acc = sum(R[j, k - 1] * grad[j] for j in range(n))
    return a ** (-n / 2) / a * _sandwich(s, acc)


def daughter(psi: MotherWavelet, a: float, b, s: SpinElement, grid: GridSpec | None = None) -> MVField:
    grid = grid or psi.grid
    return MVField(grid, daughter_values(psi, a, b, s, grid.mesh()))


def transform_direct(f: MVField, psi: MotherWavelet, a: float, b, s: SpinElement) -> Multivector:
    """Quadrature oracle: ``<daughter, f>``."""
    return inner_product(daughter(psi, a, b, s, f.grid), f)


def transform_direct_b_derivative(f: MVField, psi: MotherWavelet, a: float, b, s: SpinElement, k: int) -> Multivector:
    """``d/db_k T(a, b, s)`` by quadrature; the daughter depends on ``x - b``."""
    g = MVField(f.grid, -daughter_gradient_values(psi, a, b, s, f.grid.mesh(), k))
    return inner_product(g, f)


# --------------------------------------------------------------------------- atlas


@dataclass(frozen=True, eq=False)
class CwtAtlas:
    grid: GridSpec
    wavelet: MotherWavelet
    scales: ScaleQuadrature
    spins: tuple[SpinElement, ...]
    spin_weights: np.ndarray
    coeffs: np.ndarray  # (n_scales, n_spins, 2**n, N, ..., N)

    @property
    def dim(self) -> int:
        return self.grid.dim

    def slice(self, i: int, j: int) -> MVField:
        return MVField(self.grid, self.coeffs[i, j])

    def measure_weights(self) -> np.ndarray:
        return np.outer(self.scales.weights, self.spin_weights)

    def with_coeffs(self, coeffs: np.ndarray) -> CwtAtlas:
        if coeffs.shape != self.coeffs.shape:
            raise GridMismatch("coefficient shape change")
        return replace(self, coeffs=coeffs)

    def quadrature(self) -> dict:
        return {
            **self.scales.describe(),
            "spins": len(self.spins),
            "grid_n": self.grid.n_points,
            "box": self.grid.half_width,
        }

    def compatible(self, other: CwtAtlas) -> bool:
        return (
            self.grid == other.grid
            and np.array_equal(self.scales.nodes, other.scales.nodes)
            and np.array_equal(self.scales.weights, other.scales.weights)
            and np.array_equal(self.spin_weights, other.spin_weights)
            and all(a.rotor.allclose(b.rotor, atol=0) for a, b in zip(self.spins, other.spins))
            and len(self.spins) == len(other.spins)
        )


def _padded_offsets(grid: GridSpec) -> np.ndarray:
    N = grid.n_points
    idx = np.arange(2 * N)
    return np.where(idx < N, idx, idx - 2 * N) * grid.spacing


def _kernel_mesh(grid: GridSpec, sign: float) -> tuple[np.ndarray, ...]:
    off = sign * _padded_offsets(grid)
    return tuple(np.meshgrid(*([off] * grid.dim), indexing="ij"))


def _axes(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def _pad(data: np.ndarray, N: int) -> np.ndarray:
    n = data.ndim - 1
    out = np.zeros((data.shape[0],) + (2 * N,) * n, dtype=np.complex128)
    out[(slice(None),) + (slice(0, N),) * n] = data
    return out


def _spins(spins) -> tuple[tuple[SpinElement, ...], np.ndarray]:
    elems = tuple(s for s, _ in spins)
    weights = np.array([w for _, w in spins], dtype=float)
    return elems, weights


def transform_grid(f: MVField, psi: MotherWavelet, scales: ScaleQuadrature, spins) -> CwtAtlas:
    """All coefficients ``T(a_i, b, s_j)`` with ``b`` on ``f``'s grid.

    Per slice this is the identity ``F_b[T] = (2 pi)^{n/2} [psî_{a,s}]^dagger f̂`` in its
    discrete form: the conjugated daughter sampled on the lattice of differences
    ``x_m - b_p`` is convolved with ``f``.
    """
    grid = f.grid
    if grid != psi.grid:
        raise GridMismatch("wavelet and field grids differ")
    n, N, h = grid.dim, grid.n_points, grid.spacing
    elems, weights = _spins(spins)
    axes = _axes(n)
    Ff = np.fft.fftn(_pad(f.data, N), axes=axes)
    mesh = _kernel_mesh(grid, -1.0)  # K(x_m - b_p) with p - m = e sampled at -e h
    keep = (slice(None),) + (slice(0, N),) * n
    out = np.empty((len(scales), len(elems), 1 << n) + grid.shape, dtype=np.complex128)
    for i, a in enumerate(scales.nodes):
        for j, s in enumerate(elems):
            kern = hermitian_arrays(daughter_values(psi, a, None, s, mesh))
            prod = product_arrays(np.fft.fftn(kern, axes=axes), Ff)
            out[i, j] = np.fft.ifftn(prod, axes=axes)[keep] * h**n
    return CwtAtlas(grid, psi, scales, elems, weights, out)


def inverse(atlas: CwtAtlas, psi: MotherWavelet | None = None, constant_mode: str = "calibrated") -> MVField:
    """``(1/const) sum_ij w_i v_j sum_b h^n daughter(a_i, b, s_j)(x) T(a_i, b, s_j)``."""
    psi = psi or atlas.wavelet
    grid = atlas.grid
    n, N, h = grid.dim, grid.n_points, grid.spacing
    const = resolve_constant(psi, constant_mode)
    axes = _axes(n)
    mesh = _kernel_mesh(grid, 1.0)
    wv = atlas.measure_weights()
    acc = np.zeros((1 << n,) + (2 * N,) * n, dtype=np.complex128)
    for i, a in enumerate(atlas.scales.nodes):
        for j, s in enumerate(atlas.spins):
            coeff = atlas.coeffs[i, j]
            if not np.any(coeff):
                continue
            kern = daughter_values(psi, a, None, s, mesh)
            acc += wv[i, j] * product_arrays(
                np.fft.fftn(kern, axes=axes), np.fft.fftn(_pad(coeff, N), axes=axes)
            )
    keep = (slice(None),) + (slice(0, N),) * n
    vals = np.fft.ifftn(acc, axes=axes)[keep] * h**n / const
    return MVField(grid, vals)


def inverse_direct(atlas: CwtAtlas, psi: MotherWavelet | None = None, constant_mode: str = "calibrated") -> MVField:
    """Synthesis by explicit daughter sums; oracle only (cost ~ N^(2n) per slice)."""
    psi = psi or atlas.wavelet
    grid = atlas.grid
    const = resolve_constant(psi, constant_mode)
    mesh = grid.mesh()
    wv = atlas.measure_weights()
    acc = np.zeros((1 << grid.dim,) + grid.shape, dtype=np.complex128)
    bpoints = np.stack([c.reshape(-1) for c in mesh], axis=1)
    for i, a in enumerate(atlas.scales.nodes):
        for j, s in enumerate(atlas.spins):
            flat = atlas.coeffs[i, j].reshape(1 << grid.dim, -1)
            for p, b in enumerate(bpoints):
                c = flat[:, p]
                if not np.any(c):
                    continue
                d = daughter_values(psi, a, b, s, mesh)
                acc += wv[i, j] * product_arrays(d, c.reshape((-1,) + (1,) * grid.dim))
    return MVField(grid, acc * grid.cell_volume / const)


def h_inner_product(atlas_f: CwtAtlas, atlas_g: CwtAtlas, constant_mode: str = "calibrated") -> Multivector:
    """``(1/const) sum w_i v_j sum_b h^n T_f^dagger T_g``."""
    if not atlas_f.compatible(atlas_g):
        raise GridMismatch("atlases use different quadratures")
    const = resolve_constant(atlas_f.wavelet, constant_mode)
    n = atlas_f.dim
    wv = atlas_f.measure_weights()
    S, P = wv.shape
    tf = atlas_f.coeffs.reshape(S * P, 1 << n, -1)
    tg = atlas_g.coeffs.reshape(S * P, 1 << n, -1)
    gram = np.einsum("s,sam,sbm->ab", wv.reshape(-1), np.conj(tf), tg)
    return gram_to_multivector(gram, n) * (atlas_f.grid.cell_volume / const)


def weighted_slice_norms(atlas: CwtAtlas) -> float:
    """``sum w_i v_j ||T(a_i, ., s_j)||^2``."""
    wv = atlas.measure_weights()
    per = np.sum(np.abs(atlas.coeffs) ** 2, axis=tuple(range(2, atlas.coeffs.ndim)))
    return float(np.sum(wv * per) * atlas.grid.cell_volume)
