"""Evaluators for spatial/spectral uncertainty inequalities and their wavelet analogues.

Every evaluator returns an :class:`UncertaintyReport` holding both sides, their
ratio and the named intermediate quantities, so that a failing or report-only
check can be audited after the fact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import cft
from .cwt import (
    CwtAtlas,
    MotherWavelet,
    ScaleQuadrature,
    h_inner_product,
    inverse,
    inverse_direct,
    require_admissible,
    resolve_constant,
    transform_direct,
    transform_direct_b_derivative,
    transform_grid,
    weighted_slice_norms,
)
from .field import (
    MVField,
    central_difference,
    channel_norm_sq,
    coordinate_multiply,
    inner_product,
    l2_norm,
    partial_derivative,
)
from .multivector import Multivector, hermitian_arrays, magnitude, product_arrays

VERDICTS = ("holds", "violated", "report-only")
REPORT_ONLY = frozenset({"sharp_bound", "base_inequality_probe"})


@dataclass
class UncertaintyReport:
    theorem: str
    k: int
    lhs: float
    rhs: float
    ratio: float
    components: dict[str, Any] = field(default_factory=dict)
    quadrature: dict[str, Any] = field(default_factory=dict)
    verdict: str = "report-only"
    threshold: float | None = None

    def __post_init__(self):
        if self.lhs < 0 or self.rhs < 0:
            raise ValueError(f"negative side in {self.theorem}: lhs={self.lhs} rhs={self.rhs}")
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def asserted(self) -> bool:
        return self.verdict != "report-only"

    @property
    def passed(self) -> bool:
        return self.verdict != "violated"

    def to_record(self) -> dict[str, Any]:
        """Flat key-value record; nested blocks become ``components.<name>`` keys."""
        rec: dict[str, Any] = {
            "theorem": self.theorem,
            "k": self.k,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "verdict": self.verdict,
            "threshold": self.threshold,
        }
        for key, val in self.components.items():
            rec[f"components.{key}"] = _plain(val)
        for key, val in self.quadrature.items():
            rec[f"quadrature.{key}"] = _plain(val)
        return rec


def _plain(val):
    if isinstance(val, (np.floating, np.integer)):
        return val.item()
    if isinstance(val, complex):
        return [val.real, val.imag]
    return val


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0:
        return lhs / rhs
    return float("nan")


def _judge(ratio: float, threshold: float | None) -> str:
    if threshold is None or not math.isfinite(ratio):
        return "report-only"
    return "holds" if ratio >= threshold else "violated"


# --------------------------------------------------------------------------- basic norms


def coordinate_norm(f: MVField, k: int) -> float:
    """``||x_k f||``."""
    return l2_norm(coordinate_multiply(f, k))


def frequency_norm(f: MVField, k: int) -> float:
    """``||xi_k f̂||``."""
    return l2_norm(cft.frequency_multiply(cft.forward(f), k))


def _describe_grid(f: MVField) -> dict:
    return {"dim": f.dim, "grid_n": f.grid.n_points, "box": f.grid.half_width}


def commutator_bound(f: MVField, k: int, threshold: float = 1 - 1e-6) -> UncertaintyReport:
    """``||A f|| ||B f|| >= |<[A, B] f, f>| / 2`` for ``A = x_k`` and ``B = d/dx_k``."""
    xf = coordinate_norm(f, k)
    df = l2_norm(partial_derivative(f, k))
    # [A, B] f = x_k f' - (x_k f)'
    comm = coordinate_multiply(partial_derivative(f, k), k) - partial_derivative(coordinate_multiply(f, k), k)
    bracket = inner_product(comm, f)
    lhs = xf * df
    rhs = 0.5 * magnitude(bracket)
    norm_sq = l2_norm(f) ** 2
    return UncertaintyReport(
        "commutator_bound", k, lhs, rhs, _ratio(lhs, rhs),
        components={
            "coordinate_norm": xf,
            "derivative_norm": df,
            "bracket_scalar": bracket[0].real,
            "bracket_magnitude": magnitude(bracket),
            "half_norm_sq": 0.5 * norm_sq,
        },
        quadrature=_describe_grid(f),
        verdict=_judge(_ratio(lhs, rhs), threshold),
        threshold=threshold,
    )


def heisenberg_fourier(f: MVField, k: int, threshold: float = 1 - 1e-6) -> UncertaintyReport:
    """``||x_k f|| ||xi_k f̂|| >= ||f||^2 / 2``."""
    xf = coordinate_norm(f, k)
    xi = frequency_norm(f, k)
    norm_sq = l2_norm(f) ** 2
    lhs, rhs = xf * xi, 0.5 * norm_sq
    return UncertaintyReport(
        "heisenberg_fourier", k, lhs, rhs, _ratio(lhs, rhs),
        components={"coordinate_norm": xf, "frequency_norm": xi, "norm_sq": norm_sq},
        quadrature=_describe_grid(f),
        verdict=_judge(_ratio(lhs, rhs), threshold),
        threshold=threshold,
    )


def base_inequality_probe(f: MVField, k: int) -> UncertaintyReport:
    """Report-only: ``||x_k f|| ||xi_k f̂||`` against ``sqrt2 (||f||^2 + |2 <x_k d_k f, f>|)``."""
    xf = coordinate_norm(f, k)
    xi = frequency_norm(f, k)
    norm_sq = l2_norm(f) ** 2
    cross = inner_product(coordinate_multiply(partial_derivative(f, k), k), f) * 2.0
    lhs = xf * xi
    rhs = math.sqrt(2.0) * (norm_sq + magnitude(cross))
    return UncertaintyReport(
        "base_inequality_probe", k, lhs, rhs, _ratio(lhs, rhs),
        components={
            "coordinate_norm": xf,
            "frequency_norm": xi,
            "norm_sq": norm_sq,
            "cross_scalar": cross[0].real,
            "cross_magnitude": magnitude(cross),
        },
        quadrature=_describe_grid(f),
        verdict="report-only",
    )


# --------------------------------------------------------------------------- atlas operations


def _b_wavenumbers(atlas: CwtAtlas, k: int) -> np.ndarray:
    N, h = atlas.grid.n_points, atlas.grid.spacing
    xi = 2 * np.pi * np.fft.fftfreq(N, d=h)
    xi[N // 2] = 0.0  # unpaired Nyquist bin
    shape = [1] * atlas.dim
    shape[k - 1] = N
    return xi.reshape(shape)


def coefficient_derivative(atlas: CwtAtlas, k: int) -> CwtAtlas:
    """``d/db_k T`` per slice by a periodic spectral multiplier on the b-grid."""
    if not 1 <= k <= atlas.dim:
        raise ValueError(f"coordinate index {k} outside [1, {atlas.dim}]")
    axes = tuple(range(3, 3 + atlas.dim))
    spec = np.fft.fftn(atlas.coeffs, axes=axes)
    spec *= 1j * _b_wavenumbers(atlas, k)
    return atlas.with_coeffs(np.fft.ifftn(spec, axes=axes))


def coefficient_coordinate(atlas: CwtAtlas, k: int) -> CwtAtlas:
    """``b_k T`` by pointwise multiplication."""
    bk = atlas.grid.coordinate(k)
    return atlas.with_coeffs(atlas.coeffs * bk)


def coefficient_difference(atlas: CwtAtlas, k: int) -> CwtAtlas:
    """Fourth-order central-difference counterpart of :func:`coefficient_derivative`; oracle only."""
    h = atlas.grid.spacing
    ax = 2 + k

    def shift(m):
        return np.roll(atlas.coeffs, -m, axis=ax)

    d = (-shift(2) + 8 * shift(1) - 8 * shift(-1) + shift(-2)) / (12 * h)
    return atlas.with_coeffs(d)


def f1_f2(atlas: CwtAtlas, psi: MotherWavelet | None = None, k: int = 1,
          constant_mode: str = "nominal") -> tuple[MVField, MVField]:
    """Synthesis of ``d/db_k T`` and of ``b_k T``."""
    psi = psi or atlas.wavelet
    require_admissible(psi)
    f1 = inverse(coefficient_derivative(atlas, k), psi, constant_mode)
    f2 = inverse(coefficient_coordinate(atlas, k), psi, constant_mode)
    return f1, f2


def f1_f2_cross_check(atlas: CwtAtlas, k: int = 1) -> dict[str, Any]:
    """``<f1, f2>`` computed on the field side and on the coefficient side.

    With the calibrated constant the synthesis is (approximately) the adjoint of
    the analysis divided by the constant, and analysis after synthesis projects
    onto the range of the transform. ``d/db_k T[f] = T[d_k f]`` already lies in
    that range, so ``<f1, f2>`` reduces to the coefficient inner product of the
    two modified atlases.
    """
    d_atlas = coefficient_derivative(atlas, k)
    c_atlas = coefficient_coordinate(atlas, k)
    f1 = inverse(d_atlas, constant_mode="calibrated")
    f2 = inverse(c_atlas, constant_mode="calibrated")
    field_side = inner_product(f1, f2)
    atlas_side = h_inner_product(d_atlas, c_atlas, "calibrated")
    diff = magnitude(field_side - atlas_side)
    scale = max(magnitude(atlas_side), 1e-300)
    return {
        "field_side": field_side,
        "atlas_side": atlas_side,
        "relative_difference": diff / scale,
    }


def _b_moment(atlas: CwtAtlas, k: int) -> float:
    """``sum w_i v_j ||b_k T(a_i, ., s_j)||^2``."""
    return weighted_slice_norms(coefficient_coordinate(atlas, k))


# --------------------------------------------------------------------------- wavelet bounds


def _wavelet_lhs(f: MVField, atlas: CwtAtlas, k: int) -> tuple[float, float, float]:
    moment = _b_moment(atlas, k)
    xi = frequency_norm(f, k)
    return math.sqrt(moment) * xi, moment, xi


def wavelet_bound(f: MVField, psi: MotherWavelet, k: int, scales: ScaleQuadrature, spins,
                 threshold: float = 0.95, atlas: CwtAtlas | None = None) -> UncertaintyReport:
    """``(sum ||b_k T||^2)^(1/2) ||xi_k f̂|| >= (2 pi)^(n/2) / 2 * sqrt(A_psi) * ||f||^2``.

    ``rhs_calibrated`` in the components is the same product evaluated with the
    constant that actually normalizes the discrete transform.
    """
    require_admissible(psi)
    atlas = atlas if atlas is not None else transform_grid(f, psi, scales, spins)
    n = f.dim
    lhs, moment, xi = _wavelet_lhs(f, atlas, k)
    norm_sq = l2_norm(f) ** 2
    rhs = (2 * np.pi) ** (n / 2) / 2 * math.sqrt(psi.A_psi) * norm_sq
    rhs_cal = 0.5 * math.sqrt(psi.C_psi) * norm_sq
    ratio = _ratio(lhs, rhs)
    return UncertaintyReport(
        "wavelet_bound", k, lhs, rhs, ratio,
        components={
            "b_moment": moment,
            "frequency_norm": xi,
            "norm_sq": norm_sq,
            "A_psi": psi.A_psi,
            "C_psi": psi.C_psi,
            "rhs_calibrated": rhs_cal,
            "ratio_calibrated": _ratio(lhs, rhs_cal),
        },
        quadrature=atlas.quadrature(),
        verdict=_judge(ratio, threshold) if rhs > 0 else "report-only",
        threshold=threshold,
    )


def sharp_bound(f: MVField, psi: MotherWavelet, k: int, scales: ScaleQuadrature, spins,
                constant_mode: str = "nominal", atlas: CwtAtlas | None = None) -> UncertaintyReport:
    """Report-only: wavelet lhs against ``sqrt(2^(n+1) pi^n A_psi) (||f||^2 + 2 |<f1, f2>|)``."""
    require_admissible(psi)
    atlas = atlas if atlas is not None else transform_grid(f, psi, scales, spins)
    n = f.dim
    lhs, moment, xi = _wavelet_lhs(f, atlas, k)
    norm_sq = l2_norm(f) ** 2
    f1, f2 = f1_f2(atlas, psi, k, constant_mode)
    pair = inner_product(f1, f2)
    pair_mag = magnitude(pair)
    rhs = math.sqrt(2 ** (n + 1) * np.pi**n * psi.A_psi) * (norm_sq + 2 * pair_mag)
    rhs_wavelet = (2 * np.pi) ** (n / 2) / 2 * math.sqrt(psi.A_psi) * norm_sq
    return UncertaintyReport(
        "sharp_bound", k, lhs, rhs, _ratio(lhs, rhs),
        components={
            "b_moment": moment,
            "frequency_norm": xi,
            "norm_sq": norm_sq,
            "A_psi": psi.A_psi,
            "C_psi": psi.C_psi,
            "constant_mode": constant_mode,
            "f1_norm": l2_norm(f1),
            "f2_norm": l2_norm(f2),
            "f1f2_scalar": pair[0].real,
            "f1f2_magnitude": pair_mag,
            "rhs_wavelet": rhs_wavelet,
            "rhs_over_wavelet": _ratio(rhs, rhs_wavelet),
        },
        quadrature=atlas.quadrature(),
        verdict="report-only",
    )


def proof_identities_check(f: MVField, psi: MotherWavelet, k: int, scales: ScaleQuadrature, spins,
                           constant_mode: str = "calibrated", tolerance: float = 0.05,
                           atlas: CwtAtlas | None = None) -> UncertaintyReport:
    """Two coefficient-energy identities, each evaluated with both constants.

    frequency: ``sum w v ||xi_k F_b T||^2`` against ``const / (2 pi)^n ||xi_k f̂||^2``;
    energy: ``sum w v ||T||^2`` against ``const ||f||^2``.
    The headline ratio is the frequency identity in ``constant_mode``; the verdict
    is asserted only in calibrated mode and requires both identities within tolerance.
    """
    require_admissible(psi)
    atlas = atlas if atlas is not None else transform_grid(f, psi, scales, spins)
    n = f.dim
    freq_sum = 0.0
    wv = atlas.measure_weights()
    for i in range(len(atlas.scales)):
        for j in range(len(atlas.spins)):
            spec = cft.forward(atlas.slice(i, j))
            freq_sum += wv[i, j] * channel_norm_sq(cft.frequency_multiply(spec, k))
    energy_sum = weighted_slice_norms(atlas)
    xi_sq = frequency_norm(f, k) ** 2
    norm_sq = l2_norm(f) ** 2
    comps: dict[str, Any] = {"frequency_sum": freq_sum, "energy_sum": energy_sum,
                             "A_psi": psi.A_psi, "C_psi": psi.C_psi,
                             "A_over_C": psi.A_psi / psi.C_psi}
    for mode in ("nominal", "calibrated"):
        const = resolve_constant(psi, mode)
        comps[f"frequency_ratio_{mode}"] = _ratio(freq_sum, const / (2 * np.pi) ** n * xi_sq)
        comps[f"energy_ratio_{mode}"] = _ratio(energy_sum, const * norm_sq)
    const = resolve_constant(psi, constant_mode)
    lhs, rhs = freq_sum, const / (2 * np.pi) ** n * xi_sq
    if constant_mode == "calibrated" and rhs > 0:
        worst = max(abs(comps["frequency_ratio_calibrated"] - 1), abs(comps["energy_ratio_calibrated"] - 1))
        verdict = "holds" if worst < tolerance else "violated"
    else:
        verdict = "report-only"
    return UncertaintyReport(
        "proof_identities", k, lhs, rhs, _ratio(lhs, rhs),
        components=comps,
        quadrature={**atlas.quadrature(), "constant_mode": constant_mode},
        verdict=verdict,
        threshold=tolerance,
    )


# --------------------------------------------------------------------------- oracles


def _direct_coefficients(f: MVField, psi: MotherWavelet, a: float, s, k: int | None = None) -> np.ndarray:
    """Coefficient (or ``d/db_k`` coefficient) slice by per-point quadrature."""
    grid = f.grid
    bpts = np.stack([c.reshape(-1) for c in grid.mesh()], axis=1)
    out = np.empty((1 << grid.dim, len(bpts)), dtype=np.complex128)
    for p, b in enumerate(bpts):
        if k is None:
            out[:, p] = transform_direct(f, psi, a, b, s).coeffs
        else:
            out[:, p] = transform_direct_b_derivative(f, psi, a, b, s, k).coeffs
    return out.reshape((1 << grid.dim,) + grid.shape)


def _pointwise_inner(f: MVField, g: MVField) -> Multivector:
    """``sum_x f(x)^dagger g(x) h^n`` via pointwise products; avoids the Gram shortcut."""
    prod = product_arrays(hermitian_arrays(f.data), g.data)
    return Multivector(f.dim, prod.reshape(prod.shape[0], -1).sum(axis=1) * f.grid.cell_volume)


def admissibility_polar(psi: MotherWavelet) -> float:
    """``(2 pi)^n int psî psî^dagger / |xi|^n`` by adaptive radial quadrature.

    Valid for wavelets whose spectral power is radial; the angular integral is the
    sphere area.
    """
    from scipy.integrate import quad

    n = psi.dim

    def radial(r):
        xi = tuple(np.array([r if j == 0 else 0.0]) for j in range(n))
        spec = psi.spectrum_evaluator(xi)
        p = product_arrays(spec, hermitian_arrays(spec))[0].real[0]
        return p / r  # r^(n-1) / r^n

    area = 2 * np.pi ** (n / 2) / math.gamma(n / 2)
    val, _ = quad(radial, 0.0, np.inf, limit=200)
    return float((2 * np.pi) ** n * area * val)


def sharp_bound_oracle(f: MVField, psi: MotherWavelet, k: int, scales: ScaleQuadrature, spins,
                       constant_mode: str = "nominal") -> dict[str, float]:
    """Every component of :func:`sharp_bound` recomputed without FFTs.

    Coefficients come from per-translation quadrature, their derivative from the
    analytic wavelet gradient, spectra from the dense Fourier matrix, synthesis
    from explicit daughter sums and the admissibility constant from radial
    adaptive quadrature. Intended for small grids.
    """
    grid = f.grid
    n = grid.dim
    spin_list = list(spins)
    S, P = len(scales), len(spin_list)
    coeffs = np.empty((S, P, 1 << n) + grid.shape, dtype=np.complex128)
    dcoeffs = np.empty_like(coeffs)
    for i, a in enumerate(scales.nodes):
        for j, (s, _) in enumerate(spin_list):
            coeffs[i, j] = _direct_coefficients(f, psi, a, s)
            dcoeffs[i, j] = _direct_coefficients(f, psi, a, s, k)
    weights = np.array([w for _, w in spin_list])
    atlas = CwtAtlas(grid, psi, scales, tuple(s for s, _ in spin_list), weights, coeffs)
    bk = grid.coordinate(k)
    wv = atlas.measure_weights()
    moment = float(sum(wv[i, j] * np.sum(np.abs(coeffs[i, j] * bk) ** 2)
                       for i in range(S) for j in range(P)) * grid.cell_volume)
    spec = cft.direct_forward(f)
    xi = math.sqrt(float(np.sum(np.abs(spec.data * spec.grid.coordinate(k)) ** 2)) * spec.grid.cell_volume)
    norm_sq = float(np.sum(np.abs(f.data) ** 2) * grid.cell_volume)
    A = admissibility_polar(psi)
    f1 = inverse_direct(atlas.with_coeffs(dcoeffs), psi, constant_mode)
    f2 = inverse_direct(atlas.with_coeffs(coeffs * bk), psi, constant_mode)
    pair = _pointwise_inner(f1, f2)
    pair_mag = magnitude(pair)
    lhs = math.sqrt(moment) * xi
    rhs = math.sqrt(2 ** (n + 1) * np.pi**n * A) * (norm_sq + 2 * pair_mag)
    return {
        "lhs": lhs,
        "rhs": rhs,
        "b_moment": moment,
        "frequency_norm": xi,
        "norm_sq": norm_sq,
        "A_psi": A,
        "f1_norm": math.sqrt(float(np.sum(np.abs(f1.data) ** 2) * grid.cell_volume)),
        "f2_norm": math.sqrt(float(np.sum(np.abs(f2.data) ** 2) * grid.cell_volume)),
        "f1f2_scalar": float(pair[0].real),
        "f1f2_magnitude": pair_mag,
    }


def derivative_oracle_gap(atlas: CwtAtlas, k: int) -> float:
    """Max abs gap between spectral and central-difference coefficient derivatives."""
    return float(np.max(np.abs(coefficient_derivative(atlas, k).coeffs - coefficient_difference(atlas, k).coeffs)))


def field_derivative_gap(f: MVField, k: int) -> float:
    return float(np.max(np.abs(partial_derivative(f, k).data - central_difference(f, k).data)))


def dilation_table(k: int = 1, grid=None, scales=(0.5, 1.0, 2.0)) -> list[dict[str, float]]:
    """``base_inequality_probe`` and ``heisenberg_fourier`` ratios for ``g(x / a)``."""
    from .field import GridSpec
    from .testfuncs import dilated

    grid = grid or GridSpec(2, 128, 8.0)
    rows = []
    for a in scales:
        g = dilated(grid, a)
        rows.append({
            "a": float(a),
            "probe_ratio": base_inequality_probe(g, k).ratio,
            "heisenberg_ratio": heisenberg_fourier(g, k).ratio,
        })
    return rows
