import numpy as np
import pytest
from hypothesis import given, strategies as st

from cliffwave import cwt
from cliffwave.cwt import (
    InadmissibleWavelet,
    SpinElement,
    daughter,
    gaussian_scalar,
    h_inner_product,
    haar_samples,
    identity_spin,
    inverse,
    inverse_direct,
    log_scales,
    mexican_hat_clifford,
    require_admissible,
    rotate_vector,
    rotor_from_vectors,
    single_scale,
    spin2_from_angle,
    spin3_from_quaternion,
    transform_direct,
    transform_grid,
)
from cliffwave.field import GridMismatch, GridSpec, MVField, l2_norm, relative_l2_error
from cliffwave.multivector import Multivector, conjugation, geometric_product, magnitude
from cliffwave.testfuncs import gaussian, modulated, random_bandlimited

PI = np.pi

quaternions = st.lists(st.floats(-1, 1), min_size=4, max_size=4).filter(lambda q: np.linalg.norm(q) > 0.1)


class TestSpin:
    def test_identity_angle(self):
        s = spin2_from_angle(0.0)
        assert s.is_identity()
        assert np.allclose(rotate_vector(s, [0.3, -2.0]), [0.3, -2.0])

    def test_quarter_turn(self):
        assert np.allclose(rotate_vector(spin2_from_angle(PI / 4), [1, 0]), [0, 1], atol=1e-12)

    def test_half_turn_is_point_reflection(self):
        s = spin2_from_angle(PI / 2)
        assert magnitude(s.rotor) == pytest.approx(1.0)
        assert np.allclose(rotate_vector(s, [0.4, 1.3]), [-0.4, -1.3], atol=1e-12)

    @given(st.floats(-10, 10))
    def test_spin2_validity(self, theta):
        s = spin2_from_angle(theta)
        assert geometric_product(conjugation(s.rotor), s.rotor).allclose(Multivector.scalar(2), atol=1e-12)
        x = np.array([np.cos(theta * 3), 2.0])
        assert np.linalg.norm(rotate_vector(s, x)) == pytest.approx(np.linalg.norm(x), abs=1e-12)

    @given(quaternions, st.lists(st.floats(-3, 3), min_size=3, max_size=3))
    def test_spin3_preserves_norm(self, q, x):
        s = spin3_from_quaternion(q)
        assert np.linalg.norm(rotate_vector(s, x)) == pytest.approx(np.linalg.norm(x), abs=1e-12)
        if s.provenance:
            assert rotor_from_vectors(s.provenance).rotor.allclose(s.rotor, atol=1e-10)

    def test_provenance_reproduces_rotor(self):
        s = spin2_from_angle(0.7)
        assert rotor_from_vectors(s.provenance).rotor.allclose(s.rotor, atol=1e-12)

    def test_rejects_odd_or_non_unit(self):
        with pytest.raises(ValueError):
            SpinElement(Multivector.blade(2, 1))
        with pytest.raises(ValueError):
            SpinElement(Multivector.scalar(2, 2.0))
        with pytest.raises(ValueError):
            rotor_from_vectors([[1, 0]])


class TestHaar:
    def test_single_sample(self):
        (s, w), = haar_samples(2, 1)
        assert s.is_identity() and w == 1.0

    def test_four_angles(self):
        samples = haar_samples(2, 4)
        expected = [spin2_from_angle(j * PI / 4) for j in range(4)]
        for (s, w), e in zip(samples, expected):
            assert s.rotor.allclose(e.rotor) and w == 0.25

    @pytest.mark.parametrize("n", [2, 3])
    def test_weights_sum_to_one(self, n):
        assert sum(w for _, w in haar_samples(n, 7)) == pytest.approx(1.0)

    def test_unsupported_dimension(self):
        with pytest.raises(ValueError):
            haar_samples(4, 3)

    def test_rotation_average_converges_n2(self):
        # angular content up to cos(4 phi); the exact average of x1^4 on the unit circle is 3/8
        def err(count):
            vals = [rotate_vector(s, [1.0, 0.0])[0] ** 4 for s, _ in haar_samples(2, count)]
            return abs(np.mean(vals) - 3 / 8)

        assert err(16) < 1e-12
        assert err(16) < err(2)

    def test_rotation_average_converges_n3(self):
        def err(count):
            vals = [rotate_vector(s, [1.0, 0.0, 0.0])[0] ** 2 for s, _ in haar_samples(3, count)]
            return abs(np.mean(vals) - 1 / 3)

        assert err(512) < 0.01
        assert err(512) < err(8)


class TestWavelet:
    def test_constants(self, psi128):
        assert psi128.scalarness_residual < 1e-10
        assert psi128.A_psi == pytest.approx(4 * PI**3, rel=0.01)
        assert psi128.C_psi == pytest.approx(2 * PI**2, rel=0.01)
        assert psi128.admissible

    def test_norm(self, psi128):
        assert l2_norm(psi128.field) == pytest.approx(np.sqrt(PI), rel=1e-6)

    def test_gaussian_flagged_divergent(self, grid32):
        g = gaussian_scalar(grid32)
        assert g.divergent and not g.admissible
        with pytest.raises(InadmissibleWavelet):
            require_admissible(g)

    def test_scaling_is_quadratic(self, psi32):
        assert psi32.scaled(2.0).A_psi == pytest.approx(4 * psi32.A_psi, rel=1e-12)

    def test_registry(self, grid32):
        assert cwt.get_wavelet("mexican_hat", grid32).name == "mexican_hat"
        with pytest.raises(KeyError):
            cwt.get_wavelet("morlet", grid32)


class TestDaughter:
    def test_identity_parameters(self, psi128):
        d = daughter(psi128, 1.0, [0, 0], identity_spin(2))
        assert np.allclose(d.data, psi128.field.data)

    @pytest.mark.parametrize("theta", [0.4, 1.3, 2.9])
    def test_rotation_equivariant(self, psi128, theta):
        d = daughter(psi128, 1.0, [0, 0], spin2_from_angle(theta))
        assert np.allclose(d.data, psi128.field.data, atol=1e-12)

    def test_dilation_preserves_norm(self, psi128):
        d = daughter(psi128, 2.0, [0, 0], identity_spin(2))
        assert l2_norm(d) == pytest.approx(l2_norm(psi128.field), rel=1e-6)

    @given(st.floats(np.log(0.25), np.log(4.0)), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5),
           st.floats(0, PI))
    def test_norm_preserved_in_central_half(self, log_a, u, v, theta):
        grid = GridSpec(2, 512, 38.4)  # h = 0.15 resolves a = 1/4; the box holds a = 4 anywhere in the central half
        psi = _wide_psi(grid)
        b = [u * grid.half_width, v * grid.half_width]
        d = daughter(psi, float(np.exp(log_a)), b, spin2_from_angle(theta), grid)
        assert l2_norm(d) / np.sqrt(PI) == pytest.approx(1.0, abs=1e-6)


_WIDE = {}


def _wide_psi(grid):
    # the admissibility constants are not needed here; skip calibration
    if grid not in _WIDE:
        _WIDE[grid] = cwt.MotherWavelet("mexican_hat", grid, cwt._mexican_hat_value, cwt._mexican_hat_spectrum)
    return _WIDE[grid]


class TestDirectTransform:
    def test_self_coefficient(self, psi128):
        t = transform_direct(psi128.field, psi128, 1.0, [0, 0], identity_spin(2))
        assert t[0].real == pytest.approx(PI, abs=1e-5)
        assert magnitude(t - t[0]) < 1e-10

    def test_zero(self, psi32):
        t = transform_direct(MVField.zeros(psi32.grid), psi32, 1.0, [1, 2], identity_spin(2))
        assert magnitude(t) == 0

    def test_disjoint_support(self, psi128):
        narrow = daughter(psi128, 0.3, [-6, -6], identity_spin(2))
        t = transform_direct(narrow, psi128, 0.3, [6, 6], identity_spin(2))
        assert magnitude(t) < 1e-8


class TestFastTransform:
    def test_matches_direct(self, psi32):
        rng = np.random.default_rng(11)
        f = random_bandlimited(psi32.grid, 4)
        scales = log_scales(0.5, 2.0, 5, 2)
        spins = haar_samples(2, 3)
        atlas = transform_grid(f, psi32, scales, spins)
        N = psi32.grid.n_points
        for _ in range(20):
            i, j = rng.integers(len(scales)), rng.integers(len(spins))
            p = tuple(rng.integers(N // 4, 3 * N // 4, size=2))
            b = [psi32.grid.axis[p[0]], psi32.grid.axis[p[1]]]
            direct = transform_direct(f, psi32, scales.nodes[i], b, spins[j][0])
            fast = Multivector(2, atlas.coeffs[(i, j, slice(None)) + p])
            assert magnitude(fast - direct) <= 1e-8 * magnitude(direct)

    def test_zero_field(self, psi32):
        atlas = transform_grid(MVField.zeros(psi32.grid), psi32, log_scales(0.5, 2, 3, 2), haar_samples(2, 2))
        assert not np.any(atlas.coeffs)

    def test_single_slice_peak(self, psi128):
        atlas = transform_grid(psi128.field, psi128, single_scale(1.0), [(identity_spin(2), 1.0)])
        mag = np.sqrt(np.sum(np.abs(atlas.coeffs[0, 0]) ** 2, axis=0))
        peak = np.unravel_index(np.argmax(mag), mag.shape)
        assert peak == (64, 64)
        assert mag[peak] == pytest.approx(PI, abs=1e-5)

    def test_grid_mismatch(self, psi32, grid128):
        with pytest.raises(GridMismatch):
            transform_grid(gaussian(grid128), psi32, single_scale(1.0), haar_samples(2, 1))


class TestInverse:
    def test_zero_atlas(self, psi32):
        atlas = transform_grid(MVField.zeros(psi32.grid), psi32, log_scales(0.5, 2, 3, 2), haar_samples(2, 2))
        assert not np.any(inverse(atlas).data)

    def test_modes_differ_by_constant_ratio(self, psi32):
        atlas = transform_grid(gaussian(psi32.grid), psi32, log_scales(0.5, 2, 3, 2), haar_samples(2, 2))
        nominal = inverse(atlas, constant_mode="nominal").data
        cal = inverse(atlas, constant_mode="calibrated").data
        assert np.allclose(nominal * psi32.A_psi / psi32.C_psi, cal, atol=1e-14)

    def test_matches_explicit_daughter_sum(self):
        grid = GridSpec(2, 16, 6.0)
        psi = mexican_hat_clifford(grid)
        atlas = transform_grid(random_bandlimited(grid, 2), psi, log_scales(0.7, 1.4, 2, 2), haar_samples(2, 2))
        # box too small to calibrate; compare unnormalised sums
        fast, slow = inverse(atlas, constant_mode="unit"), inverse_direct(atlas, constant_mode="unit")
        assert relative_l2_error(fast, slow) < 1e-12

    def test_reconstruction_moderate_range(self):
        # a in [1/4, 4] with 16 scales and 8 spins
        grid = GridSpec(2, 128, 16.0)
        psi = mexican_hat_clifford(grid)
        f = modulated(grid, sigma=4.0, omega=0.75)
        atlas = transform_grid(f, psi, log_scales(0.25, 4.0, 16, 2), haar_samples(2, 8))
        err = relative_l2_error(inverse(atlas, psi, "calibrated"), f)
        assert err < 0.02


@pytest.fixture(scope="module")
def setup():
    grid = GridSpec(2, 128, 16.0)
    psi = mexican_hat_clifford(grid)
    f = modulated(grid, sigma=4.0, omega=0.75)
    return grid, psi, f


class TestHInnerProduct:
    def test_zero(self, psi32):
        q = (log_scales(0.5, 2, 3, 2), haar_samples(2, 2))
        a = transform_grid(gaussian(psi32.grid), psi32, *q)
        z = transform_grid(MVField.zeros(psi32.grid), psi32, *q)
        assert magnitude(h_inner_product(a, z)) == 0

    def test_quadrature_mismatch(self, psi32):
        a = transform_grid(gaussian(psi32.grid), psi32, log_scales(0.5, 2, 3, 2), haar_samples(2, 2))
        b = transform_grid(gaussian(psi32.grid), psi32, log_scales(0.5, 2, 4, 2), haar_samples(2, 2))
        with pytest.raises(GridMismatch):
            h_inner_product(a, b)

    def test_isometry_and_convergence(self, setup):
        # spin count stays at one: the wavelet is rotation equivariant, so spins do not change the sum
        grid, psi, f = setup
        norm_sq = l2_norm(f) ** 2
        errs = []
        for lo, hi, count in [(0.5, 2.0, 8), (0.25, 4.0, 16), (0.125, 8.0, 24)]:
            atlas = transform_grid(f, psi, log_scales(lo, hi, count, 2), haar_samples(2, 1))
            errs.append(abs(h_inner_product(atlas, atlas)[0].real / norm_sq - 1))
        assert errs[-1] < 0.05
        assert errs[0] > errs[1] > errs[2]

    def test_spin_independence(self, psi32):
        f = random_bandlimited(psi32.grid, 9)
        q = log_scales(0.5, 2, 3, 2)
        one = transform_grid(f, psi32, q, haar_samples(2, 1))
        four = transform_grid(f, psi32, q, haar_samples(2, 4))
        assert h_inner_product(one, one)[0].real == pytest.approx(h_inner_product(four, four)[0].real, rel=1e-10)
