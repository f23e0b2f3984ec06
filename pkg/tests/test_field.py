import numpy as np
import pytest
from hypothesis import given, strategies as st

from cliffwave.field import (
    GridMismatch,
    GridSpec,
    MVField,
    central_difference,
    cauchy_schwarz_check,
    channel_norm_sq,
    coordinate_multiply,
    export_table,
    inner_product,
    integral,
    l2_norm,
    load_table,
    partial_derivative,
    relative_l2_error,
    sample,
)
from cliffwave.multivector import Multivector, hermitian_conjugation, magnitude
from cliffwave.testfuncs import gaussian, random_bandlimited

PI = np.pi


def test_grid_rejects_odd_points():
    with pytest.raises(ValueError):
        GridSpec(2, 33, 8.0)


def test_grid_geometry(grid128):
    assert grid128.spacing == pytest.approx(0.125)
    assert grid128.axis[0] == -8.0
    assert grid128.axis[-1] == pytest.approx(8.0 - 0.125)


class TestSampling:
    def test_zero(self, grid32):
        f = sample(lambda c: np.zeros((4,) + c[0].shape), grid32)
        assert not np.any(f.data)

    def test_gaussian_peak(self, grid128):
        g = gaussian(grid128)
        assert g.data[0].real.max() == pytest.approx(1.0)
        assert not np.any(g.data[1:])

    def test_vector_valued_wavelet(self, psi128):
        data = psi128.field.data
        assert not np.any(data[0]) and not np.any(data[3])
        assert np.any(data[1]) and np.any(data[2])

    def test_read_only(self, grid32):
        with pytest.raises(ValueError):
            gaussian(grid32).data[0, 0, 0] = 1.0

    def test_grid_mismatch(self, grid32, grid128):
        with pytest.raises(GridMismatch):
            gaussian(grid32) + gaussian(grid128)


class TestQuadrature:
    def test_gaussian_integral(self, grid128):
        assert integral(gaussian(grid128))[0].real == pytest.approx(2 * PI, rel=1e-6)

    def test_odd_integral_vanishes(self, grid128):
        assert magnitude(integral(coordinate_multiply(gaussian(grid128), 1))) < 1e-12

    def test_constant(self, grid32):
        one = MVField.from_scalar(grid32, np.ones(grid32.shape))
        assert integral(one)[0].real == pytest.approx(16.0**2)

    def test_error_decreases_with_resolution(self):
        errs = []
        for N in (8, 16):
            errs.append(abs(integral(gaussian(GridSpec(2, N, 8.0)))[0].real - 2 * PI))
        assert errs[1] < errs[0] / 10


class TestInnerProduct:
    def test_gaussian(self, grid128):
        g = gaussian(grid128)
        ip = inner_product(g, g)
        assert ip[0].real == pytest.approx(PI, rel=1e-6)
        assert magnitude(ip - ip[0]) < 1e-12

    def test_cross_blades(self, grid128):
        ge1, ge2 = gaussian(grid128, mask=1), gaussian(grid128, mask=2)
        expected = Multivector.blade(2, 3, -PI)
        assert inner_product(ge1, ge2).allclose(expected, atol=1e-6)

    def test_zero(self, grid32):
        assert magnitude(inner_product(gaussian(grid32), MVField.zeros(grid32))) == 0

    @given(st.integers(0, 2**16), st.integers(0, 2**16))
    def test_conjugate_symmetry(self, s1, s2):
        grid = GridSpec(2, 32, 8.0)
        f, g = random_bandlimited(grid, s1, modes=2), random_bandlimited(grid, s2, modes=2)
        lhs = inner_product(g, f)
        rhs = hermitian_conjugation(inner_product(f, g))
        assert magnitude(lhs - rhs) <= 1e-12 * max(1.0, magnitude(lhs))


class TestNorms:
    def test_gaussian(self, grid128):
        assert l2_norm(gaussian(grid128)) == pytest.approx(np.sqrt(PI), rel=1e-6)

    def test_wavelet(self, psi128):
        assert l2_norm(psi128.field) == pytest.approx(np.sqrt(PI), rel=1e-6)

    def test_zero(self, grid32):
        assert l2_norm(MVField.zeros(grid32)) == 0.0

    @given(st.integers(0, 2**16))
    def test_scalar_part_equals_channel_sum(self, seed):
        f = random_bandlimited(GridSpec(2, 32, 8.0), seed, modes=3)
        assert l2_norm(f) ** 2 == pytest.approx(channel_norm_sq(f), rel=1e-12)


class TestDerivatives:
    def test_gaussian_derivative(self, grid128):
        g = gaussian(grid128)
        exact = MVField(grid128, -g.data * grid128.coordinate(1)[None])
        assert relative_l2_error(partial_derivative(g, 1), exact) < 1e-6

    def test_zero(self, grid32):
        assert not np.any(coordinate_multiply(MVField.zeros(grid32), 2).data)

    def test_moment(self, grid128):
        g = gaussian(grid128)
        ip = inner_product(coordinate_multiply(partial_derivative(g, 1), 1), g)
        assert ip[0].real == pytest.approx(-PI / 2, abs=1e-5)

    def test_central_difference_oracle(self, grid128):
        g = gaussian(grid128)
        spectral = partial_derivative(g, 2)
        assert relative_l2_error(central_difference(g, 2), spectral) < 1e-3
        second = relative_l2_error(central_difference(g, 2, order=2), spectral)
        coarse = relative_l2_error(central_difference(gaussian(GridSpec(2, 64, 8.0)), 2, order=2),
                                   partial_derivative(gaussian(GridSpec(2, 64, 8.0)), 2))
        assert coarse / second == pytest.approx(4.0, rel=0.05)  # O(h^2)

    def test_bad_coordinate(self, grid32):
        with pytest.raises(ValueError):
            coordinate_multiply(gaussian(grid32), 3)


class TestCauchySchwarz:
    def test_equality(self, grid32):
        g = gaussian(grid32)
        assert cauchy_schwarz_check(g, g) == pytest.approx(1.0, abs=1e-12)

    def test_disjoint(self, grid32):
        a = gaussian(grid32, width=0.3, center=(-5, 0))
        b = gaussian(grid32, width=0.3, center=(5, 0))
        assert cauchy_schwarz_check(a, b) < 1e-12

    def test_zero_norm(self, grid32):
        assert cauchy_schwarz_check(gaussian(grid32), MVField.zeros(grid32)) == 0.0

    @given(st.integers(0, 2**16), st.integers(0, 2**16), st.sampled_from(["scalar", "vector"]))
    def test_random_pairs_bounded(self, s1, s2, kind):
        grid = GridSpec(2, 32, 8.0)
        opts = {"grades": (0,)} if kind == "scalar" else {"grades": (1,), "real": True}
        f = random_bandlimited(grid, s1, modes=2, **opts)
        g = random_bandlimited(grid, s2, modes=2, **opts)
        assert 0.0 <= cauchy_schwarz_check(f, g) <= 1 + 1e-10

    def test_general_multivector_fields_can_exceed_one(self, grid32):
        # non-scalar parts of <f, f> inflate the coefficient magnitude
        f = random_bandlimited(grid32, 1, modes=2)
        assert cauchy_schwarz_check(f, f) > 1.0


def test_table_round_trip(tmp_path, grid32):
    f = random_bandlimited(grid32, 3)
    path = export_table(f, tmp_path / "f.txt")
    assert np.array_equal(load_table(path, grid32).data, f.data)
