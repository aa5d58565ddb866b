"""Characteristic polynomial, classification, spectrum extraction."""

import numpy as np
import pytest

from descriptor_solve import (
    CharPoly,
    NonSquareError,
    Pencil,
    PencilKind,
    char_poly,
    classify,
    finite_spectrum,
)
from descriptor_solve.oracle import det_poly_cofactor

from conftest import CHARPOLY_5, F5, G5


class TestCharPoly:
    def test_5x5_example(self, pencil5):
        # det(sF - G) = -s (5s - 2)^2 / 25; the source text prints
        # s (s - 1/5)(s - 2/5), which its own matrices do not satisfy.
        cp = char_poly(pencil5)
        assert cp.degree == 3
        assert np.allclose(cp.coeffs, CHARPOLY_5, atol=1e-12)

    def test_identity_pencil(self):
        for m in (1, 3, 6):
            cp = char_poly(Pencil(np.eye(m), np.zeros((m, m))))
            expected = np.zeros(m + 1)
            expected[m] = 1.0
            assert cp.degree == m
            assert np.allclose(cp.coeffs, expected, atol=1e-10)

    def test_2x2_example(self, pencil2):
        cp = char_poly(pencil2)
        assert cp.degree == 1
        assert np.allclose(cp.coeffs, [-4 / 25, -1.0, 0.0], atol=1e-13)

    def test_nonsquare_rejected(self):
        with pytest.raises(NonSquareError):
            char_poly(Pencil(np.ones((3, 2)), np.ones((3, 2))))

    def test_fresh_node_agreement(self):
        rng = np.random.default_rng(2)
        for _ in range(25):
            m = int(rng.integers(1, 9))
            pencil = Pencil(rng.standard_normal((m, m)), rng.standard_normal((m, m)))
            cp = char_poly(pencil)
            s0 = complex(rng.standard_normal(), rng.standard_normal())
            direct = np.linalg.det(s0 * pencil.F - pencil.G)
            assert abs(cp(s0) - direct) <= 1e-8 * max(1.0, abs(direct))

    def test_degree_bounded_by_rank(self):
        # deg det(sF - G) <= rank F, random square pencils.
        rng = np.random.default_rng(31)
        for _ in range(100):
            m = int(rng.integers(1, 9))
            r = int(rng.integers(0, m + 1))
            F = (
                rng.standard_normal((m, r)) @ rng.standard_normal((r, m))
                if r
                else np.zeros((m, m))
            )
            G = rng.standard_normal((m, m))
            cp = char_poly(Pencil(F, G))
            assert cp.degree <= np.linalg.matrix_rank(F)

    def test_agrees_with_cofactor_oracle(self):
        rng = np.random.default_rng(41)
        for _ in range(50):
            m = int(rng.integers(1, 7))
            F = rng.standard_normal((m, m))
            G = rng.standard_normal((m, m))
            cp = char_poly(Pencil(F, G))
            exact = det_poly_cofactor(F, G)
            scale = np.max(np.abs(exact))
            assert np.max(np.abs(cp.coeffs - exact)) <= 1e-8 * scale


class TestClassify:
    def test_5x5_regular(self, pencil5):
        result = classify(pencil5)
        assert result.kind is PencilKind.REGULAR
        assert result.spectrum.n_finite == 3
        assert result.spectrum.n_infinite == 2

    def test_zero_pencil(self):
        result = classify(Pencil(np.zeros((2, 2)), np.zeros((2, 2))))
        assert result.kind is PencilKind.SINGULAR_ZERO_DETERMINANT
        assert result.spectrum is None

    def test_structural_zero_determinant(self):
        # Shared zero row forces det(sF - G) to vanish identically.
        F = np.array([[1.0, 2.0], [0.0, 0.0]])
        G = np.array([[3.0, 4.0], [0.0, 0.0]])
        assert classify(Pencil(F, G)).kind is PencilKind.SINGULAR_ZERO_DETERMINANT

    def test_nonsquare(self):
        result = classify(Pencil(np.ones((3, 2)), np.zeros((3, 2))))
        assert result.kind is PencilKind.SINGULAR_NONSQUARE

    def test_scaling_invariance(self, pencil5):
        # The verdict (and the root set) is invariant under scaling both
        # matrices; coefficients scale by alpha^m.
        base = classify(pencil5)
        m = pencil5.cols
        for alpha in (2.0, -3.0, 0.5):
            scaled = classify(Pencil(alpha * F5, alpha * G5))
            assert scaled.kind is base.kind
            assert scaled.spectrum.n_finite == base.spectrum.n_finite
            for (v1, m1), (v2, m2) in zip(
                base.spectrum.eigenvalues, scaled.spectrum.eigenvalues
            ):
                assert m1 == m2
                assert abs(v1 - v2) < 1e-9
            expected = alpha**m * base.char_poly.coeffs
            assert np.max(np.abs(scaled.char_poly.coeffs - expected)) <= 1e-9 * np.max(
                np.abs(expected)
            )
        for alpha in (2.0, -3.0, 0.5):
            zero = classify(Pencil(alpha * np.zeros((2, 2)), alpha * np.zeros((2, 2))))
            assert zero.kind is PencilKind.SINGULAR_ZERO_DETERMINANT


class TestFiniteSpectrum:
    def test_printed_cubic(self):
        # The cubic the source text prints for the 5x5 example, taken as a
        # polynomial in its own right over an m = 5 pencil.
        coeffs = np.zeros(6, dtype=complex)
        coeffs[[1, 2, 3]] = [2 / 25, -3 / 5, 1.0]
        spectrum = finite_spectrum(CharPoly(coeffs=coeffs, degree=3, node_scale=1.0))
        assert [(round(v.real, 9), mult) for v, mult in spectrum.eigenvalues] == [
            (0.0, 1),
            (0.2, 1),
            (0.4, 1),
        ]
        assert spectrum.n_finite == 3
        assert spectrum.n_infinite == 2

    def test_double_root(self):
        coeffs = np.array([0.0, 0.0, 1.0, 0.0], dtype=complex)
        spectrum = finite_spectrum(CharPoly(coeffs=coeffs, degree=2, node_scale=1.0))
        assert spectrum.eigenvalues == ((0j, 2),)
        assert (spectrum.n_finite, spectrum.n_infinite) == (2, 1)

    def test_linear(self):
        coeffs = np.array([-4 / 25, -1.0, 0.0], dtype=complex)
        spectrum = finite_spectrum(CharPoly(coeffs=coeffs, degree=1, node_scale=1.0))
        assert abs(spectrum.eigenvalues[0][0] + 0.16) < 1e-12
        assert (spectrum.n_finite, spectrum.n_infinite) == (1, 1)

    def test_5x5_clusters_double_eigenvalue(self, pencil5):
        spectrum = classify(pencil5).spectrum
        assert [mult for _, mult in spectrum.eigenvalues] == [1, 2]
        assert abs(spectrum.eigenvalues[0][0]) < 1e-9
        assert abs(spectrum.eigenvalues[1][0] - 0.4) < 1e-9

    def test_multiplicities_sum_to_degree(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            m = int(rng.integers(1, 9))
            pencil = Pencil(rng.standard_normal((m, m)), rng.standard_normal((m, m)))
            result = classify(pencil)
            if result.is_regular:
                total = sum(mult for _, mult in result.spectrum.eigenvalues)
                assert total == result.char_poly.degree
