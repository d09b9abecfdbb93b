import math

import numpy as np
import pytest

from polarbounds import matrixcore
from polarbounds.bounds import (
    BoundKind,
    SpectralSeparation,
    midpoint_bounds,
    norm_sum_bound,
    separation_bound,
    spectral_separation,
    symmetric_bound_params,
    symmetric_bounds,
    symmetric_params_from_spectra,
    weighted_bound_params,
    weighted_bounds,
    weighted_params_from_spectra,
)
from polarbounds.exceptions import DomainError, SpectralOverlapError
from polarbounds.sylvester import solve_structured, structured_problem
from conftest import complex_gaussian, random_psd


class TestSpectralSeparation:
    def test_symmetric_pair(self):
        sep = spectral_separation([1.0], [-1.0])
        assert sep.value == pytest.approx(math.sqrt(2.0))

    def test_single_pair(self):
        sep = spectral_separation([2.0], [1.0])
        assert sep.value == pytest.approx(1.0 / math.sqrt(5.0))

    def test_reciprocal_spectrum_coincidence(self):
        # For gamma2 = 1/gamma1 both pairs against omega = 1 give the same
        # value (1 + g) / sqrt(1 + g^2); this is the worked-example setup.
        g = (5.0 - math.sqrt(21.0)) / 2.0
        sep = spectral_separation([1.0, 1.0], [-g, -1.0 / g])
        assert sep.value == pytest.approx(1.1832159566199232, abs=1e-15)

    def test_min_over_all_pairs(self):
        sep = spectral_separation([1.0, 10.0], [2.0, -3.0])
        expected = min(
            abs(w - g) / math.sqrt(w * w + g * g)
            for w in (1.0, 10.0)
            for g in (2.0, -3.0)
        )
        assert sep.value == pytest.approx(expected)

    def test_overlap_rejected(self):
        with pytest.raises(SpectralOverlapError):
            spectral_separation([1.0, 2.0], [2.0, 5.0])

    def test_common_zero_rejected(self):
        with pytest.raises(SpectralOverlapError):
            spectral_separation([0.0, 1.0], [0.0, -1.0])

    def test_near_overlap_tolerance(self):
        with pytest.raises(SpectralOverlapError):
            spectral_separation([1.0], [1.0 + 1e-14])
        assert spectral_separation([1.0], [1.0 + 1e-9]).value > 0.0

    def test_rejects_empty_spectrum(self):
        with pytest.raises(DomainError):
            spectral_separation([], [1.0])


class TestCrudeBounds:
    def test_separation_bound_identity_case(self):
        assert separation_bound(
            np.eye(2), np.zeros((2, 2)), SpectralSeparation(math.sqrt(2.0))
        ) == pytest.approx(1.0)

    def test_separation_bound_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            separation_bound(np.eye(2), np.eye(2), SpectralSeparation(0.0))

    def test_norm_sum(self):
        C = np.array([[3.0, 4.0], [0.0, 0.0]])
        assert norm_sum_bound(C, np.zeros((2, 2))) == pytest.approx(5.0)
        assert norm_sum_bound(np.eye(2), np.eye(2)) == pytest.approx(2.0)


class TestMidpointBounds:
    def test_equal_data_collapses(self):
        rng = np.random.default_rng(401)
        C = complex_gaussian(rng, (3, 3))
        pair = midpoint_bounds(C, C)
        assert pair.kind is BoundKind.MIDPOINT
        assert pair.lower == pytest.approx(pair.upper)
        assert pair.upper == pytest.approx(matrixcore.frobenius_norm(C))

    def test_opposite_data_gives_negative_lower(self):
        C = np.eye(2)
        pair = midpoint_bounds(C, -C)
        assert pair.lower == pytest.approx(-math.sqrt(2.0))
        assert pair.upper == pytest.approx(math.sqrt(2.0))


class TestWeightedBounds:
    def test_scalar_coefficients(self):
        p = weighted_params_from_spectra([2.0, 2.0], [3.0, 3.0])
        assert p.lambda1 == pytest.approx(1.5)
        assert p.lambda2 == pytest.approx(2.0 / 3.0)
        assert p.a == pytest.approx(5.0 / 3.0)
        assert p.b == pytest.approx(5.0 / 2.0)
        assert p.c == 0.0

    def test_exact_for_scalar_coefficient_matrices(self):
        # With A = 2 I and B = 3 I the solution is (2 C + 3 D) / 5 and the
        # enclosure collapses onto its norm.
        rng = np.random.default_rng(402)
        C = complex_gaussian(rng, (3, 3))
        D = complex_gaussian(rng, (3, 3))
        sol = solve_structured(
            structured_problem(2.0 * np.eye(3), 3.0 * np.eye(3), C, D)
        )
        x_norm = matrixcore.frobenius_norm(sol.X)
        pair = weighted_bounds(C, D, weighted_params_from_spectra([2.0], [3.0]))
        assert pair.lower == pytest.approx(x_norm, rel=1e-12)
        assert pair.upper == pytest.approx(x_norm, rel=1e-12)

    def test_gap_weight_below_blend_weights(self):
        rng = np.random.default_rng(403)
        for _ in range(50):
            wa = rng.uniform(0.1, 10.0, size=4)
            wb = rng.uniform(0.1, 10.0, size=3)
            p = weighted_params_from_spectra(wa, wb)
            assert p.c < min(p.a, p.b)

    def test_zero_matrix_rejected(self):
        with pytest.raises(DomainError):
            weighted_params_from_spectra([0.0, 0.0], [1.0])

    def test_matrix_entry_point_validates(self):
        with pytest.raises(DomainError):
            weighted_bound_params(np.diag([1.0, -1.0]), np.eye(2))

    def test_matrix_and_spectra_entry_points_agree(self):
        rng = np.random.default_rng(404)
        A = random_psd(rng, 3, 3)
        B = random_psd(rng, 4, 4)
        p1 = weighted_bound_params(A, B)
        p2 = weighted_params_from_spectra(
            np.linalg.eigvalsh(A), np.linalg.eigvalsh(B)
        )
        assert p1.a == pytest.approx(p2.a, rel=1e-12)
        assert p1.b == pytest.approx(p2.b, rel=1e-12)
        assert p1.c == pytest.approx(p2.c, rel=1e-10)


class TestSymmetricBounds:
    def test_identity_coefficients_collapse(self):
        p = symmetric_params_from_spectra([1.0, 1.0], [1.0])
        assert p.lam == 1.0
        assert p.mu == 0.0
        rng = np.random.default_rng(405)
        C = complex_gaussian(rng, (2, 2))
        D = complex_gaussian(rng, (2, 2))
        pair = symmetric_bounds(C, D, p)
        mid = matrixcore.frobenius_norm((C + D) / 2.0)
        assert pair.lower == pytest.approx(mid)
        assert pair.upper == pytest.approx(mid)

    def test_worked_example_parameters(self):
        g = (5.0 - math.sqrt(21.0)) / 2.0
        p = symmetric_params_from_spectra([1.0, 1.0], [g, 1.0 / g])
        assert p.lam == pytest.approx(4.7912878474779195, abs=1e-12)
        assert p.mu == pytest.approx(0.8091067115702212, abs=1e-12)

    def test_weight_strictly_below_one(self):
        rng = np.random.default_rng(406)
        for _ in range(50):
            p = symmetric_params_from_spectra(
                rng.uniform(0.01, 100.0, size=3), rng.uniform(0.01, 100.0, size=3)
            )
            assert p.lam >= 1.0
            assert 0.0 <= p.mu < 1.0

    def test_matrix_entry_point(self):
        p = symmetric_bound_params(np.eye(2), 4.0 * np.eye(2))
        assert p.lam == pytest.approx(4.0)


class TestEnclosureProperties:
    @staticmethod
    def _instance(rng, n):
        A = random_psd(rng, n, n) + 0.05 * np.eye(n)
        B = random_psd(rng, n, n) + 0.05 * np.eye(n)
        C = complex_gaussian(rng, (n, n))
        D = complex_gaussian(rng, (n, n))
        return A, B, C, D

    def test_sandwich_on_positive_definite_instances(self):
        rng = np.random.default_rng(407)
        for _ in range(50):
            n = int(rng.integers(2, 6))
            A, B, C, D = self._instance(rng, n)
            x = matrixcore.frobenius_norm(
                solve_structured(structured_problem(A, B, C, D)).X
            )
            slack = 1e-10 * (1.0 + x)
            wa, wb = np.linalg.eigvalsh(A), np.linalg.eigvalsh(B)
            for pair in (
                midpoint_bounds(C, D),
                weighted_bounds(C, D, weighted_params_from_spectra(wa, wb)),
                symmetric_bounds(C, D, symmetric_params_from_spectra(wa, wb)),
            ):
                assert pair.lower - slack <= x <= pair.upper + slack

    def test_upper_bound_orderings(self):
        rng = np.random.default_rng(408)
        for _ in range(50):
            n = int(rng.integers(2, 6))
            A, B, C, D = self._instance(rng, n)
            wa, wb = np.linalg.eigvalsh(A), np.linalg.eigvalsh(B)
            mid = midpoint_bounds(C, D)
            wgt = weighted_bounds(C, D, weighted_params_from_spectra(wa, wb))
            sym = symmetric_bounds(C, D, symmetric_params_from_spectra(wa, wb))
            assert mid.upper <= norm_sum_bound(C, D) + 1e-12
            assert wgt.upper <= mid.upper + 1e-12
            assert sym.upper <= mid.upper + 1e-12

    def test_equal_data_exact_for_all_kinds(self):
        rng = np.random.default_rng(409)
        A, B, C, _ = self._instance(rng, 3)
        wa, wb = np.linalg.eigvalsh(A), np.linalg.eigvalsh(B)
        x = matrixcore.frobenius_norm(C)
        for pair in (
            midpoint_bounds(C, C),
            weighted_bounds(C, C, weighted_params_from_spectra(wa, wb)),
            symmetric_bounds(C, C, symmetric_params_from_spectra(wa, wb)),
        ):
            assert pair.lower == pytest.approx(x, rel=1e-12)
            assert pair.upper == pytest.approx(x, rel=1e-12)
