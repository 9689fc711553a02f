import numpy as np
import pytest

from pba import CodingParams, NotNormalizedError, SparseCode, batch_encode, omp_encode

from frames import pursuit_instance
from oracles import best_support_residual


def random_dictionary(rng, n, k):
    d = rng.standard_normal((n, k))
    return d / np.linalg.norm(d, axis=0)


class TestOmpEncode:
    def test_recovers_single_atom(self):
        rng = np.random.default_rng(0)
        d = random_dictionary(rng, 8, 12)
        support, coef = omp_encode(d, d[:, 5], CodingParams(max_atoms=3))
        np.testing.assert_array_equal(support, [5])
        assert coef[0] == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.norm(d[:, 5] - d[:, support] @ coef) < 1e-12

    def test_zero_input_empty_support(self):
        rng = np.random.default_rng(1)
        d = random_dictionary(rng, 6, 9)
        support, coef = omp_encode(d, np.zeros(6), CodingParams(max_atoms=4))
        assert support.size == 0 and coef.size == 0

    def test_first_pick_matches_brute_force(self):
        rng = np.random.default_rng(2)
        d = random_dictionary(rng, 4, 6)
        x = rng.standard_normal(4)
        support, _ = omp_encode(d, x, CodingParams(max_atoms=1))
        expected = int(np.argmax(np.abs(d.T @ x)))
        assert list(support) == [expected]

    def test_rejects_unnormalized(self):
        rng = np.random.default_rng(3)
        d = random_dictionary(rng, 5, 7) * 1.01
        with pytest.raises(NotNormalizedError):
            omp_encode(d, np.ones(5), CodingParams(max_atoms=2))

    def test_max_atoms_exceeding_k_rejected(self):
        rng = np.random.default_rng(4)
        d = random_dictionary(rng, 5, 3)
        with pytest.raises(ValueError):
            omp_encode(d, np.ones(5), CodingParams(max_atoms=4))

    def test_residual_orthogonal_to_support(self):
        rng = np.random.default_rng(5)
        d = random_dictionary(rng, 10, 20)
        x = rng.standard_normal(10)
        support, coef = omp_encode(d, x, CodingParams(max_atoms=5))
        resid = x - d[:, support] @ coef
        assert np.max(np.abs(d[:, support].T @ resid)) <= 1e-8

    def test_monotone_residual(self):
        rng = np.random.default_rng(6)
        d = random_dictionary(rng, 12, 24)
        x = rng.standard_normal(12)
        previous = np.linalg.norm(x)
        for t in range(1, 7):
            support, coef = omp_encode(d, x, CodingParams(max_atoms=t))
            resid = float(np.linalg.norm(x - d[:, support] @ coef))
            assert resid < previous + 1e-12
            previous = resid

    def test_exact_recovery_on_orthogonal_atoms(self):
        d = np.eye(6)
        rng = np.random.default_rng(7)
        coef_true = np.zeros(6)
        coef_true[[1, 3, 4]] = rng.standard_normal(3) + 2.0
        x = d @ coef_true
        support, coef = omp_encode(
            d, x, CodingParams(max_atoms=3), gram=np.eye(6)
        )
        assert np.linalg.norm(x - d[:, support] @ coef) <= 1e-10
        np.testing.assert_array_equal(support, [1, 3, 4])

    def test_error_tol_stops_early(self):
        rng = np.random.default_rng(8)
        d = random_dictionary(rng, 8, 16)
        x = rng.standard_normal(8) * 10
        loose = omp_encode(d, x, CodingParams(max_atoms=8, error_tol=np.dot(x, x)))
        assert loose[0].size == 0
        tight = omp_encode(d, x, CodingParams(max_atoms=8, error_tol=1e-20))
        assert tight[0].size == 8

    def test_deterministic(self):
        rng = np.random.default_rng(9)
        d = random_dictionary(rng, 8, 16)
        x = rng.standard_normal(8)
        a = omp_encode(d, x, CodingParams(max_atoms=4))
        b = omp_encode(d, x, CodingParams(max_atoms=4))
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])

    def test_support_sorted(self):
        rng = np.random.default_rng(10)
        d = random_dictionary(rng, 10, 30)
        x = rng.standard_normal(10)
        support, _ = omp_encode(d, x, CodingParams(max_atoms=6))
        assert np.all(np.diff(support) > 0)


class TestBatchEncode:
    def test_identity_pattern_when_samples_are_atoms(self):
        rng = np.random.default_rng(11)
        d = random_dictionary(rng, 8, 12)
        code = batch_encode(d, d, CodingParams(max_atoms=2, error_tol=1e-20))
        for k in range(12):
            support, coef = code.sample(k)
            np.testing.assert_array_equal(support, [k])
            assert coef[0] == pytest.approx(1.0, abs=1e-12)

    def test_empty_batch(self):
        rng = np.random.default_rng(12)
        d = random_dictionary(rng, 6, 9)
        code = batch_encode(d, np.empty((6, 0)), CodingParams(max_atoms=2))
        assert code.n_samples == 0
        assert code.to_dense().shape == (9, 0)

    def test_matches_single_calls_bitwise(self):
        rng = np.random.default_rng(13)
        d = random_dictionary(rng, 8, 20)
        x = rng.standard_normal((8, 15))
        params = CodingParams(max_atoms=4, error_tol=0.5)
        code = batch_encode(d, x, params)
        dense = code.to_dense()
        for m in range(15):
            support, coef = omp_encode(d, x[:, m], params)
            np.testing.assert_array_equal(code.supports[m], support)
            np.testing.assert_array_equal(code.coefficients[m], coef)
            resid_batch = np.linalg.norm(x[:, m] - d @ dense[:, m])
            resid_single = np.linalg.norm(x[:, m] - d[:, support] @ coef)
            assert resid_batch <= resid_single + 1e-12

    def test_support_capped(self):
        rng = np.random.default_rng(14)
        d = random_dictionary(rng, 8, 20)
        x = rng.standard_normal((8, 10))
        code = batch_encode(d, x, CodingParams(max_atoms=3))
        assert all(s.size <= 3 for s in code.supports)


class TestSparseCode:
    def test_dense_round_trip(self):
        rng = np.random.default_rng(15)
        dense = rng.standard_normal((6, 5))
        dense[np.abs(dense) < 1.0] = 0.0
        code = SparseCode.from_dense(dense)
        np.testing.assert_array_equal(code.to_dense(), dense)

    def test_params_validation(self):
        with pytest.raises(ValueError):
            CodingParams(max_atoms=0)
        with pytest.raises(ValueError):
            CodingParams(error_tol=-1.0)
        with pytest.raises(ValueError):
            CodingParams(numeric_tol=0.0)


class TestGreedyVsExhaustive:
    # Greedy pursuit only matches exhaustive search in the low-coherence,
    # sparse-target regime, so these instances stay inside it.
    def test_two_atom_near_optimality(self):
        rng = np.random.default_rng(2)
        worst = 0.0
        for _ in range(50):
            d, x = pursuit_instance(rng)
            support, coef = omp_encode(d, x, CodingParams(max_atoms=2))
            achieved = float(np.linalg.norm(x - d[:, support] @ coef))
            best, _ = best_support_residual(d, x, 2)
            if best > 1e-12:
                worst = max(worst, achieved / best)
        assert worst <= 1.05

    def test_single_atom_exact_match(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            d, x = pursuit_instance(rng)
            support, _ = omp_encode(d, x, CodingParams(max_atoms=1))
            assert list(support) == [int(np.argmax(np.abs(d.T @ x)))]
