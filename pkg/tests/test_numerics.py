import numpy as np
import pytest

from oplattice import (
    DEFAULT_TOL,
    DimensionMismatch,
    NotHermitian,
    NotProjector,
    Tolerance,
    ValidationError,
    adjoint,
    as_matrix,
    ensure_projector,
    hermitian_eig,
    is_projector,
    matrix_from_json,
    matrix_to_json,
    null_space,
    operator_norm,
    rank_of,
)


def random_matrix(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


class TestTolerance:
    def test_defaults(self):
        tol = Tolerance()
        assert tol.eq_tol == 1e-9
        assert tol.rank_tol == 1e-8
        assert tol.conv_tol == 1e-10
        assert tol.max_iter == 10_000

    @pytest.mark.parametrize("bad", [{"eq_tol": 0.0}, {"rank_tol": 1.0}, {"conv_tol": -1e-3}])
    def test_thresholds_must_be_in_unit_interval(self, bad):
        with pytest.raises(ValueError):
            Tolerance(**bad)

    def test_max_iter_positive(self):
        with pytest.raises(ValueError):
            Tolerance(max_iter=0)


class TestAsMatrix:
    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatch):
            as_matrix(np.zeros((2, 3)))

    def test_rejects_nan(self):
        with pytest.raises(ValidationError):
            as_matrix(np.array([[np.nan, 0], [0, 1]]))

    def test_result_is_read_only(self):
        a = as_matrix(np.eye(2))
        with pytest.raises(ValueError):
            a[0, 0] = 5.0


class TestAdjoint:
    def test_identity_self_adjoint(self):
        assert np.array_equal(adjoint(np.eye(3)), np.eye(3))

    def test_real_matrix_transposes(self):
        m = np.array([[0, 1], [0, 0]], dtype=complex)
        assert np.array_equal(adjoint(m), np.array([[0, 0], [1, 0]]))

    def test_conjugates(self):
        m = np.array([[0, 1j], [0, 0]])
        assert np.array_equal(adjoint(m), np.array([[0, 0], [-1j, 0]]))

    def test_involution(self):
        rng = np.random.default_rng(11)
        m = random_matrix(rng, 4)
        assert np.array_equal(adjoint(adjoint(m)), m)


class TestHermitianEig:
    def test_diagonal_sorted_descending(self):
        w, _ = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
        assert np.allclose(w, [3.0, 2.0, 1.0])

    def test_pauli_x(self):
        w, _ = hermitian_eig(np.array([[0, 1], [1, 0]], dtype=complex))
        assert np.allclose(w, [1.0, -1.0])

    def test_reconstruction(self):
        rng = np.random.default_rng(5)
        m = random_matrix(rng, 6)
        h = (m + m.conj().T) / 2
        w, v = hermitian_eig(h)
        rebuilt = (v * w) @ v.conj().T
        assert operator_norm(rebuilt - h) <= 1e-10
        assert operator_norm(v.conj().T @ v - np.eye(6)) <= 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


class TestOperatorNorm:
    def test_identity(self):
        assert operator_norm(np.eye(4)) == pytest.approx(1.0)

    def test_diagonal_takes_largest_modulus(self):
        assert operator_norm(np.diag([2.0, -3.0])) == pytest.approx(3.0)

    def test_nilpotent(self):
        # eigenvalues of m*m are {0, 4}
        assert operator_norm(np.array([[0, 2], [0, 0]])) == pytest.approx(2.0)

    def test_cstar_identity_on_random_matrices(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            d = int(rng.integers(1, 7))
            m = random_matrix(rng, d)
            lhs = operator_norm(m.conj().T @ m)
            rhs = operator_norm(m) ** 2
            assert abs(lhs - rhs) <= 1e-8 * (1 + rhs)

    def test_adjoint_preserves_norm(self):
        rng = np.random.default_rng(43)
        for _ in range(50):
            m = random_matrix(rng, 5)
            assert abs(operator_norm(adjoint(m)) - operator_norm(m)) <= 1e-10

    def test_submultiplicative(self):
        rng = np.random.default_rng(44)
        for _ in range(50):
            a = random_matrix(rng, 4)
            b = random_matrix(rng, 4)
            assert operator_norm(a @ b) <= operator_norm(a) * operator_norm(b) + 1e-10


class TestRankAndNullSpace:
    def test_zero_matrix(self):
        assert rank_of(np.zeros((3, 3))) == 0
        assert null_space(np.zeros((3, 3))).shape == (3, 3)

    def test_noise_scale_matrix_counts_as_zero(self):
        assert rank_of(1e-14 * np.ones((2, 2))) == 0

    def test_diagonal_projector(self):
        assert rank_of(np.diag([1.0, 1.0, 0.0])) == 2

    def test_rank_one_outer_product(self):
        v = np.array([1.0, 2.0, 2.0]) / 3.0
        assert rank_of(np.outer(v, v)) == 1

    def test_identity_has_trivial_kernel(self):
        assert null_space(np.eye(2)).shape == (2, 0)

    def test_coordinate_kernel(self):
        basis = null_space(np.diag([1.0, 0.0, 0.0]))
        assert basis.shape == (3, 2)
        assert operator_norm(basis.conj().T @ basis - np.eye(2)) <= 1e-12
        assert np.allclose(np.diag([1.0, 0.0, 0.0]) @ basis, 0.0)

    def test_rank_nullity(self):
        rng = np.random.default_rng(9)
        for _ in range(40):
            d = int(rng.integers(1, 8))
            r = int(rng.integers(0, d + 1))
            left = random_matrix(rng, d)[:, :r]
            right = random_matrix(rng, d)[:r, :]
            m = left @ right if r else np.zeros((d, d), dtype=complex)
            assert rank_of(m) + null_space(m).shape[1] == d

    def test_kernel_vectors_are_annihilated(self):
        rng = np.random.default_rng(10)
        m = random_matrix(rng, 5)
        m[:, 2] = m[:, 0] + m[:, 1]  # force rank deficiency
        basis = null_space(m)
        assert basis.shape[1] >= 1
        assert operator_norm(m @ basis) <= DEFAULT_TOL.rank_tol * operator_norm(m)


class TestProjectorValidation:
    def test_accepts_rank_one(self):
        v = np.array([1.0, 1j]) / np.sqrt(2)
        ensure_projector(np.outer(v, v.conj()))

    def test_rejects_non_idempotent(self):
        with pytest.raises(NotProjector):
            ensure_projector(np.diag([0.5, 0.5]))

    def test_rejects_non_hermitian(self):
        assert not is_projector(np.array([[1, 1], [0, 0]], dtype=complex))


class TestMatrixJson:
    def test_round_trip(self):
        rng = np.random.default_rng(3)
        m = random_matrix(rng, 3)
        assert np.array_equal(matrix_from_json(matrix_to_json(m)), m)

    def test_rejects_bare_numbers(self):
        with pytest.raises(ValidationError):
            matrix_from_json([[1.0, 0.0], [0.0, 1.0]])

    def test_rejects_ragged_rows(self):
        with pytest.raises(ValidationError):
            matrix_from_json([[[1.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]])

    def test_expected_dim_enforced(self):
        with pytest.raises(DimensionMismatch):
            matrix_from_json(matrix_to_json(np.eye(2)), expected_dim=3)
