import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from leo_lab.qcore import (
    I2,
    X,
    Z,
    CodeSpace,
    DimensionError,
    QState,
    embed,
    expm_hermitian,
    is_unitary,
    ket,
    kron,
    matmul,
    max_abs,
    measure_probabilities,
    probabilities_by_label,
)
from leo_lab.algebra import random_hermitian


def test_matmul_pauli_identities():
    assert np.allclose(matmul(I2, X), X)
    assert np.allclose(matmul(X, X), I2)
    assert np.allclose(matmul(Z, X), -matmul(X, Z))


def test_matmul_dimension_mismatch():
    with pytest.raises(DimensionError):
        matmul(np.eye(2), np.eye(3))


def test_kron_small_cases():
    assert np.allclose(kron(Z, Z), np.diag([1, -1, -1, 1]))
    bd = np.zeros((4, 4))
    bd[:2, :2] = bd[2:, 2:] = X.real
    assert np.allclose(kron(I2, X), bd)
    assert np.allclose(kron(I2, I2), np.eye(4))


def test_kron_zzz_matches_popcount_parity():
    zzz = kron(Z, kron(Z, Z))
    expected = np.diag([(-1) ** bin(i).count("1") for i in range(8)])
    assert np.allclose(zzz, expected)


def test_expm_special_values():
    assert np.allclose(expm_hermitian(Z, np.pi), -I2, atol=1e-12)
    h = random_hermitian(5, np.random.default_rng(0))
    assert np.allclose(expm_hermitian(h, 0.0), np.eye(5), atol=1e-14)


def test_expm_matches_power_series():
    # oracle: partial sums of sum_k (-i X t)^k / k!
    t = np.pi / 2
    term = np.eye(2, dtype=complex)
    series = term.copy()
    for k in range(1, 40):
        term = term @ (-1j * t * X) / k
        series = series + term
    assert max_abs(expm_hermitian(X, t) - series) <= 1e-10
    assert max_abs(series - (-1j * X)) <= 1e-10


def test_expm_rejects_non_hermitian():
    with pytest.raises(ValueError):
        expm_hermitian(np.array([[0, 1], [0, 0]]), 1.0)


@given(
    st.integers(min_value=0, max_value=2**31 - 1),
    st.floats(min_value=-5, max_value=5),
    st.floats(min_value=-5, max_value=5),
)
def test_expm_group_property(seed, t1, t2):
    h = random_hermitian(4, np.random.default_rng(seed))
    lhs = expm_hermitian(h, t1) @ expm_hermitian(h, t2)
    assert max_abs(lhs - expm_hermitian(h, t1 + t2)) <= 1e-9
    assert is_unitary(expm_hermitian(h, t1))


@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_unitary_evolution_preserves_density_matrix(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    u = expm_hermitian(random_hermitian(4, rng), 1.3)
    out = QState(2, rho, representation="density").evolve(u)
    assert abs(np.trace(out.data) - 1) <= 1e-9
    assert np.linalg.eigvalsh(out.data).min() >= -1e-9


@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_kron_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3)) for _ in range(3))
    assert max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))) <= 1e-12


def test_measure_probabilities_examples():
    psi2 = QState.from_vector(ket({"01": 1, "10": 1}))
    assert probabilities_by_label(psi2) == pytest.approx({"01": 0.5, "10": 0.5})
    zero = QState.zero(2, density=True)
    assert probabilities_by_label(zero) == pytest.approx({"00": 1.0})
    psi3 = QState.from_vector(ket({"001": 1, "010": 1, "100": 1, "111": 1}))
    assert probabilities_by_label(psi3) == pytest.approx({k: 0.25 for k in ("001", "010", "100", "111")})


def test_measure_traces_out_bath():
    # |1>_sys ⊗ (|0>+|1>)/sqrt2 on a 2-level bath
    vec = np.kron([0, 1], [1, 1]) / np.sqrt(2)
    st_ = QState.from_vector(vec, bath_dims=(2,))
    assert np.allclose(measure_probabilities(st_), [0, 1])
    assert np.allclose(measure_probabilities(st_.to_density()), [0, 1])
    assert abs(measure_probabilities(st_).sum() - 1) <= 1e-9


def test_state_check_catches_bad_norm():
    with pytest.raises(ValueError):
        QState(1, np.array([1.0, 1.0])).check()
    QState.from_vector(ket({"0": 1, "1": 1j})).check()


def test_codespace_projector_invariants():
    cs = CodeSpace.from_labels(["01", "10"])
    p = cs.projector
    assert max_abs(p @ p - p) <= 1e-12
    assert max_abs(p - p.conj().T) <= 1e-12
    assert np.linalg.matrix_rank(p) == cs.dim == 2
    assert cs.complement_basis().shape == (4, 2)


def test_codespace_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        CodeSpace.from_vectors([[1, 0], [1, 1]])


def test_embed_matches_kron_for_adjacent_and_reversed_targets():
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    assert np.allclose(embed(X, [1], 3), kron(I2, kron(X, I2)))
    assert np.allclose(embed(cnot, [0, 1], 2), cnot)
    # control on qubit 1, target qubit 0: |ab> -> |a^b, b>
    rev = embed(cnot, [1, 0], 2)
    for b in range(4):
        a0, a1 = b >> 1, b & 1
        out = ((a0 ^ a1) << 1) | a1
        assert rev[out, b] == 1
