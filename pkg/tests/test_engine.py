import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chisquare

from conftest import binomial_sigma
from leo_lab.algebra import PSI2, LeoOperator, cnot_leo, z2_codespace, z2_leo, z3_codespace, z3_leo
from leo_lab.circuits import build_cnot_circuit, build_z2_circuit, build_z3_circuit
from leo_lab.engine import (
    KickSchedule,
    ShotCounts,
    distance,
    effective_hamiltonian,
    evolve_circuit,
    free_propagator,
    kick_limit,
    leakage_amplitude,
    leakage_probability,
    parity_kick_propagator,
    run_circuit,
    sample_counts,
)
from leo_lab.noise import NoiseChannel, NoiseModel, make_leakage_hamiltonian
from leo_lab.qcore import I2, QState, X, Z, basis_state, expm_hermitian, kron_all, max_abs, measure_probabilities

NOISELESS = NoiseModel(())


def ad_model(g, n=2):
    return NoiseModel(tuple(NoiseChannel("amplitude-damping", g, q) for q in range(n)))


def test_noiseless_z2_counts_balanced():
    counts = run_circuit(build_z2_circuit(10), NOISELESS, shots=1024, seed=3)
    assert set(counts.counts) <= {"01", "10"}
    assert abs(counts.counts["01"] - 512) <= 3 * np.sqrt(1024 * 0.25)


@pytest.mark.parametrize("tau", [0, 1, 10, 120])
def test_free_decay_matches_closed_form(tau):
    g = 5e-3
    probs = measure_probabilities(evolve_circuit(build_z2_circuit(tau, free=True), ad_model(g)))
    assert probs[1] + probs[2] == pytest.approx((1 - g) ** tau, abs=1e-12)


def test_free_decay_sampled_within_three_sigma():
    g, shots = 5e-3, 1024
    for tau in (1, 50, 300):
        c = run_circuit(build_z2_circuit(tau, free=True), ad_model(g), shots, seed=tau)
        p = (1 - g) ** tau
        f = c.frequency("01") + c.frequency("10")
        assert abs(f - p) <= 3 * binomial_sigma(p, shots)


def test_z_pulses_commute_with_amplitude_damping():
    # Markovian decay is not removed by the Z⊗Z pulses
    g = 2e-3
    nm = ad_model(g)
    a = measure_probabilities(evolve_circuit(build_z2_circuit(40), nm))
    b = measure_probabilities(evolve_circuit(build_z2_circuit(40, free=True), nm))
    assert np.allclose(a, b, atol=1e-12)


def test_run_is_deterministic_per_seed():
    nm = NoiseModel((NoiseChannel("dephasing", 0.05, 1),))
    a = run_circuit(build_cnot_circuit(5), nm, 512, seed=11)
    b = run_circuit(build_cnot_circuit(5), nm, 512, seed=11)
    c = run_circuit(build_cnot_circuit(5), nm, 512, seed=12)
    assert a == b
    assert a != c


def test_density_and_statevector_paths_agree():
    ham = make_leakage_hamiltonian(z2_codespace(), 1.0, 0.5, 2, 0)
    pure = NoiseModel((), ham, dt=0.05)
    mixed = NoiseModel((NoiseChannel("dephasing", 0.0, 0),), ham, dt=0.05)
    sv = evolve_circuit(build_z2_circuit(30, free=True), pure)
    dm = evolve_circuit(build_z2_circuit(30, free=True), mixed)
    assert sv.representation == "statevector" and dm.representation == "density"
    assert np.allclose(measure_probabilities(sv), measure_probabilities(dm), atol=1e-10)


def test_trace_preserved_under_all_noise_kinds():
    ham = make_leakage_hamiltonian(z3_codespace(), 1.0, 1.0, 2, 1)
    channels = tuple(
        NoiseChannel(kind, 0.02, q) for kind in ("amplitude-damping", "dephasing", "depolarizing") for q in range(3)
    )
    st_ = evolve_circuit(build_z3_circuit(20, insert_identity=True), NoiseModel(channels, ham, dt=0.03))
    assert abs(np.trace(st_.data) - 1) <= 1e-9
    assert np.linalg.eigvalsh(st_.reduced_density()).min() >= -1e-9


def test_channel_outside_register_rejected():
    with pytest.raises(ValueError):
        evolve_circuit(build_z2_circuit(1), NoiseModel((NoiseChannel("dephasing", 0.1, 2),)))


def test_chi_square_goodness_of_fit():
    probs = np.array([0.1, 0.2, 0.3, 0.4])
    counts = sample_counts(probs, 100_000, seed=0, num_qubits=2)
    observed = [counts.counts.get(format(i, "02b"), 0) for i in range(4)]
    assert chisquare(observed, probs * 100_000).pvalue > 1e-3


@given(
    st.lists(st.floats(min_value=0, max_value=1), min_size=4, max_size=4).filter(lambda p: sum(p) > 0.01),
    st.integers(min_value=0, max_value=2**32),
)
def test_sampling_never_hits_impossible_outcomes(weights, seed):
    counts = sample_counts(np.array(weights), 500, seed, 2)
    assert sum(counts.counts.values()) == 500
    for label in counts.counts:
        assert weights[int(label, 2)] > 0


def test_shot_counts_invariants():
    with pytest.raises(ValueError):
        ShotCounts({"00": 3}, 4)
    with pytest.raises(ValueError):
        ShotCounts({"00": 2, "1": 2}, 4)
    assert ShotCounts({"00": 1, "11": 3}, 4).frequency("11") == 0.75


def test_effective_hamiltonian_cancels_leakage_term():
    # (I⊗I, Z⊗Z): X⊗I is a leakage term for the two-qubit code and averages away
    pulses = [np.eye(4), kron_all([Z, Z])]
    assert max_abs(effective_hamiltonian(kron_all([X, I2]), pulses)) <= 1e-15
    zi = kron_all([Z, I2])
    assert max_abs(effective_hamiltonian(zi, pulses) - zi) <= 1e-15
    with pytest.raises(ValueError):
        effective_hamiltonian(zi, [])


def test_kick_without_leakage_is_plain_evolution():
    ham = make_leakage_hamiltonian(z2_codespace(), 0.0, 1.0, 2, 7)
    t = 0.37
    u = parity_kick_propagator(KickSchedule(3, t, z2_leo(), ham))
    assert max_abs(u - expm_hermitian(ham.total(), 2 * t)) <= 1e-10
    assert max_abs(u - kick_limit(ham, t)) <= 1e-10


def test_identity_kick_degenerates_to_free_evolution():
    cs = z2_codespace()
    ham = make_leakage_hamiltonian(cs, 1.0, 1.0, 1, 7)
    fake = LeoOperator(np.eye(4, dtype=complex), 0.0, cs)
    u = parity_kick_propagator(KickSchedule(4, 0.2, fake, ham))
    assert max_abs(u - free_propagator(ham, 0.2)) <= 1e-10


@pytest.mark.parametrize("leo_fn", [z2_leo, z3_leo, cnot_leo])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_kicks_suppress_leakage_for_short_times(leo_fn, seed):
    leo = leo_fn()
    ham = make_leakage_hamiltonian(leo.codespace, 1.0, 1.0, 2, seed)
    ext = ham.extended_codespace
    for x in (0.01, 0.1, 0.3):
        t = x / ham.interaction_norm
        free = leakage_amplitude(free_propagator(ham, t), ext)
        kicked = [leakage_amplitude(parity_kick_propagator(KickSchedule(m, t, leo, ham)), ext) for m in (1, 2, 4, 8)]
        assert all(k < free for k in kicked)
        assert all(a >= b - 1e-12 for a, b in zip(kicked, kicked[1:]))


def test_kick_converges_to_limit_like_one_over_m():
    leo = z2_leo()
    ham = make_leakage_hamiltonian(leo.codespace, 1.0, 1.0, 2, 0)
    t = 0.5 / ham.interaction_norm
    target = kick_limit(ham, t)
    d = [distance(parity_kick_propagator(KickSchedule(m, t, leo, ham)), target) for m in (16, 32, 64)]
    assert d[0] / d[1] == pytest.approx(2, rel=0.05)
    assert d[1] / d[2] == pytest.approx(2, rel=0.05)


def test_kick_schedule_validation():
    ham = make_leakage_hamiltonian(z2_codespace(), 1.0, 1.0)
    with pytest.raises(ValueError):
        KickSchedule(0, 1.0, z2_leo(), ham)
    with pytest.raises(ValueError):
        KickSchedule(1, 0.0, z2_leo(), ham)


def test_leakage_probability_examples():
    cs = z2_codespace()
    start = QState.from_vector(basis_state("01"))
    assert leakage_probability(kron_all([X, I2]), cs, start) == pytest.approx(1.0)
    assert leakage_probability(kron_all([X, X]), cs, start) == pytest.approx(0.0)
    assert leakage_probability(np.eye(4), cs, QState.from_vector(PSI2)) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        leakage_probability(np.eye(4), cs, QState.from_vector(basis_state("00")))


def test_leakage_amplitude_of_leo_is_zero():
    leo = z2_leo()
    assert leakage_amplitude(leo.matrix, leo.codespace) <= 1e-15
    assert leakage_amplitude(kron_all([X, I2]), leo.codespace) == pytest.approx(1.0)
