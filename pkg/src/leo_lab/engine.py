"""Slot-by-slot circuit evolution, parity-kick propagators, shot sampling.

Within a slot the order is fixed: gate unitaries, then every Markovian
channel on every qubit, then coherent drift ``exp(-i H dt)`` on the joint
system-bath space. Pulses themselves are instantaneous. Slots outside the
circuit's noise window (state preparation, readout mapping) are ideal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import LeoOperator, decompose
from .circuits import Circuit
from .noise import NoiseHamiltonian, NoiseModel, apply_superop, channel_superop
from .qcore import (
    CodeSpace,
    QState,
    as_matrix,
    dagger,
    expm_hermitian,
    is_unitary,
    measure_probabilities,
)

TRACE_ATOL = 1e-9
# probabilities are quantised to this many bits before integer sampling
_SAMPLING_BITS = 53


@dataclass(frozen=True)
class ShotCounts:
    counts: dict[str, int]
    shots: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not sum to shots")
        if len({len(k) for k in self.counts}) > 1:
            raise ValueError("labels have inconsistent lengths")

    def frequency(self, label: str) -> float:
        return self.counts.get(label, 0) / self.shots


def _slot_unitaries(c: Circuit, bath_dim: int = 1) -> list[np.ndarray]:
    n = c.num_qubits
    cache: dict[tuple, np.ndarray] = {}
    out = []
    for gates in c.slots():
        key = tuple(gates)
        if key not in cache:
            u = np.eye(2**n, dtype=complex)
            for g in gates:
                u = g.full_matrix(n) @ u
            cache[key] = np.kron(u, np.eye(bath_dim)) if bath_dim > 1 else u
        out.append(cache[key])
    return out


def initial_state(num_qubits: int, bath_dim: int, density: bool) -> QState:
    """All qubits in |0>, bath in its first basis state."""
    bath = (bath_dim,) if bath_dim > 1 else ()
    return QState.zero(num_qubits, bath, density=density)


def evolve_circuit(c: Circuit, nm: NoiseModel) -> QState:
    """Final joint state after running every slot of ``c`` under ``nm``."""
    for ch in nm.channels:
        if ch.target >= c.num_qubits:
            raise ValueError(f"noise channel targets qubit {ch.target} outside the circuit")
    bath_dim = nm.bath_dim
    drift = None
    if nm.coherent is not None:
        if nm.coherent.system_dim != 2**c.num_qubits:
            raise ValueError("coherent noise dimension does not match the circuit")
        drift = expm_hermitian(nm.coherent.total(), nm.dt)
    # channels on one qubit compose into a single 4x4 superoperator
    fused: dict[int, np.ndarray] = {}
    for ch in nm.channels:
        fused[ch.target] = channel_superop(ch) @ fused.get(ch.target, np.eye(4))
    n = c.num_qubits
    state = initial_state(n, bath_dim, density=bool(fused))
    bath = state.bath_dims
    for u, noisy in zip(_slot_unitaries(c, bath_dim), c.noisy_slots()):
        if not noisy:
            state = state.evolve(u)
            continue
        if not fused:
            state = state.evolve(u if drift is None else drift @ u)
            continue
        rho = u @ state.data @ dagger(u)
        for q, sop in fused.items():
            rho = apply_superop(rho, sop, q, n, bath_dim)
        if drift is not None:
            rho = drift @ rho @ dagger(drift)
        tr = np.trace(rho).real
        if abs(tr - 1) > TRACE_ATOL:
            raise RuntimeError(f"trace drifted to {tr} after a slot")
        state = QState(n, rho, bath, "density")
    return state


def sample_counts(probs: np.ndarray, shots: int, seed: int, num_qubits: int) -> ShotCounts:
    """Multinomial sampling through integer thresholds on a PCG64 stream."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = np.asarray(probs, dtype=float)
    cdf = np.cumsum(probs / probs.sum())
    scale = 2**_SAMPLING_BITS
    thresholds = np.minimum(np.round(cdf * scale), scale).astype(np.uint64)
    thresholds[-1] = scale
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.integers(0, scale, size=shots, dtype=np.uint64)
    idx = np.searchsorted(thresholds, draws, side="right")
    hist = np.bincount(idx, minlength=len(probs))
    counts = {
        format(i, f"0{num_qubits}b"): int(k) for i, k in enumerate(hist) if k
    }
    return ShotCounts(counts, shots)


def run_circuit(c: Circuit, nm: NoiseModel, shots: int = 1024, seed: int = 0) -> ShotCounts:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = measure_probabilities(evolve_circuit(c, nm))
    return sample_counts(probs, shots, seed, c.num_qubits)


def effective_hamiltonian(h, pulses) -> np.ndarray:
    """First-order average ``(1/N) sum U_i h U_i^dagger``."""
    h = as_matrix(h)
    pulses = [as_matrix(u) for u in pulses]
    if not pulses:
        raise ValueError("need at least one pulse")
    for u in pulses:
        if u.shape != h.shape:
            raise ValueError(f"pulse shape {u.shape} does not match {h.shape}")
    return sum(u @ h @ dagger(u) for u in pulses) / len(pulses)


@dataclass(frozen=True)
class KickSchedule:
    """``(exp(-iH t/m) R^dagger exp(-iH t/m) R)^m``; elapsed time is ``2 t``."""

    m: int
    t_total: float
    leo: LeoOperator
    hamiltonian: NoiseHamiltonian

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if not self.t_total > 0:
            raise ValueError("t_total must be positive")


def parity_kick_propagator(ks: KickSchedule) -> np.ndarray:
    h = ks.hamiltonian.total()
    r = ks.leo.extended(ks.hamiltonian.bath_dim)
    step_u = expm_hermitian(h, ks.t_total / ks.m)
    step = step_u @ dagger(r) @ step_u @ r
    out = np.eye(h.shape[0], dtype=complex)
    for _ in range(ks.m):
        out = step @ out
    if not is_unitary(out, 1e-9):
        raise RuntimeError("kick propagator lost unitarity")
    return out


def free_propagator(ham: NoiseHamiltonian, t_total: float) -> np.ndarray:
    """Evolution over the same elapsed time ``2 t`` with no kicks."""
    return expm_hermitian(ham.total(), 2 * t_total)


def kick_limit(ham: NoiseHamiltonian, t_total: float) -> np.ndarray:
    """``exp(-i H_E 2t) exp(-i H_Eperp 2t)``, the infinitely-fast-kick limit."""
    parts = decompose(ham.total(), ham.extended_codespace)
    return expm_hermitian(parts.e_part, 2 * t_total) @ expm_hermitian(parts.eperp_part, 2 * t_total)


def leakage_amplitude(u, cs: CodeSpace) -> float:
    """Spectral norm of ``P u Q``."""
    u = as_matrix(u)
    return float(np.linalg.norm(cs.projector @ u @ cs.complement, 2))


def leakage_probability(u, cs: CodeSpace, psi0: QState) -> float:
    """Population outside the codespace after applying ``u`` to ``psi0``.

    ``cs`` lives on the system; it is extended over any bath in ``psi0``.
    """
    ext = cs.extend(psi0.bath_dim)
    rho = psi0.to_density().data
    if np.trace(ext.complement @ rho).real > 1e-10:
        raise ValueError("initial state is not supported in the codespace")
    u = as_matrix(u)
    out = np.trace(ext.complement @ u @ rho @ dagger(u)).real
    return float(min(max(out, 0.0), 1.0))


def distance(a, b) -> float:
    """Spectral-norm distance between two operators."""
    return float(np.linalg.norm(as_matrix(a) - as_matrix(b), 2))

