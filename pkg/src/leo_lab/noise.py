"""Markovian per-slot channels and coherent system-bath leakage Hamiltonians."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import decompose, random_hermitian
from .qcore import (
    HERMITIAN_ATOL,
    I2,
    X,
    Y,
    Z,
    CodeSpace,
    QState,
    dagger,
    is_hermitian,
    max_abs,
)

CHANNEL_KINDS = ("amplitude-damping", "dephasing", "depolarizing")

# Uncalibrated defaults: free decay of (|01>+|10>)/sqrt2 to ~0.5 over 600 slots.
DEFAULT_AMPLITUDE_DAMPING = 1.2e-3
DEFAULT_DEPHASING = 8e-4


@dataclass(frozen=True)
class NoiseChannel:
    kind: str
    strength: float
    target: int = 0

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if not 0.0 <= self.strength <= 1.0:
            raise ValueError(f"channel strength {self.strength} outside [0, 1]")


def kraus_ops(ch: NoiseChannel) -> list[np.ndarray]:
    g = ch.strength
    if ch.kind == "amplitude-damping":
        k0 = np.array([[1, 0], [0, np.sqrt(1 - g)]], dtype=complex)
        k1 = np.array([[0, np.sqrt(g)], [0, 0]], dtype=complex)
        return [k0, k1]
    if ch.kind == "dephasing":
        return [np.sqrt(1 - g) * I2, np.sqrt(g) * Z]
    # rho -> (1 - g) rho + g I/2
    return [np.sqrt(1 - 3 * g / 4) * I2] + [np.sqrt(g / 4) * s for s in (X, Y, Z)]


def channel_superop(ch: NoiseChannel) -> np.ndarray:
    """4x4 matrix ``S`` with ``vec(rho') = S vec(rho)`` for one qubit (row-major vec)."""
    return sum(np.kron(k, np.conj(k)) for k in kraus_ops(ch))


def apply_superop(rho: np.ndarray, s: np.ndarray, target: int, num_qubits: int, bath_dim: int = 1) -> np.ndarray:
    """Apply a single-qubit superoperator to ``target`` of a joint density matrix."""
    left = 2**target
    right = 2 ** (num_qubits - target - 1) * bath_dim
    r = rho.reshape(left, 2, right, left, 2, right)
    out = np.einsum("xyij,aibcjd->axbcyd", s.reshape(2, 2, 2, 2), r, optimize=False)
    return out.reshape(rho.shape)


def apply_channel(s: QState, ch: NoiseChannel) -> QState:
    if not 0 <= ch.target < s.num_qubits:
        raise ValueError(f"channel target {ch.target} outside register of {s.num_qubits}")
    rho = apply_superop(s.to_density().data, channel_superop(ch), ch.target, s.num_qubits, s.bath_dim)
    return QState(s.num_qubits, rho, s.bath_dims, "density")


@dataclass(frozen=True)
class NoiseHamiltonian:
    """``H = H_S ⊗ I_B + I_S ⊗ H_B + H_SB`` with a system codespace."""

    h_system: np.ndarray
    h_bath: np.ndarray
    h_interaction: np.ndarray
    codespace: CodeSpace

    def __post_init__(self):
        for name in ("h_system", "h_bath", "h_interaction"):
            if not is_hermitian(getattr(self, name)):
                raise ValueError(f"{name} is not Hermitian")
        ds, db = self.h_system.shape[0], self.h_bath.shape[0]
        if self.h_interaction.shape != (ds * db, ds * db):
            raise ValueError("h_interaction does not live on system ⊗ bath")
        if self.codespace.ambient_dim != ds:
            raise ValueError("codespace does not live on the system factor")

    @property
    def system_dim(self) -> int:
        return self.h_system.shape[0]

    @property
    def bath_dim(self) -> int:
        return self.h_bath.shape[0]

    @property
    def extended_codespace(self) -> CodeSpace:
        return self.codespace.extend(self.bath_dim)

    def total(self) -> np.ndarray:
        ds, db = self.system_dim, self.bath_dim
        return (
            np.kron(self.h_system, np.eye(db))
            + np.kron(np.eye(ds), self.h_bath)
            + self.h_interaction
        )

    def blocks(self):
        """The logical / outer / leakage split of the interaction term."""
        return decompose(self.h_interaction, self.extended_codespace)

    @property
    def interaction_norm(self) -> float:
        return float(np.linalg.norm(self.h_interaction, 2))


def _scaled(block: np.ndarray, target_norm: float) -> np.ndarray:
    norm = np.linalg.norm(block, 2)
    if norm < 1e-300:
        return np.zeros_like(block)
    return block * (target_norm / norm)


def make_leakage_hamiltonian(
    cs: CodeSpace,
    g_leak: float,
    g_logical: float,
    bath_dim: int = 1,
    rng_seed: int = 0,
) -> NoiseHamiltonian:
    """Random system-bath coupling with prescribed block strengths.

    The leakage block is scaled to operator norm ``g_leak``; the logical and
    outer blocks are both scaled to ``g_logical``. ``H_S`` and ``H_B`` are
    zero, so all dynamics comes from the interaction.
    """
    if bath_dim < 1:
        raise ValueError("bath_dim must be >= 1")
    rng = np.random.default_rng(rng_seed)
    ds = cs.ambient_dim
    ext = cs.extend(bath_dim)
    parts = decompose(random_hermitian(ds * bath_dim, rng), ext)
    h = (
        _scaled(parts.e_part, g_logical)
        + _scaled(parts.eperp_part, g_logical)
        + _scaled(parts.l_part, g_leak)
    )
    h = 0.5 * (h + dagger(h))
    return NoiseHamiltonian(
        np.zeros((ds, ds), dtype=complex),
        np.zeros((bath_dim, bath_dim), dtype=complex),
        h,
        cs,
    )


@dataclass(frozen=True)
class NoiseModel:
    channels: tuple[NoiseChannel, ...] = ()
    coherent: Optional[NoiseHamiltonian] = None
    dt: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        if self.coherent is not None and not self.dt > 0:
            raise ValueError("dt must be positive when a coherent part is present")

    @property
    def bath_dim(self) -> int:
        return self.coherent.bath_dim if self.coherent is not None else 1

    @property
    def is_noiseless(self) -> bool:
        return not self.channels and self.coherent is None


@dataclass(frozen=True)
class CoherentConfig:
    g_leak: float
    g_logical: float = 0.0
    bath_dim: int = 1
    dt: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.g_leak < 0 or self.g_logical < 0:
            raise ValueError("coupling strengths must be non-negative")
        if int(self.bath_dim) != self.bath_dim or self.bath_dim < 1:
            raise ValueError("bath_dim must be a positive integer")
        if not self.dt > 0:
            raise ValueError("dt must be positive")


@dataclass(frozen=True)
class NoiseConfig:
    """Codespace-independent noise description, as read from a config file.

    Markovian strengths apply to every qubit in every slot.
    """

    amplitude_damping: float = 0.0
    dephasing: float = 0.0
    depolarizing: float = 0.0
    coherent: Optional[CoherentConfig] = None

    def __post_init__(self):
        for name in ("amplitude_damping", "dephasing", "depolarizing"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")

    @classmethod
    def from_dict(cls, d: Optional[dict]) -> "NoiseConfig":
        d = dict(d or {})
        allowed = {"amplitude_damping", "dephasing", "depolarizing", "coherent"}
        unknown = set(d) - allowed
        if unknown:
            raise ValueError(f"unknown noise keys: {sorted(unknown)}")
        coh = d.pop("coherent", None)
        if coh is not None:
            coh_keys = {"g_leak", "g_logical", "bath_dim", "dt", "seed"}
            if set(coh) - coh_keys:
                raise ValueError(f"unknown coherent keys: {sorted(set(coh) - coh_keys)}")
            coh = CoherentConfig(**coh)
        return cls(coherent=coh, **{k: float(v) for k, v in d.items()})

    def to_dict(self) -> dict:
        out = {
            "amplitude_damping": self.amplitude_damping,
            "dephasing": self.dephasing,
            "depolarizing": self.depolarizing,
        }
        if self.coherent is not None:
            c = self.coherent
            out["coherent"] = {
                "g_leak": c.g_leak,
                "g_logical": c.g_logical,
                "bath_dim": c.bath_dim,
                "dt": c.dt,
                "seed": c.seed,
            }
        return out

    def build(self, num_qubits: int, cs: Optional[CodeSpace] = None, rng_seed: int = 0) -> NoiseModel:
        channels = []
        for kind, g in (
            ("amplitude-damping", self.amplitude_damping),
            ("dephasing", self.dephasing),
            ("depolarizing", self.depolarizing),
        ):
            if g > 0:
                channels += [NoiseChannel(kind, g, q) for q in range(num_qubits)]
        if self.coherent is None:
            return NoiseModel(tuple(channels), rng_seed=rng_seed)
        if cs is None:
            raise ValueError("a coherent noise part needs a codespace")
        c = self.coherent
        ham = make_leakage_hamiltonian(cs, c.g_leak, c.g_logical, c.bath_dim, c.seed)
        return NoiseModel(tuple(channels), ham, c.dt, rng_seed)


def default_markov_config() -> NoiseConfig:
    return NoiseConfig(amplitude_damping=DEFAULT_AMPLITUDE_DAMPING, dephasing=DEFAULT_DEPHASING)


def check_reconstruction(ham: NoiseHamiltonian, atol: float = HERMITIAN_ATOL) -> float:
    """Max entry error of rebuilding ``H_SB`` from its three blocks."""
    err = max_abs(ham.blocks().reconstruct() - ham.h_interaction)
    if err > atol:
        raise ValueError(f"block reconstruction error {err:.3e}")
    return err
