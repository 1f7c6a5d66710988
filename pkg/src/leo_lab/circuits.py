"""Gates, the three experiment circuits, and OpenQASM 2.0 export."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .qcore import CNOT, I2, H, X, Z, embed

SINGLE_QUBIT = ("X", "Z", "H", "ID", "RX", "RY", "RZ")
ROTATIONS = ("RX", "RY", "RZ")
GATE_KINDS = SINGLE_QUBIT + ("CNOT",)


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    angle: Optional[float] = None
    duration_slots: int = 1

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unsupported gate kind {self.kind!r}")
        want = 2 if self.kind == "CNOT" else 1
        if len(self.targets) != want or len(set(self.targets)) != want:
            raise ValueError(f"{self.kind} needs {want} distinct targets, got {self.targets}")
        if (self.kind in ROTATIONS) != (self.angle is not None):
            raise ValueError(f"angle given/missing for {self.kind}")
        if self.duration_slots < 1:
            raise ValueError("duration_slots must be >= 1")

    def matrix(self) -> np.ndarray:
        """Local matrix; CNOT is ordered (control, target).

        Rotations use ``exp(-i angle sigma / 2)``, matching ``qelib1.inc``.
        """
        fixed = {"X": X, "Z": Z, "H": H, "ID": I2, "CNOT": CNOT}
        if self.kind in fixed:
            return fixed[self.kind]
        c, s = np.cos(self.angle / 2), np.sin(self.angle / 2)
        if self.kind == "RX":
            return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
        if self.kind == "RY":
            return np.array([[c, -s], [s, c]], dtype=complex)
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]], dtype=complex)

    def full_matrix(self, num_qubits: int) -> np.ndarray:
        return embed(self.matrix(), self.targets, num_qubits)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()
    measured_qubits: Optional[tuple[int, ...]] = None
    # gate-index range [start, stop) exposed to noise; None means every gate
    noise_window: Optional[tuple[int, int]] = None

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.measured_qubits is None:
            object.__setattr__(self, "measured_qubits", tuple(range(self.num_qubits)))
        for g in self.gates:
            if max(g.targets) >= self.num_qubits:
                raise ValueError(f"gate {g} targets a qubit outside the register")
        if self.noise_window is not None:
            a, b = self.noise_window
            if not 0 <= a <= b <= len(self.gates):
                raise ValueError(f"noise window {self.noise_window} outside the gate list")

    def _barriers(self) -> set[int]:
        return set() if self.noise_window is None else set(self.noise_window)

    def _schedule(self) -> tuple[list[list[Gate]], list[bool]]:
        free_at = [0] * self.num_qubits
        slots: list[list[Gate]] = []
        noisy: list[bool] = []
        barriers = self._barriers()
        lo, hi = self.noise_window or (0, len(self.gates))
        for i, g in enumerate(self.gates):
            if i in barriers:
                free_at = [max(free_at)] * self.num_qubits
            start = max(free_at[q] for q in g.targets)
            end = start + g.duration_slots
            while len(slots) < end:
                slots.append([])
                noisy.append(False)
            slots[start].append(g)
            for k in range(start, end):
                noisy[k] = noisy[k] or lo <= i < hi
            for q in g.targets:
                free_at[q] = end
        return slots, noisy

    def slots(self) -> list[list[Gate]]:
        """ASAP schedule: each gate starts once all its qubits are free.

        The noise-window edges act as barriers, so no slot mixes window
        gates with preparation or readout gates.
        """
        return self._schedule()[0]

    def noisy_slots(self) -> list[bool]:
        """Per slot, whether noise channels and drift act during it."""
        return self._schedule()[1]

    def unitary(self) -> np.ndarray:
        u = np.eye(2**self.num_qubits, dtype=complex)
        for g in self.gates:
            u = g.full_matrix(self.num_qubits) @ u
        return u


def _pulses(gates: list[Gate], pulse: list[Gate], tau: int, n: int, insert_identity: bool):
    for _ in range(tau):
        gates += pulse
        if insert_identity:
            gates += [Gate("ID", (q,)) for q in range(n)]


def build_z2_circuit(tau: int, insert_identity: bool = False, free: bool = False) -> Circuit:
    """Prepare (|01>+|10>)/sqrt2, then ``tau`` Z⊗Z pulses.

    ``free`` swaps each pulse for identities on both qubits. Only the pulse
    section is exposed to noise; preparation is treated as ideal.
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    gates = [Gate("H", (0,)), Gate("X", (1,)), Gate("CNOT", (0, 1))]
    kind = "ID" if free else "Z"
    _pulses(gates, [Gate(kind, (0,)), Gate(kind, (1,))], tau, 2, insert_identity)
    return Circuit(2, tuple(gates), noise_window=(3, len(gates)))


def build_z3_circuit(tau: int, insert_identity: bool = False, free: bool = False) -> Circuit:
    """Prepare (|001>+|010>+|100>+|111>)/2, then ``tau`` Z⊗Z⊗Z pulses."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    gates = [
        Gate("H", (0,)),
        Gate("H", (1,)),
        Gate("X", (2,)),
        Gate("CNOT", (1, 2)),
        Gate("CNOT", (0, 1)),
    ]
    kind = "ID" if free else "Z"
    _pulses(gates, [Gate(kind, (q,)) for q in range(3)], tau, 3, insert_identity)
    return Circuit(3, tuple(gates), noise_window=(5, len(gates)))


def build_cnot_circuit(tau: int, insert_identity: bool = False, free: bool = False) -> Circuit:
    """Prepare (|10>-|11>)/sqrt2, apply ``tau`` CNOTs, map the state to |00>."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    gates = [Gate("X", (0,)), Gate("H", (1,)), Gate("Z", (1,))]
    pulse = [Gate("ID", (0,)), Gate("ID", (1,))] if free else [Gate("CNOT", (0, 1))]
    _pulses(gates, pulse, tau, 2, insert_identity)
    window = (3, len(gates))
    gates += [Gate("H", (1,)), Gate("X", (0,)), Gate("X", (1,))]
    return Circuit(2, tuple(gates), noise_window=window)


BUILDERS = {"z2": build_z2_circuit, "z3": build_z3_circuit, "cnot": build_cnot_circuit}


def format_angle(angle: float) -> str:
    """Render multiples of pi with small denominators as ``pi`` expressions."""
    frac = Fraction(angle / np.pi).limit_denominator(64)
    if abs(float(frac) * np.pi - angle) < 1e-12:
        if frac == 0:
            return "0"
        num, den = frac.numerator, frac.denominator
        sign = "-" if num < 0 else ""
        num = abs(num)
        s = "pi" if num == 1 else f"{num}*pi"
        return f"{sign}{s}" if den == 1 else f"{sign}{s}/{den}"
    return repr(float(angle))


_QASM_NAMES = {"X": "x", "Z": "z", "H": "h", "ID": "id", "CNOT": "cx", "RX": "rx", "RY": "ry", "RZ": "rz"}


def export_qasm(c: Circuit) -> str:
    n = c.num_qubits
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{n}];", f"creg c[{n}];"]
    for g in c.gates:
        if g.kind not in _QASM_NAMES:
            raise ValueError(f"cannot export gate kind {g.kind!r}")
        name = _QASM_NAMES[g.kind]
        if g.angle is not None:
            name = f"{name}({format_angle(g.angle)})"
        args = ",".join(f"q[{t}]" for t in g.targets)
        lines.append(f"{name} {args};")
    for q in c.measured_qubits:
        lines.append(f"measure q[{q}] -> c[{q}];")
    return "\n".join(lines) + "\n"
