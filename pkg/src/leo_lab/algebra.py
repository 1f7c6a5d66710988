"""Operator classification against a codespace and LEO construction.

An operator ``M`` splits into a logical part ``P M P``, an outer part
``Q M Q`` and a leakage part ``P M Q + Q M P``. A leakage elimination
operator is ``e^{i phi} (Q - P)``: it commutes with the first two parts and
anticommutes with the third.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .qcore import (
    CNOT,
    HERMITIAN_ATOL,
    X,
    Y,
    Z,
    CodeSpace,
    as_matrix,
    dagger,
    expm_hermitian,
    is_hermitian,
    is_unitary,
    ket,
    kron_all,
    max_abs,
)

LEO_ATOL = 1e-10


class LeoError(ValueError):
    """An operator or generator fails the LEO defining relations."""


@dataclass(frozen=True)
class OperatorDecomposition:
    e_part: np.ndarray
    eperp_part: np.ndarray
    l_part: np.ndarray
    codespace: CodeSpace

    def reconstruct(self) -> np.ndarray:
        return self.e_part + self.eperp_part + self.l_part


def decompose(m, cs: CodeSpace) -> OperatorDecomposition:
    m = as_matrix(m)
    if m.shape != (cs.ambient_dim, cs.ambient_dim):
        raise ValueError(f"operator shape {m.shape} does not match codespace dim {cs.ambient_dim}")
    p, q = cs.projector, cs.complement
    return OperatorDecomposition(p @ m @ p, q @ m @ q, p @ m @ q + q @ m @ p, cs)


def equal_up_to_phase(a, b, atol: float = LEO_ATOL) -> bool:
    """True if ``a = e^{i theta} b`` for some real theta."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        return False
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) < atol:
        return max_abs(a) <= atol
    ratio = a[idx] / b[idx]
    if abs(abs(ratio) - 1) > atol:
        return False
    return max_abs(a - ratio * b) <= atol


@dataclass(frozen=True)
class LeoOperator:
    """A unitary ``e^{i phase} (Q - P)``.

    Construction does not validate, so arbitrary candidates can be wrapped
    and handed to :func:`verify_leo`; use :meth:`check` for the invariants.
    """

    matrix: np.ndarray
    phase: float
    codespace: CodeSpace

    def check(self, atol: float = LEO_ATOL) -> None:
        r, cs = self.matrix, self.codespace
        if not is_unitary(r, atol):
            raise LeoError("LEO matrix is not unitary")
        w = np.exp(1j * self.phase)
        for c in cs.basis.T:
            if max_abs(r @ c + w * c) > atol:
                raise LeoError("LEO does not act as -e^{i phi} on the codespace")
        for c in cs.complement_basis().T:
            if max_abs(r @ c - w * c) > atol:
                raise LeoError("LEO does not act as +e^{i phi} on the complement")
        rr = r * np.conj(w)
        if max_abs(rr @ rr - np.eye(r.shape[0])) > atol:
            raise LeoError("LEO is not an involution up to phase")

    def equals(self, other: "LeoOperator", strict: bool = False, atol: float = LEO_ATOL) -> bool:
        if strict:
            return max_abs(self.matrix - other.matrix) <= atol
        return equal_up_to_phase(self.matrix, other.matrix, atol)

    def extended(self, bath_dim: int) -> np.ndarray:
        """``R ⊗ I_B``."""
        return np.kron(self.matrix, np.eye(bath_dim))


def _phase_of(r: np.ndarray, cs: CodeSpace) -> float:
    comp = cs.complement_basis()
    if comp.shape[1]:
        v = comp[:, 0]
        w = np.vdot(v, r @ v)
    else:
        v = cs.basis[:, 0]
        w = -np.vdot(v, r @ v)
    return float(np.mod(np.angle(w), 2 * np.pi))


def _leo(r: np.ndarray, cs: CodeSpace) -> LeoOperator:
    leo = LeoOperator(r, _phase_of(r, cs), cs)
    leo.check()
    return leo


def leo_from_canonical(cs: CodeSpace, phase: float = 0.0) -> LeoOperator:
    """``e^{i phase} (Q - P)`` built directly from the projectors."""
    r = np.exp(1j * phase) * (cs.complement - cs.projector)
    return _leo(r, cs)


def logical_paulis(cs: CodeSpace) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Logical X, Y, Z on a two-dimensional codespace.

    The ordered basis of ``cs`` fixes logical ``|0>`` (first column) and
    ``|1>`` (second column). Each returned operator annihilates the
    complement.
    """
    if cs.dim != 2:
        raise LeoError(f"logical Paulis need a 2-dimensional codespace, got {cs.dim}")
    b = cs.basis
    return tuple(b @ s @ dagger(b) for s in (X, Y, Z))


@dataclass(frozen=True)
class LeoGenerator:
    """Hermitian ``sigma_l`` with ``sigma_l^2 = P`` that annihilates the complement."""

    sigma_l: np.ndarray
    codespace: CodeSpace
    unit_vector: Optional[np.ndarray] = None
    pauli_vector: Optional[tuple[np.ndarray, np.ndarray, np.ndarray]] = None

    @classmethod
    def from_axis(cls, cs: CodeSpace, n) -> "LeoGenerator":
        n = _unit(n)
        paulis = logical_paulis(cs)
        sigma = sum(c * s for c, s in zip(n, paulis)) @ cs.projector
        return cls(sigma, cs, n, paulis)

    def check(self, atol: float = HERMITIAN_ATOL) -> None:
        s, cs = as_matrix(self.sigma_l), self.codespace
        if s.shape != (cs.ambient_dim, cs.ambient_dim):
            raise LeoError("sigma_l shape does not match codespace")
        if not is_hermitian(s, atol):
            raise LeoError("sigma_l is not Hermitian")
        p = cs.projector
        if max_abs(p @ s @ s @ p - p) > atol:
            raise LeoError("sigma_l squared is not the identity on the codespace")
        if max_abs(s @ cs.complement) > atol:
            raise LeoError("sigma_l does not annihilate the complement")


def _unit(n) -> np.ndarray:
    n = np.asarray(n, dtype=float).reshape(-1)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1) > HERMITIAN_ATOL:
        raise LeoError(f"expected a real unit 3-vector, got {n}")
    return n


def leo_from_projector(cs: CodeSpace, n, sign: int = 1) -> LeoOperator:
    """``exp(sign * i pi (n . sigma) P)`` for a two-dimensional codespace."""
    if sign not in (1, -1):
        raise LeoError("sign must be +1 or -1")
    gen = LeoGenerator.from_axis(cs, n)
    # expm_hermitian(A, t) = exp(-i A t)
    r = expm_hermitian(gen.sigma_l, -sign * np.pi)
    return _leo(r, cs)


def leo_from_sigma(g: LeoGenerator) -> LeoOperator:
    """``exp(-i pi sigma_l)``."""
    g.check()
    r = expm_hermitian(as_matrix(g.sigma_l), np.pi)
    return _leo(r, g.codespace)


@dataclass(frozen=True)
class VerificationReport:
    trials: int
    max_comm_e: float
    max_comm_eperp: float
    max_anticomm_l: float
    atol: float = LEO_ATOL

    @property
    def passed(self) -> bool:
        return max(self.max_comm_e, self.max_comm_eperp, self.max_anticomm_l) <= self.atol

    def lines(self) -> list[str]:
        return [
            f"trials            {self.trials}",
            f"max |[R, E]|      {self.max_comm_e:.3e}",
            f"max |[R, E_perp]| {self.max_comm_eperp:.3e}",
            f"max |{{R, L}}|      {self.max_anticomm_l:.3e}",
            f"result            {'PASS' if self.passed else 'FAIL'}",
        ]


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """GUE-style sample: ``(A + A^dagger) / 2`` with complex Gaussian ``A``."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + dagger(a))


def verify_leo(r: LeoOperator, trials: int = 100, rng_seed: int = 0) -> VerificationReport:
    """Check the (anti)commutation relations on random pure-block Hermitians."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(rng_seed)
    R, cs = as_matrix(r.matrix), r.codespace
    ce = cp = al = 0.0
    for _ in range(trials):
        parts = decompose(random_hermitian(cs.ambient_dim, rng), cs)
        e, ep, lk = parts.e_part, parts.eperp_part, parts.l_part
        ce = max(ce, max_abs(R @ e - e @ R))
        cp = max(cp, max_abs(R @ ep - ep @ R))
        al = max(al, max_abs(R @ lk + lk @ R))
    return VerificationReport(trials, ce, cp, al)


# ---- the three operators used in the experiments ----------------------------

PSI2 = ket({"01": 1, "10": 1})
PSI3 = ket({"001": 1, "010": 1, "100": 1, "111": 1})
PHI = ket({"10": 1, "11": -1})


def z2_codespace() -> CodeSpace:
    return CodeSpace.from_labels(["01", "10"])


def z3_codespace() -> CodeSpace:
    return CodeSpace.from_labels(["001", "010", "100", "111"])


def cnot_codespace() -> CodeSpace:
    return CodeSpace.from_vectors([PHI])


def rotated_basis() -> np.ndarray:
    """Columns ``|00>, |01>, (|10>+|11>)/sqrt2, (|10>-|11>)/sqrt2``."""
    s = 1 / np.sqrt(2)
    return np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, s, s], [0, 0, s, -s]], dtype=complex
    )


def cnot_in_rotated_basis() -> np.ndarray:
    v = rotated_basis()
    return dagger(v) @ CNOT @ v


def z2_leo() -> LeoOperator:
    return _leo(kron_all([Z, Z]), z2_codespace())


def z3_leo() -> LeoOperator:
    return _leo(kron_all([Z, Z, Z]), z3_codespace())


def cnot_leo() -> LeoOperator:
    return _leo(CNOT.copy(), cnot_codespace())


EXPERIMENT_LEOS = {"z2": z2_leo, "z3": z3_leo, "cnot": cnot_leo}
