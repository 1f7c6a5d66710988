"""Dense linear algebra and quantum-state primitives.

Matrices are plain complex ``numpy`` arrays. Qubit 0 is the leftmost ket
label and the most significant bit of a basis index; an optional bath
factor always sits to the right of the system qubits.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

HERMITIAN_ATOL = 1e-12
UNITARY_ATOL = 1e-10
NORM_ATOL = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


class DimensionError(ValueError):
    """Raised when operand shapes are incompatible."""


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def max_abs(a: np.ndarray) -> float:
    """Entrywise max norm, the norm used by every tolerance check here."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def is_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and max_abs(m - dagger(m)) <= atol


def is_unitary(m: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return max_abs(dagger(m) @ m - np.eye(m.shape[0])) <= atol


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Tensor product with the block convention ``a[i, j] * b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def expm_hermitian(h, t: float) -> np.ndarray:
    """Return ``exp(-i h t)`` for Hermitian ``h`` via eigendecomposition."""
    h = as_matrix(h)
    if not is_hermitian(h):
        raise ValueError("expm_hermitian requires a Hermitian matrix")
    h = 0.5 * (h + dagger(h))
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ dagger(v)


def embed(op: np.ndarray, targets: Sequence[int], num_qubits: int) -> np.ndarray:
    """Lift a ``2^k`` operator acting on ``targets`` to the full register.

    ``targets[0]`` is the most significant qubit of ``op``; targets need not
    be adjacent or sorted.
    """
    op = as_matrix(op)
    k = len(targets)
    if op.shape != (2**k, 2**k):
        raise DimensionError(f"operator shape {op.shape} does not match {k} targets")
    if len(set(targets)) != k or any(not 0 <= q < num_qubits for q in targets):
        raise DimensionError(f"bad targets {targets} for {num_qubits} qubits")
    rest = [q for q in range(num_qubits) if q not in targets]
    full = np.kron(op, np.eye(2 ** len(rest), dtype=complex))
    # full acts on the qubit order targets + rest; permute back to 0..n-1
    order = list(targets) + rest
    perm = np.argsort(order)
    n = num_qubits
    t = full.reshape([2] * (2 * n))
    t = t.transpose(list(perm) + [n + p for p in perm])
    return t.reshape(2**n, 2**n)


def basis_state(label: str) -> np.ndarray:
    """Column vector for a computational-basis label such as ``"01"``."""
    vec = np.zeros((2 ** len(label), 1), dtype=complex)
    vec[int(label, 2), 0] = 1.0
    return vec


def ket(amplitudes: dict[str, complex]) -> np.ndarray:
    """Normalised superposition from ``{label: amplitude}``."""
    labels = list(amplitudes)
    n = len(labels[0])
    vec = np.zeros((2**n, 1), dtype=complex)
    for lab, amp in amplitudes.items():
        vec[int(lab, 2), 0] += amp
    return vec / np.linalg.norm(vec)


def partial_trace_bath(rho: np.ndarray, system_dim: int, bath_dim: int) -> np.ndarray:
    if bath_dim == 1:
        return rho
    r = rho.reshape(system_dim, bath_dim, system_dim, bath_dim)
    return np.einsum("ibjb->ij", r)


@dataclass(frozen=True)
class QState:
    """Statevector or density matrix over ``num_qubits`` system qubits plus bath."""

    num_qubits: int
    data: np.ndarray
    bath_dims: tuple[int, ...] = ()
    representation: str = "statevector"

    def __post_init__(self):
        data = as_matrix(self.data)
        if self.representation == "statevector" and data.shape[1] != 1:
            raise DimensionError("statevector data must be a single column")
        if self.representation == "density" and data.shape[0] != data.shape[1]:
            raise DimensionError("density matrix must be square")
        if self.representation not in ("statevector", "density"):
            raise ValueError(f"unknown representation {self.representation!r}")
        if data.shape[0] != self.dim:
            raise DimensionError(f"data dim {data.shape[0]} != {self.dim}")
        object.__setattr__(self, "bath_dims", tuple(self.bath_dims))
        object.__setattr__(self, "data", data)

    @property
    def system_dim(self) -> int:
        return 2**self.num_qubits

    @property
    def bath_dim(self) -> int:
        return int(np.prod(self.bath_dims)) if self.bath_dims else 1

    @property
    def dim(self) -> int:
        return self.system_dim * self.bath_dim

    @classmethod
    def zero(cls, num_qubits: int, bath_dims: Sequence[int] = (), density: bool = False):
        bd = int(np.prod(bath_dims)) if bath_dims else 1
        vec = np.zeros((2**num_qubits * bd, 1), dtype=complex)
        vec[0, 0] = 1.0
        st = cls(num_qubits, vec, tuple(bath_dims))
        return st.to_density() if density else st

    @classmethod
    def from_vector(cls, vec, bath_dims: Sequence[int] = ()) -> "QState":
        vec = as_matrix(vec)
        bd = int(np.prod(bath_dims)) if bath_dims else 1
        n = int(round(np.log2(vec.shape[0] // bd)))
        return cls(n, vec, tuple(bath_dims))

    def to_density(self) -> "QState":
        if self.representation == "density":
            return self
        rho = self.data @ dagger(self.data)
        return QState(self.num_qubits, rho, self.bath_dims, "density")

    def evolve(self, u: np.ndarray) -> "QState":
        if self.representation == "statevector":
            return QState(self.num_qubits, matmul(u, self.data), self.bath_dims)
        rho = matmul(matmul(u, self.data), dagger(u))
        return QState(self.num_qubits, rho, self.bath_dims, "density")

    def reduced_density(self) -> np.ndarray:
        """System density matrix with the bath traced out."""
        return partial_trace_bath(self.to_density().data, self.system_dim, self.bath_dim)

    def check(self, atol: float = NORM_ATOL) -> None:
        if self.representation == "statevector":
            norm = np.linalg.norm(self.data)
            if abs(norm - 1) > atol:
                raise ValueError(f"statevector norm {norm} != 1")
            return
        rho = self.data
        if not is_hermitian(rho, atol):
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(rho).real
        if abs(tr - 1) > atol:
            raise ValueError(f"density matrix trace {tr} != 1")
        if np.linalg.eigvalsh(0.5 * (rho + dagger(rho))).min() < -atol:
            raise ValueError("density matrix has a negative eigenvalue")


@dataclass(frozen=True)
class CodeSpace:
    """Orthonormal basis (as columns) of a protected subspace and its projector."""

    basis: np.ndarray
    projector: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        b = as_matrix(self.basis)
        gram = dagger(b) @ b
        if max_abs(gram - np.eye(b.shape[1])) > HERMITIAN_ATOL:
            raise ValueError("codespace basis vectors are not orthonormal")
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "projector", b @ dagger(b))

    @classmethod
    def from_vectors(cls, vectors: Sequence) -> "CodeSpace":
        cols = [as_matrix(v).reshape(-1) for v in vectors]
        return cls(np.stack(cols, axis=1))

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> "CodeSpace":
        return cls.from_vectors([basis_state(lab) for lab in labels])

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def complement(self) -> np.ndarray:
        """Projector ``Q = I - P`` onto the orthogonal complement."""
        return np.eye(self.ambient_dim) - self.projector

    def complement_basis(self) -> np.ndarray:
        w, v = np.linalg.eigh(self.complement)
        return v[:, w > 0.5]

    def extend(self, bath_dim: int) -> "CodeSpace":
        """The codespace tensored with the full bath space, ``C ⊗ H_B``."""
        if bath_dim == 1:
            return self
        return CodeSpace(np.kron(self.basis, np.eye(bath_dim)))

    def contains(self, vec, atol: float = NORM_ATOL) -> bool:
        vec = as_matrix(vec)
        return max_abs(self.complement @ vec) <= atol


def measure_probabilities(state: QState) -> np.ndarray:
    """Computational-basis probabilities of the system qubits (bath traced out)."""
    if state.representation == "statevector" and state.bath_dim == 1:
        p = np.abs(state.data[:, 0]) ** 2
    elif state.representation == "statevector":
        amps = state.data[:, 0].reshape(state.system_dim, state.bath_dim)
        p = np.sum(np.abs(amps) ** 2, axis=1)
    else:
        p = np.real(np.diag(state.reduced_density()))
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def probabilities_by_label(state: QState, cutoff: float = 1e-15) -> dict[str, float]:
    p = measure_probabilities(state)
    n = state.num_qubits
    return {format(i, f"0{n}b"): float(v) for i, v in enumerate(p) if v > cutoff}
