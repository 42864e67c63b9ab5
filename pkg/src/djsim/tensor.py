"""Dense state vectors, operators and bipartition tests.

Basis index ``x`` labels ``|x_{n-1} ... x_1 x_0>`` with ``x_0`` the least
significant bit, and qubit ``m`` is bit ``m`` of the index. In
``kron(a, b)`` the left factor owns the more significant qubits.

Everything here is immutable once built; arrays are stored read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

MAX_PIPELINE_QUBITS = 20
MAX_OPERATOR_QUBITS = 12
NORM_TOL = 1e-12
UNITARY_TOL = 1e-12
SCHMIDT_TOL = 1e-10

_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)


def _qubits_for(size: int) -> int:
    n = size.bit_length() - 1
    if size < 1 or (1 << n) != size:
        raise ValueError(f"dimension {size} is not a power of two")
    return n


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm vector of ``2**n_qubits`` complex amplitudes."""

    amplitudes: np.ndarray
    n_qubits: int = field(init=False)

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        n = _qubits_for(amps.size)
        if n > MAX_PIPELINE_QUBITS:
            raise ValueError(f"{n} qubits exceeds the {MAX_PIPELINE_QUBITS}-qubit cap")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
        object.__setattr__(self, "amplitudes", _readonly(amps))
        object.__setattr__(self, "n_qubits", n)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def __len__(self) -> int:
        return self.dim


def basis_state(n_qubits: int, index: int = 0) -> StateVector:
    """Computational basis state ``|index>`` on ``n_qubits`` qubits."""
    if n_qubits < 0 or n_qubits > MAX_PIPELINE_QUBITS:
        raise ValueError(f"n_qubits must be in [0, {MAX_PIPELINE_QUBITS}]")
    if not 0 <= index < (1 << n_qubits):
        raise ValueError(f"index {index} out of range for {n_qubits} qubits")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps)


def product_state(*factors: StateVector) -> StateVector:
    """Tensor product of states; the first factor holds the high qubits."""
    amps = np.ones(1, dtype=np.complex128)
    for f in factors:
        amps = np.kron(amps, f.amplitudes)
    return StateVector(amps)


def inner(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``."""
    if a.dim != b.dim:
        raise ValueError("state dimensions differ")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def same_state(a: StateVector, b: StateVector, tol: float = NORM_TOL) -> bool:
    """Equality up to global phase: ``|<a|b>| = 1`` within ``tol``."""
    return abs(abs(inner(a, b)) - 1.0) <= tol


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Square ``2**n x 2**n`` complex matrix.

    With ``unitary=True`` the constructor checks ``U^dagger U = I``
    entrywise to ``UNITARY_TOL``.
    """

    matrix: np.ndarray
    unitary: bool = False
    n_qubits: int = field(init=False)

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator must be square, got shape {mat.shape}")
        n = _qubits_for(mat.shape[0])
        if n > MAX_OPERATOR_QUBITS:
            raise ValueError(f"{n} qubits exceeds the {MAX_OPERATOR_QUBITS}-qubit operator cap")
        if not np.all(np.isfinite(mat)):
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "matrix", _readonly(mat))
        object.__setattr__(self, "n_qubits", n)
        if self.unitary and not self.is_unitary():
            raise ValueError("operator flagged unitary but U^dagger U != I")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def unitarity_error(self) -> float:
        """Largest entry of ``|U^dagger U - I|``."""
        gram = self.matrix.conj().T @ self.matrix
        return float(np.max(np.abs(gram - np.eye(self.dim))))

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        return self.unitarity_error() < tol

    def dagger(self) -> DenseOperator:
        return DenseOperator(self.matrix.conj().T, unitary=self.unitary)

    def __matmul__(self, other: DenseOperator) -> DenseOperator:
        if not isinstance(other, DenseOperator):
            return NotImplemented
        if self.dim != other.dim:
            raise ValueError("operator dimensions differ")
        return DenseOperator(self.matrix @ other.matrix, unitary=self.unitary and other.unitary)

    def allclose(self, other: DenseOperator, atol: float = 1e-12) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.matrix, other.matrix, rtol=0, atol=atol))


def identity(n_qubits: int) -> DenseOperator:
    return DenseOperator(np.eye(1 << n_qubits), unitary=True)


def diagonal(values: Iterable[complex], unitary: bool = False) -> DenseOperator:
    return DenseOperator(np.diag(np.asarray(list(values), dtype=np.complex128)), unitary=unitary)


def kron(a: DenseOperator, b: DenseOperator) -> DenseOperator:
    """``a (x) b``; ``a`` acts on the high qubits, ``b`` on the low ones."""
    if a.n_qubits + b.n_qubits > MAX_OPERATOR_QUBITS:
        raise ValueError("Kronecker product exceeds the operator cap")
    return DenseOperator(np.kron(a.matrix, b.matrix), unitary=a.unitary and b.unitary)


def hadamard(n: int) -> DenseOperator:
    """The n-fold Hadamard transform ``H (x) ... (x) H``."""
    if n < 1:
        raise ValueError("hadamard needs n >= 1")
    if n > MAX_OPERATOR_QUBITS:
        raise ValueError(f"n = {n} exceeds the operator cap")
    mat = _H
    for _ in range(n - 1):
        mat = np.kron(mat, _H)
    return DenseOperator(mat, unitary=True)


def apply(op: DenseOperator, s: StateVector) -> StateVector:
    """Matrix-vector product ``op |s>``.

    The result must be normalized, so a non-unitary ``op`` that changes the
    norm raises ``ValueError``.
    """
    if op.dim != s.dim:
        raise ValueError(f"operator dimension {op.dim} does not match state dimension {s.dim}")
    return StateVector(op.matrix @ s.amplitudes)


def apply_single_qubit(gate: np.ndarray, s: StateVector, qubits: Optional[Iterable[int]] = None) -> StateVector:
    """Apply a 2x2 ``gate`` to each listed qubit (default: all) of ``s``.

    Works on the amplitude tensor directly, so it stays cheap up to the
    pipeline cap where dense ``2**n`` operators are out of reach.
    """
    gate = np.asarray(gate, dtype=np.complex128)
    if gate.shape != (2, 2):
        raise ValueError("gate must be 2x2")
    n = s.n_qubits
    targets = range(n) if qubits is None else list(qubits)
    psi = s.amplitudes.reshape((2,) * n) if n else s.amplitudes.copy()
    for q in targets:
        if not 0 <= q < n:
            raise ValueError(f"qubit {q} out of range for {n} qubits")
        axis = n - 1 - q
        psi = np.moveaxis(np.tensordot(gate, psi, axes=([1], [axis])), 0, axis)
    return StateVector(psi.reshape(-1))


def hadamard_each(s: StateVector, qubits: Optional[Iterable[int]] = None) -> StateVector:
    """Hadamard on each listed qubit; equals ``apply(hadamard(n), s)`` for all qubits."""
    return apply_single_qubit(_H, s, qubits)


def apply_diagonal(values: np.ndarray, s: StateVector) -> StateVector:
    """Apply the diagonal operator with entries ``values`` without forming it."""
    values = np.asarray(values)
    if values.shape != (s.dim,):
        raise ValueError("diagonal length does not match state dimension")
    return StateVector(values * s.amplitudes)


def prob_zero(s: StateVector) -> float:
    """Expectation of the projector ``|0...0><0...0|``."""
    return float(abs(s.amplitudes[0]) ** 2)


def prob_qubits_zero(s: StateVector, qubits: Iterable[int]) -> float:
    """Probability that every listed qubit reads 0.

    Equivalent to the expectation of ``|0..0><0..0|`` on those qubits
    tensored with identity on the rest, summed over the other qubits.
    """
    mask = 0
    for q in qubits:
        if not 0 <= q < s.n_qubits:
            raise ValueError(f"qubit {q} out of range")
        mask |= 1 << q
    idx = np.arange(s.dim)
    probs = np.abs(s.amplitudes[(idx & mask) == 0]) ** 2
    return float(np.sum(probs))


@dataclass(frozen=True)
class QubitCut:
    """Bipartition of qubits ``0..n-1`` into two non-empty sides."""

    side_a: frozenset[int]
    side_b: frozenset[int]

    def __post_init__(self) -> None:
        a, b = frozenset(self.side_a), frozenset(self.side_b)
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)
        if not a or not b:
            raise ValueError("both sides of a cut must be non-empty")
        if a & b:
            raise ValueError(f"cut sides overlap on {sorted(a & b)}")
        if a | b != frozenset(range(len(a) + len(b))):
            raise ValueError("cut sides must cover qubits 0..n-1 exactly")

    @classmethod
    def of(cls, n: int, side_a: Iterable[int]) -> QubitCut:
        """Cut with ``side_a`` against the remaining qubits of an ``n``-qubit register."""
        a = frozenset(side_a)
        if any(not 0 <= q < n for q in a):
            raise ValueError(f"qubits {sorted(a)} out of range for n = {n}")
        return cls(a, frozenset(range(n)) - a)

    @classmethod
    def single(cls, n: int, m: int) -> QubitCut:
        return cls.of(n, [m])

    @property
    def n(self) -> int:
        return len(self.side_a) + len(self.side_b)

    def side_with(self, qubit: int) -> str:
        return "a" if qubit in self.side_a else "b"


def split_by_cut(values: np.ndarray, cut: QubitCut) -> np.ndarray:
    """Reshape a length-``2**n`` vector into a ``2**|a| x 2**|b|`` matrix.

    Row index enumerates side ``a`` and column index side ``b``; within a
    side the lowest-numbered qubit is the least significant bit.
    """
    n = cut.n
    values = np.asarray(values)
    if values.shape != (1 << n,):
        raise ValueError(f"vector of length {values.size} does not match a {n}-qubit cut")
    tensor = values.reshape((2,) * n)
    axes_a = [n - 1 - q for q in sorted(cut.side_a, reverse=True)]
    axes_b = [n - 1 - q for q in sorted(cut.side_b, reverse=True)]
    return tensor.transpose(axes_a + axes_b).reshape(1 << len(axes_a), 1 << len(axes_b))


def join_by_cut(matrix: np.ndarray, cut: QubitCut) -> np.ndarray:
    """Inverse of :func:`split_by_cut`."""
    n = cut.n
    axes_a = [n - 1 - q for q in sorted(cut.side_a, reverse=True)]
    axes_b = [n - 1 - q for q in sorted(cut.side_b, reverse=True)]
    tensor = np.asarray(matrix).reshape((2,) * n)
    return tensor.transpose(np.argsort(axes_a + axes_b)).reshape(-1)


def schmidt_rank(s: StateVector, cut: QubitCut, tol: float = SCHMIDT_TOL) -> int:
    """Number of singular values above ``tol`` across ``cut``; 1 means product."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if cut.n != s.n_qubits:
        raise ValueError(f"cut is over {cut.n} qubits, state has {s.n_qubits}")
    sv = np.linalg.svd(split_by_cut(s.amplitudes, cut), compute_uv=False)
    return int(np.count_nonzero(sv > tol))
