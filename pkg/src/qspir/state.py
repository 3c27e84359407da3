"""Dense state-vector and density-matrix backend for small qubit registers.

Basis ordering: the qubit at position 0 of ``QuantumRegister.qubits`` is the
most significant bit of the computational-basis index. Measured qubits are
removed from the register; a register with no qubits holds a single
amplitude (a global phase).

Every operation returns a new value. RNG state is always passed explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import CapacityError
from .pauli import LABELS, SignedWeyl, WeylLabel, matrix

__all__ = [
    "MAX_QUBITS",
    "NORM_TOL",
    "EIGEN_CLIP",
    "QuantumRegister",
    "DensityMatrix",
    "BellOutcome",
    "bell_vector",
    "bell_basis",
    "make_bell_pair",
    "apply_weyl",
    "apply_unitary",
    "bell_pvm_outcomes",
    "sample_bell_pvm",
    "partial_trace",
    "von_neumann_entropy",
    "holevo_information",
    "classical_holevo",
    "trace_distance",
    "trace_power",
    "random_unitary",
    "random_pure_state",
]

MAX_QUBITS = 24
NORM_TOL = 1e-12
EIGEN_CLIP = 1e-10
# Born probabilities below this are treated as exactly zero branches.
_ZERO_PROB = 1e-20


def _check_capacity(n: int) -> None:
    if n > MAX_QUBITS:
        raise CapacityError(f"dense register of {n} qubits exceeds the {MAX_QUBITS}-qubit cap")


@dataclass(frozen=True, eq=False)
class QuantumRegister:
    """A normalized pure state over named qubits."""

    qubits: tuple[str, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        qubits = tuple(self.qubits)
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"duplicate qubit names in {qubits}")
        _check_capacity(len(qubits))
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2 ** len(qubits):
            raise ValueError(f"{amps.size} amplitudes for {len(qubits)} qubits")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"register is not normalized (norm^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def empty(cls, phase: complex = 1.0) -> QuantumRegister:
        return cls((), np.array([phase], dtype=complex))

    @classmethod
    def from_vector(cls, qubits: Sequence[str], vector) -> QuantumRegister:
        """Build a register, normalizing ``vector`` first."""
        v = np.asarray(vector, dtype=complex).reshape(-1)
        return cls(tuple(qubits), v / np.linalg.norm(v))

    @classmethod
    def basis_state(cls, qubits: Sequence[str], bits: Sequence[int]) -> QuantumRegister:
        index = 0
        for bit in bits:
            index = (index << 1) | int(bit)
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[index] = 1.0
        return cls(tuple(qubits), amps)

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def index(self, qubit: str) -> int:
        try:
            return self.qubits.index(qubit)
        except ValueError:
            raise KeyError(f"unknown qubit {qubit!r}; register holds {self.qubits}") from None

    def tensor(self, other: QuantumRegister) -> QuantumRegister:
        """Joint register ``self (x) other``."""
        return QuantumRegister(self.qubits + other.qubits, np.kron(self.amplitudes, other.amplitudes))

    def permuted(self, order: Sequence[str]) -> QuantumRegister:
        """Same state with qubits listed in ``order``."""
        order = tuple(order)
        if sorted(order) != sorted(self.qubits):
            raise ValueError(f"{order} is not a permutation of {self.qubits}")
        if order == self.qubits or self.n_qubits == 0:
            return self
        t = self.amplitudes.reshape((2,) * self.n_qubits)
        t = np.transpose(t, [self.index(q) for q in order])
        return QuantumRegister(order, t.reshape(-1))

    def renamed(self, mapping: dict[str, str]) -> QuantumRegister:
        return QuantumRegister(tuple(mapping.get(q, q) for q in self.qubits), self.amplitudes)

    def density_matrix(self) -> DensityMatrix:
        return DensityMatrix(self.qubits, np.outer(self.amplitudes, self.amplitudes.conj()))

    def reduced(self, keep: Sequence[str]) -> DensityMatrix:
        """Reduced state on ``keep`` computed without forming the full density matrix."""
        keep = [q for q in self.qubits if q in set(keep)]
        missing = set(keep) - set(self.qubits)
        if missing:
            raise KeyError(f"unknown qubits {sorted(missing)}")
        rest = [q for q in self.qubits if q not in keep]
        m = self.permuted(tuple(keep) + tuple(rest)).amplitudes.reshape(2 ** len(keep), -1)
        return DensityMatrix(tuple(keep), m @ m.conj().T)

    def allclose(self, other: QuantumRegister, atol: float = 1e-12, up_to_phase: bool = False) -> bool:
        """Entrywise comparison after aligning qubit order."""
        if set(self.qubits) != set(other.qubits):
            return False
        a = self.amplitudes
        b = other.permuted(self.qubits).amplitudes
        if up_to_phase:
            overlap = np.vdot(b, a)
            if abs(overlap) < NORM_TOL:
                return False
            b = b * (overlap / abs(overlap))
        return bool(np.allclose(a, b, atol=atol, rtol=0))

    def dump(self) -> str:
        """Nonzero amplitudes as ``|bits>: value`` lines, MSB = first qubit."""
        lines = [f"qubits: {' '.join(self.qubits) or '(none)'}"]
        for idx, amp in enumerate(self.amplitudes):
            if abs(amp) > 1e-15:
                bits = format(idx, f"0{self.n_qubits}b") if self.n_qubits else ""
                lines.append(f"|{bits}>: {amp.real:+.6f}{amp.imag:+.6f}j")
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace matrix over named qubits or a plain dimension.

    ``qubits`` may also hold non-qubit subsystem names when the matrix is
    built directly (e.g. classical registers embedded as basis states); in
    that case ``dims`` records each subsystem's dimension.
    """

    qubits: tuple[str, ...]
    matrix: np.ndarray
    dims: tuple[int, ...] | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        dims = tuple(self.dims) if self.dims is not None else (2,) * len(self.qubits)
        if len(dims) != len(self.qubits) or int(np.prod(dims, dtype=np.int64)) != m.shape[0]:
            raise ValueError(f"dimension {m.shape[0]} does not match subsystems {self.qubits} with dims {dims}")
        if abs(np.trace(m).real - 1.0) > NORM_TOL * max(1, m.shape[0]):
            raise ValueError(f"trace is {np.trace(m)!r}, expected 1")
        if not np.allclose(m, m.conj().T, atol=1e-12, rtol=0):
            raise ValueError("density matrix is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_probabilities(cls, probs, names: Sequence[str] = ("x",), dims: Sequence[int] | None = None):
        """Diagonal (classical) state with the given distribution."""
        p = np.asarray(probs, dtype=float).reshape(-1)
        return cls(tuple(names), np.diag(p).astype(complex), tuple(dims) if dims else (p.size,))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_diagonal(self) -> bool:
        m = self.matrix
        return not np.any(m - np.diag(np.diagonal(m)))

    def eigenvalues(self) -> np.ndarray:
        if self.is_diagonal():
            return np.sort(np.diagonal(self.matrix).real)
        return np.linalg.eigvalsh(self.matrix)

    def is_psd(self, tol: float = EIGEN_CLIP) -> bool:
        return bool(self.eigenvalues().min() >= -tol)


class BellOutcome(NamedTuple):
    outcome: WeylLabel
    probability: float
    state: QuantumRegister | None


def bell_vector(label: WeylLabel) -> np.ndarray:
    """``(I (x) W(label))|Phi>`` as a length-4 vector."""
    phi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return np.kron(np.eye(2), matrix(label)) @ phi


def bell_basis() -> np.ndarray:
    """4x4 unitary whose column ``int(label)`` is ``bell_vector(label)``."""
    return np.column_stack([bell_vector(lab) for lab in LABELS])


def make_bell_pair(q1: str, q2: str) -> QuantumRegister:
    if q1 == q2:
        raise ValueError(f"a Bell pair needs two distinct qubits, got {q1!r} twice")
    return QuantumRegister((q1, q2), bell_vector(LABELS[0]))


def apply_unitary(reg: QuantumRegister, qubit: str, u: np.ndarray) -> QuantumRegister:
    """Apply a single-qubit matrix ``u`` to ``qubit``."""
    axis = reg.index(qubit)
    t = reg.amplitudes.reshape((2,) * reg.n_qubits)
    t = np.moveaxis(np.tensordot(u, t, axes=([1], [axis])), 0, axis)
    return QuantumRegister(reg.qubits, t.reshape(-1))


def apply_weyl(reg: QuantumRegister, qubit: str, op: SignedWeyl | WeylLabel) -> QuantumRegister:
    if isinstance(op, WeylLabel):
        op = SignedWeyl(0, op)
    if op.label == LABELS[0]:
        reg.index(qubit)
        if not op.sign:
            return reg
        return QuantumRegister(reg.qubits, -reg.amplitudes)
    return apply_unitary(reg, qubit, matrix(op))


def bell_pvm_outcomes(reg: QuantumRegister, q1: str, q2: str) -> list[BellOutcome]:
    """All four branches of the Bell PVM on ``(q1, q2)``.

    The post-measurement state of branch ``g`` is ``(<v_g| (x) I) psi / sqrt(p)``
    with ``v_g = (I (x) W(g))|Phi>``; the measured qubits are removed. This
    fixes the phase of every post-state exactly. Zero-probability branches
    carry ``state=None``.
    """
    if q1 == q2:
        raise ValueError("Bell measurement needs two distinct qubits")
    i1, i2 = reg.index(q1), reg.index(q2)
    rest = tuple(q for q in reg.qubits if q not in (q1, q2))
    t = reg.amplitudes.reshape((2,) * reg.n_qubits)
    t = np.moveaxis(t, (i1, i2), (0, 1)).reshape(4, -1)
    out = []
    for lab in LABELS:
        post = bell_vector(lab).conj() @ t
        p = float(np.vdot(post, post).real)
        if p <= _ZERO_PROB:
            out.append(BellOutcome(lab, 0.0, None))
        else:
            out.append(BellOutcome(lab, p, QuantumRegister(rest, post / np.sqrt(p))))
    return out


def sample_bell_pvm(reg: QuantumRegister, q1: str, q2: str, rng) -> tuple[WeylLabel, QuantumRegister]:
    """Draw one Bell-PVM branch with its Born probability.

    ``rng`` is a seed or a ``numpy.random.Generator``.
    """
    rng = np.random.default_rng(rng)
    branches = bell_pvm_outcomes(reg, q1, q2)
    probs = np.array([b.probability for b in branches])
    choice = int(rng.choice(4, p=probs / probs.sum()))
    return branches[choice].outcome, branches[choice].state


def partial_trace(dm: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the subsystems in ``keep`` (listed in ``dm`` order)."""
    keep = set(keep)
    unknown = keep - set(dm.qubits)
    if unknown:
        raise KeyError(f"unknown subsystems {sorted(unknown)}")
    kept = [i for i, q in enumerate(dm.qubits) if q in keep]
    traced = [i for i, q in enumerate(dm.qubits) if q not in keep]
    if not traced:
        return dm
    n = len(dm.dims)
    t = dm.matrix.reshape(dm.dims + dm.dims)
    t = np.transpose(t, kept + traced + [n + i for i in kept] + [n + i for i in traced])
    dk = int(np.prod([dm.dims[i] for i in kept], dtype=np.int64))
    dt = int(np.prod([dm.dims[i] for i in traced], dtype=np.int64))
    reduced = np.einsum("ajbj->ab", t.reshape(dk, dt, dk, dt))
    return DensityMatrix(tuple(dm.qubits[i] for i in kept), reduced, tuple(dm.dims[i] for i in kept))


def _entropy_of_spectrum(eigs: np.ndarray) -> float:
    eigs = np.where(eigs > EIGEN_CLIP, eigs, 0.0)
    nz = eigs[eigs > 0]
    return float(-np.sum(nz * np.log2(nz)))


def von_neumann_entropy(dm: DensityMatrix | np.ndarray) -> float:
    """Entropy in bits; eigenvalues below 1e-10 count as zero."""
    if not isinstance(dm, DensityMatrix):
        m = np.asarray(dm, dtype=complex)
        if not np.allclose(m, m.conj().T, atol=1e-12, rtol=0):
            raise ValueError("entropy requires a Hermitian matrix")
        return _entropy_of_spectrum(np.linalg.eigvalsh(m))
    return _entropy_of_spectrum(dm.eigenvalues())


def holevo_information(ensemble: Sequence[tuple[float, DensityMatrix]]) -> float:
    """``S(sum_i p_i rho_i) - sum_i p_i S(rho_i)`` in bits."""
    if not ensemble:
        raise ValueError("empty ensemble")
    probs = np.array([float(p) for p, _ in ensemble])
    if abs(probs.sum() - 1.0) > NORM_TOL or np.any(probs < 0):
        raise ValueError(f"ensemble probabilities must form a distribution, sum = {probs.sum()!r}")
    ref = ensemble[0][1]
    for _, rho in ensemble[1:]:
        if rho.dims != ref.dims or rho.qubits != ref.qubits:
            raise ValueError("ensemble states live on different registers")
    avg = sum(p * rho.matrix for p, (_, rho) in zip(probs, ensemble))
    avg_dm = DensityMatrix(ref.qubits, avg, ref.dims)
    chi = von_neumann_entropy(avg_dm) - sum(p * von_neumann_entropy(rho) for p, (_, rho) in zip(probs, ensemble))
    if chi < -1e-9:
        raise ArithmeticError(f"negative Holevo quantity {chi!r}")
    return max(chi, 0.0)


def classical_holevo(conditionals, weights=None) -> np.ndarray:
    """Holevo quantity of commuting (diagonal) ensembles, batched.

    ``conditionals[..., i, :]`` is the diagonal of ``rho_i``; ``weights``
    (default uniform) are the ensemble probabilities over axis ``-2``. Equals
    ``holevo_information`` on the corresponding diagonal density matrices
    without materializing them. Returns one value per leading index.
    """
    p = np.asarray(conditionals, dtype=float)
    if p.ndim < 2:
        raise ValueError("need at least a (members, outcomes) array")
    w = np.full(p.shape[-2], 1.0 / p.shape[-2]) if weights is None else np.asarray(weights, dtype=float)
    if abs(w.sum() - 1.0) > NORM_TOL or np.any(w < 0):
        raise ValueError(f"ensemble probabilities must form a distribution, sum = {w.sum()!r}")
    avg = np.einsum("i,...ij->...j", w, p)
    chi = _entropy_rows(avg) - np.einsum("i,...i->...", w, _entropy_rows(p))
    if np.any(chi < -1e-9):
        raise ArithmeticError(f"negative Holevo quantity {chi.min()!r}")
    return np.maximum(chi, 0.0)


def _entropy_rows(p: np.ndarray) -> np.ndarray:
    p = np.where(p > EIGEN_CLIP, p, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -terms.sum(axis=-1)


def trace_distance(rho: DensityMatrix | np.ndarray, sigma: DensityMatrix | np.ndarray) -> float:
    """``||rho - sigma||_1 / 2``."""
    a = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    b = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma)
    diff = a - b
    if not np.any(diff - np.diag(np.diagonal(diff))):
        return float(0.5 * np.abs(np.diagonal(diff)).sum())
    return float(0.5 * np.abs(np.linalg.eigvalsh(diff)).sum())


def trace_power(rho: DensityMatrix | np.ndarray, s: float) -> float:
    """``Tr rho^s`` for a positive semidefinite ``rho``."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    eigs = np.linalg.eigvalsh(m)
    eigs = eigs[eigs > EIGEN_CLIP]
    return float(np.sum(eigs**s))


def random_unitary(d: int, rng) -> np.ndarray:
    """Haar-random ``d x d`` unitary from QR of a complex Gaussian matrix."""
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_pure_state(d: int, rng) -> np.ndarray:
    """Unit vector drawn from the unitarily invariant measure on C^d."""
    rng = np.random.default_rng(rng)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)
