"""Bell basis, Pauli operators and Bell-diagonal two-qubit states.

Computational basis ordering is ``|ab>`` with ``a`` the first qubit, so the
index of ``|01>`` is 1 and means qubit A in 0, qubit B in 1.
"""

from __future__ import annotations

import enum
from collections.abc import Iterator, Mapping

import numpy as np

ATOL = 1e-12
EIG_FLOOR = -1e-10


class BellLabel(enum.IntEnum):
    PHI_PLUS = 0
    PHI_MINUS = 1
    PSI_PLUS = 2
    PSI_MINUS = 3

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]


_SYMBOLS = {
    BellLabel.PHI_PLUS: "Φ+",
    BellLabel.PHI_MINUS: "Φ-",
    BellLabel.PSI_PLUS: "Ψ+",
    BellLabel.PSI_MINUS: "Ψ-",
}


class PauliAxis(enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"


_S = 1 / np.sqrt(2)
_BELL_VECTORS = np.array(
    [
        [_S, 0, 0, _S],
        [_S, 0, 0, -_S],
        [0, _S, _S, 0],
        [0, _S, -_S, 0],
    ],
    dtype=complex,
)
_BELL_VECTORS.setflags(write=False)

IDENTITY = np.eye(2, dtype=complex)
PAULI = {
    PauliAxis.X: np.array([[0, 1], [1, 0]], dtype=complex),
    PauliAxis.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    PauliAxis.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}
for _m in PAULI.values():
    _m.setflags(write=False)


def bell_state(label: BellLabel) -> np.ndarray:
    """Return the 4-amplitude state vector of a Bell state."""
    return _BELL_VECTORS[BellLabel(label)].copy()


def bell_basis() -> np.ndarray:
    """Rows are the Bell vectors in :class:`BellLabel` order."""
    return _BELL_VECTORS.copy()


class BellWeights(Mapping):
    """Immutable probability vector over the four Bell states.

    Behaves as a read-only mapping ``BellLabel -> float``. Missing labels
    have weight 0.
    """

    __slots__ = ("_p",)

    def __init__(self, weights: Mapping[BellLabel, float] | None = None, **by_name: float):
        p = np.zeros(4)
        for label, w in (weights or {}).items():
            p[BellLabel(label)] += float(w)
        for name, w in by_name.items():
            p[BellLabel[name.upper()]] += float(w)
        _check_probabilities(p)
        p.setflags(write=False)
        self._p = p

    @classmethod
    def from_array(cls, p) -> BellWeights:
        return cls(dict(zip(BellLabel, np.asarray(p, dtype=float))))

    @property
    def array(self) -> np.ndarray:
        return self._p

    def __getitem__(self, label) -> float:
        return float(self._p[BellLabel(label)])

    def __iter__(self) -> Iterator[BellLabel]:
        return iter(BellLabel)

    def __len__(self) -> int:
        return 4

    def __eq__(self, other) -> bool:
        if isinstance(other, BellWeights):
            return bool(np.array_equal(self._p, other._p))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._p.tobytes())

    def isclose(self, other: BellWeights, atol: float = ATOL) -> bool:
        return bool(np.allclose(self._p, other.array, rtol=0, atol=atol))

    def __repr__(self) -> str:
        parts = ", ".join(f"{l.symbol}: {w:.6g}" for l, w in zip(BellLabel, self._p) if w)
        return f"BellWeights({{{parts}}})"


def _check_probabilities(p: np.ndarray) -> None:
    if np.any(p < -ATOL) or np.any(p > 1 + ATOL):
        raise ValueError(f"Bell weights must lie in [0, 1], got {p.tolist()}")
    if abs(p.sum() - 1.0) > ATOL:
        raise ValueError(f"Bell weights must sum to 1, got {p.sum()!r}")


def check_density_matrix(rho: np.ndarray, atol: float = ATOL) -> np.ndarray:
    """Validate a 4x4 or 16x16 density matrix and return it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in (4, 16):
        raise ValueError(f"expected a 4x4 or 16x16 matrix, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, rtol=0, atol=atol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real!r}, expected 1")
    if np.linalg.eigvalsh(rho).min() < EIG_FLOOR:
        raise ValueError("density matrix has negative eigenvalues")
    return rho


def bell_diagonal(weights: BellWeights | Mapping[BellLabel, float]) -> np.ndarray:
    """Density matrix ``sum_i w_i |B_i><B_i|``."""
    if not isinstance(weights, BellWeights):
        weights = BellWeights(weights)
    return np.einsum("i,ia,ib->ab", weights.array, _BELL_VECTORS, _BELL_VECTORS.conj())


def bell_decompose(rho: np.ndarray) -> np.ndarray:
    """Full 4x4 matrix of ``rho`` in the Bell basis (rows/cols in label order)."""
    b = _BELL_VECTORS
    return b.conj() @ np.asarray(rho) @ b.T


def bell_weights_of(rho: np.ndarray, atol: float = ATOL) -> BellWeights:
    """Diagonal Bell-basis weights of ``rho``; off-diagonal terms are ignored."""
    return BellWeights.from_array(_clip(np.real(np.diag(bell_decompose(rho))), atol))


def _clip(p: np.ndarray, atol: float) -> np.ndarray:
    # tiny negative round-off from diagonal extraction
    return np.where((p < 0) & (p > -atol), 0.0, p)


def visibility(rho: np.ndarray, axis: PauliAxis) -> float:
    """Correlation ``Tr[rho (s_i x s_i)]`` along one Pauli axis."""
    s = PAULI[PauliAxis(axis)]
    v = np.trace(np.asarray(rho) @ np.kron(s, s))
    if abs(v.imag) > ATOL:
        raise ValueError("visibility has an imaginary part; input is not Hermitian")
    return float(v.real)


def fidelity_from_visibilities(vxx: float, vyy: float, vzz: float) -> float:
    """Fidelity to Φ+ from the three correlation visibilities."""
    return (1 + vxx - vyy + vzz) / 4


def fidelity(rho: np.ndarray, target: BellLabel = BellLabel.PHI_PLUS) -> float:
    """Overlap ``<target|rho|target>``."""
    v = _BELL_VECTORS[BellLabel(target)]
    return float(np.real(v.conj() @ np.asarray(rho) @ v))
