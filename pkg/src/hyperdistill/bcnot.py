"""Bilateral CNOT between polarisation (control) and path (target).

Each polarising beam splitter flips the photon's path when it is V
polarised. On Bell x Bell product states the joint action is a permutation
of the 16 basis pairs, computed here once from the explicit unitary.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .bellcore import BellLabel
from .hyperstate import HyperState, bell_product_vector

# qubit positions in the 16-dim basis
POL_A, POL_B, PATH_A, PATH_B = range(4)

TransferTable = MappingProxyType  # (pol, et) -> (pol, et)


def cnot_permutation(control: int, target: int, n_qubits: int = 4) -> np.ndarray:
    """Permutation matrix of a CNOT on ``n_qubits`` (qubit 0 is most significant)."""
    dim = 2**n_qubits
    u = np.zeros((dim, dim))
    for k in range(dim):
        bits = [(k >> (n_qubits - 1 - q)) & 1 for q in range(n_qubits)]
        if bits[control]:
            bits[target] ^= 1
        out = sum(b << (n_qubits - 1 - q) for q, b in enumerate(bits))
        u[out, k] = 1.0
    return u


def bcnot_unitary() -> np.ndarray:
    """16x16 unitary ``CNOT_A (x) CNOT_B`` in the ``(pol_A, pol_B, path_A, path_B)`` basis."""
    return cnot_permutation(POL_B, PATH_B) @ cnot_permutation(POL_A, PATH_A)


def path_flip(side: str) -> np.ndarray:
    """16x16 X gate on one party's path qubit."""
    q = {"A": PATH_A, "B": PATH_B}[side]
    x = np.array([[0, 1], [1, 0]])
    ops = [np.eye(2)] * 4
    ops[q] = x
    return functools.reduce(np.kron, ops)


def _identify(vec: np.ndarray, tol: float = 1e-10) -> tuple[BellLabel, BellLabel]:
    for p in BellLabel:
        for e in BellLabel:
            if abs(abs(np.vdot(bell_product_vector(p, e), vec)) - 1) < tol:
                return p, e
    raise RuntimeError("bCNOT image is not a Bell x Bell product vector")


@functools.lru_cache(maxsize=None)
def build_transfer_table() -> TransferTable:
    """Map each ``(pol, et)`` Bell pair to its image under the bilateral CNOT.

    Built by conjugating every Bell x Bell vector with the explicit unitary
    and matching the image up to a global phase.
    """
    u = bcnot_unitary()
    table = {}
    for p in BellLabel:
        for e in BellLabel:
            table[(p, e)] = _identify(u @ bell_product_vector(p, e))
    if sorted(table.values()) != sorted(table):
        raise RuntimeError("bCNOT transfer table is not a bijection")
    return MappingProxyType(table)


@functools.lru_cache(maxsize=None)
def _transfer_index() -> np.ndarray:
    # flat source index for every flat destination index
    src = np.empty(16, dtype=int)
    for (p, e), (p2, e2) in build_transfer_table().items():
        src[4 * p2 + e2] = 4 * p + e
    return src


def _permute(table: np.ndarray) -> np.ndarray:
    return table.ravel()[_transfer_index()].reshape(4, 4)


def apply_bcnot(state: HyperState) -> HyperState:
    return HyperState(_permute(state.table))


# X on either path qubit exchanges Φ± <-> Ψ± (up to sign)
_PATH_FLIP_ET = np.array([2, 3, 0, 1])


@dataclass(frozen=True)
class GateImperfection:
    """Per-photon probability that a PBS routes to the wrong output port."""

    epsilon: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 0.5:
            raise ValueError(f"epsilon must be in [0, 0.5], got {self.epsilon!r}")

    @property
    def flip_patterns(self) -> tuple[tuple[float, int], ...]:
        """``(probability, number of flipped sides)`` for no/A/B/both flips."""
        e = self.epsilon
        return ((1 - e) ** 2, 0), (e * (1 - e), 1), (e * (1 - e), 1), (e * e, 2)


def apply_imperfect_bcnot(state: HyperState, imp: GateImperfection | float) -> HyperState:
    """Bilateral CNOT where each photon independently takes the wrong port.

    A wrong-port event is a path flip on that side ahead of the ideal gate.
    A single flip swaps the energy-time label Φ± <-> Ψ±; a double flip is
    the identity on Bell labels.
    """
    if not isinstance(imp, GateImperfection):
        imp = GateImperfection(imp)
    if imp.epsilon == 0.0:
        return apply_bcnot(state)
    t = state.table
    flipped = t[:, _PATH_FLIP_ET]
    q = 2 * imp.epsilon * (1 - imp.epsilon)
    mixed = (1 - q) * t + q * flipped
    return HyperState(_permute(mixed))
