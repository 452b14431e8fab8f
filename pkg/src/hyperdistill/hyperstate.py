"""Joint polarisation x energy-time state of a single photon pair.

The analytic representation is a 4x4 weight table indexed by
``(pol_label, et_label)``. The 16-dimensional matrix uses the qubit order
``(pol_A, pol_B, path_A, path_B)``.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping

import numpy as np

from .bellcore import ATOL, BellLabel, BellWeights, bell_basis, check_density_matrix


class Subspace(enum.Enum):
    POL = "pol"
    ENERGY_TIME = "et"


class HyperState:
    """Bell x Bell diagonal state with an optional cached full matrix.

    ``table[i, j]`` is the weight of ``|B_i>_pol |B_j>_et``.
    """

    __slots__ = ("_table", "_full")

    def __init__(self, table, full: np.ndarray | None = None):
        t = np.array(table, dtype=float)
        if t.shape != (4, 4):
            raise ValueError(f"Bell table must be 4x4, got {t.shape}")
        if np.any(t < -ATOL) or np.any(t > 1 + ATOL):
            raise ValueError("Bell table entries must lie in [0, 1]")
        if abs(t.sum() - 1) > ATOL:
            raise ValueError(f"Bell table must sum to 1, got {t.sum()!r}")
        t.setflags(write=False)
        self._table = t
        self._full = None
        if full is not None:
            full = check_density_matrix(full)
            if not np.allclose(_bell_bell_diagonal(full), t, rtol=0, atol=1e-10):
                raise ValueError("full matrix disagrees with the Bell table")
            full.setflags(write=False)
            self._full = full

    @classmethod
    def from_mapping(cls, weights: Mapping[tuple[BellLabel, BellLabel], float]) -> HyperState:
        t = np.zeros((4, 4))
        for (i, j), w in weights.items():
            t[BellLabel(i), BellLabel(j)] += w
        return cls(t)

    @classmethod
    def from_full_matrix(cls, rho: np.ndarray) -> HyperState:
        """Keep only the Bell x Bell diagonal of ``rho``."""
        rho = check_density_matrix(rho)
        if rho.shape != (16, 16):
            raise ValueError("expected a 16x16 matrix")
        t = _bell_bell_diagonal(rho)
        t[(t < 0) & (t > -ATOL)] = 0.0
        return cls(t, full=rho)

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def full(self) -> np.ndarray | None:
        return self._full

    def items(self):
        """Non-zero entries as ``((pol, et), weight)`` pairs in row-major order."""
        for i, j in zip(*np.nonzero(self._table)):
            yield (BellLabel(i), BellLabel(j)), float(self._table[i, j])

    def __getitem__(self, key: tuple[BellLabel, BellLabel]) -> float:
        i, j = key
        return float(self._table[BellLabel(i), BellLabel(j)])

    def isclose(self, other: HyperState, atol: float = ATOL) -> bool:
        return bool(np.allclose(self._table, other.table, rtol=0, atol=atol))

    def __repr__(self) -> str:
        body = ", ".join(f"({p.symbol},{e.symbol}): {w:.6g}" for (p, e), w in self.items())
        return f"HyperState({{{body}}})"


def product_state(rho_pol: BellWeights, rho_et: BellWeights) -> HyperState:
    return HyperState(np.outer(rho_pol.array, rho_et.array))


def marginal(state: HyperState, which: Subspace) -> BellWeights:
    """Bell weights of one subspace with the other traced out."""
    axis = 1 if Subspace(which) is Subspace.POL else 0
    return BellWeights.from_array(state.table.sum(axis=axis))


def _product_basis() -> np.ndarray:
    b = bell_basis()
    # row 4*i + j is |B_i>_pol (x) |B_j>_et
    return np.einsum("ia,jb->ijab", b, b).reshape(16, 16)


_PRODUCT_BASIS = _product_basis()
_PRODUCT_BASIS.setflags(write=False)


def bell_product_vector(pol: BellLabel, et: BellLabel) -> np.ndarray:
    return _PRODUCT_BASIS[4 * BellLabel(pol) + BellLabel(et)].copy()


def _bell_bell_diagonal(rho: np.ndarray) -> np.ndarray:
    b = _PRODUCT_BASIS
    d = np.einsum("ka,ab,kb->k", b.conj(), rho, b)
    return np.real(d).reshape(4, 4)


def to_full_matrix(state: HyperState) -> np.ndarray:
    """16x16 density matrix in the ``(pol_A, pol_B, path_A, path_B)`` basis."""
    if state.full is not None:
        return state.full.copy()
    b = _PRODUCT_BASIS
    return np.einsum("k,ka,kb->ab", state.table.ravel(), b, b.conj())
