"""Noise channels for the polarisation and energy-time subspaces."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .bellcore import PAULI, BellLabel, BellWeights, IDENTITY, PauliAxis, bell_decompose, bell_state


class PolErrorType(enum.Enum):
    BIT_FLIP = "bit_flip"
    BIT_PHASE_FLIP = "bit_phase_flip"

    @property
    def error_label(self) -> BellLabel:
        if self is PolErrorType.BIT_FLIP:
            return BellLabel.PSI_PLUS
        return BellLabel.PSI_MINUS


def _check_fidelity(f: float) -> float:
    f = float(f)
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fidelity must be in [0, 1], got {f!r}")
    return f


def pol_noise(kind: PolErrorType, f: float) -> BellWeights:
    """Φ+ mixed with a single Pauli error state at fidelity ``f``."""
    f = _check_fidelity(f)
    kind = PolErrorType(kind)
    return BellWeights({BellLabel.PHI_PLUS: f, kind.error_label: 1.0 - f})


def et_noise(f: float) -> BellWeights:
    """Φ+ mixed with the balanced Ψ+/Ψ- background from the side peaks."""
    f = _check_fidelity(f)
    bg = (1.0 - f) / 2
    return BellWeights({BellLabel.PHI_PLUS: f, BellLabel.PSI_PLUS: bg, BellLabel.PSI_MINUS: bg})


@dataclass(frozen=True)
class WaveplateSetting:
    axis: PauliAxis
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "axis", PauliAxis(self.axis))
        if not -math.pi <= self.theta <= math.pi:
            raise ValueError(f"theta must be in [-pi, pi], got {self.theta!r}")


def rotation(axis: PauliAxis, theta: float) -> np.ndarray:
    """Single-qubit rotation ``exp(-i theta s/2)``."""
    return math.cos(theta / 2) * IDENTITY - 1j * math.sin(theta / 2) * PAULI[PauliAxis(axis)]


def rotated_source(setting: WaveplateSetting, average_sign: bool = True) -> np.ndarray:
    """Φ+ with Bob's qubit rotated, optionally averaged over ``±theta``."""
    psi = bell_state(BellLabel.PHI_PLUS)
    thetas = (setting.theta, -setting.theta) if average_sign else (setting.theta,)
    rho = np.zeros((4, 4), dtype=complex)
    for th in thetas:
        out = np.kron(IDENTITY, rotation(setting.axis, th)) @ psi
        rho += np.outer(out, out.conj())
    return rho / len(thetas)


def waveplate_channel(setting: WaveplateSetting, average_sign: bool = True) -> BellWeights:
    """Bell weights produced by the one-sided waveplate rotation on Φ+.

    Only the sign-averaged X and Y settings give Bell-diagonal output; the
    unaveraged case keeps Bell-basis coherences and is rejected.
    """
    if not average_sign:
        raise ValueError("unaveraged waveplate output is not Bell-diagonal; use rotated_source")
    if setting.axis is PauliAxis.Z:
        raise ValueError("only X and Y waveplate axes are modelled")
    c2 = math.cos(setting.theta / 2) ** 2
    err = BellLabel.PSI_PLUS if setting.axis is PauliAxis.X else BellLabel.PSI_MINUS
    return BellWeights({BellLabel.PHI_PLUS: c2, err: 1.0 - c2})


def bell_coherence(rho: np.ndarray) -> float:
    """Largest off-diagonal magnitude of ``rho`` in the Bell basis."""
    m = bell_decompose(rho)
    return float(np.abs(m - np.diag(np.diag(m))).max())
