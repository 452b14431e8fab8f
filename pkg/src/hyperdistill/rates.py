"""Distillation rates of single-copy versus two-copy schemes over a lossy dual link."""

from __future__ import annotations

from dataclasses import dataclass


def db_to_linear(db: float) -> float:
    return 10 ** (db / 10)


@dataclass(frozen=True)
class LinkBudget:
    """Source repetition rate (Hz), mean pairs per pulse, per-link transmittance, protocol yield."""

    rep_rate: float
    pair_prob: float
    transmittance: float
    protocol_yield: float

    def __post_init__(self):
        if self.rep_rate <= 0:
            raise ValueError("rep_rate must be positive")
        if not 0 <= self.pair_prob <= 1:
            raise ValueError("pair_prob must be in [0, 1]")
        if not 0 < self.transmittance <= 1:
            raise ValueError("transmittance must be in (0, 1]")
        if not 0 <= self.protocol_yield <= 1:
            raise ValueError("protocol_yield must be in [0, 1]")

    @classmethod
    def from_db(cls, rep_rate: float, pair_prob: float, transmittance_db: float, protocol_yield: float):
        return cls(rep_rate, pair_prob, db_to_linear(transmittance_db), protocol_yield)


REFERENCE_BUDGET = LinkBudget.from_db(76e6, 0.00022, -20.0, 0.8)


def single_copy_rate(b: LinkBudget) -> float:
    """One pair, two links, full protocol yield."""
    return b.rep_rate * b.pair_prob * b.transmittance**2 * b.protocol_yield


def two_copy_rate(b: LinkBudget) -> float:
    """Two pairs over four link traversals; the target pair is sacrificed."""
    return b.rep_rate * b.pair_prob**2 * b.transmittance**4 * b.protocol_yield / 2
