"""Postselection on path-correlated outcomes and distillation figures of merit."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .bcnot import GateImperfection, apply_imperfect_bcnot
from .bellcore import ATOL, BellLabel, BellWeights
from .channels import PolErrorType, et_noise, pol_noise
from .hyperstate import HyperState, product_state

_KEEP_ET = [BellLabel.PHI_PLUS, BellLabel.PHI_MINUS]


class NoPostselectedPopulation(ArithmeticError):
    """Raised when nothing survives the Φ± energy-time postselection."""


@dataclass(frozen=True)
class DistillResult:
    fidelity_distilled: float
    gain: float
    yield_: float
    pol_out: BellWeights


def postselect_phi(state: HyperState) -> tuple[BellWeights, float]:
    """Keep entries whose energy-time label is Φ+ or Φ-.

    Returns the renormalised polarisation marginal of the kept part and the
    kept weight (the yield).
    """
    kept = state.table[:, _KEEP_ET].sum(axis=1)
    y = float(kept.sum())
    if y <= ATOL:
        raise NoPostselectedPopulation("no population survives postselection")
    return BellWeights.from_array(kept / y), y


def distill(
    pol_in: BellWeights,
    et_in: BellWeights,
    imp: GateImperfection | float = 0.0,
) -> DistillResult:
    out = apply_imperfect_bcnot(product_state(pol_in, et_in), imp)
    pol_out, y = postselect_phi(out)
    f = pol_out[BellLabel.PHI_PLUS]
    g = f - max(pol_in[BellLabel.PHI_PLUS], et_in[BellLabel.PHI_PLUS])
    return DistillResult(fidelity_distilled=f, gain=g, yield_=y, pol_out=pol_out)


def closed_form(f_pol: float, f_et: float) -> tuple[float, float]:
    """Ideal-gate ``(F_distill, Y)`` for single-Pauli polarisation noise."""
    y = f_pol * f_et + (1 - f_pol) * (1 - f_et)
    return f_pol * f_et / y, y


class GainRow(NamedTuple):
    f_pol: float
    f_et: float
    gain: float
    yield_: float
    f_distill: float
    ok: bool


def _point(f_pol: float, f_et: float, kind: PolErrorType, imp: GateImperfection) -> GainRow:
    try:
        r = distill(pol_noise(kind, f_pol), et_noise(f_et), imp)
    except NoPostselectedPopulation:
        return GainRow(f_pol, f_et, 0.0, 0.0, 0.0, False)
    return GainRow(f_pol, f_et, r.gain, r.yield_, r.fidelity_distilled, True)


def gain_map(
    grid_pol: Sequence[float],
    grid_et: Sequence[float],
    kind: PolErrorType = PolErrorType.BIT_FLIP,
    imp: GateImperfection | float = 0.0,
    n_jobs: int = 1,
) -> list[GainRow]:
    """Evaluate :func:`distill` on the Cartesian grid, row-major over ``grid_pol``.

    Zero-yield points are returned with ``ok=False`` instead of raising.
    """
    if not isinstance(imp, GateImperfection):
        imp = GateImperfection(imp)
    points = [(float(fp), float(fe)) for fp in grid_pol for fe in grid_et]
    if n_jobs == 1:
        return [_point(fp, fe, kind, imp) for fp, fe in points]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        # map preserves input order
        return list(pool.map(lambda pt: _point(*pt, kind, imp), points))


def default_grid(n: int = 26, lo: float = 0.5, hi: float = 1.0) -> list[float]:
    return [float(x) for x in np.round(np.linspace(lo, hi, n), 12)]
