"""Dispatch a :class:`RunConfig` and serialise the result rows."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path

from .bcnot import GateImperfection
from .channels import PolErrorType
from .config import RunConfig
from .distill import gain_map
from .rates import LinkBudget, single_copy_rate, two_copy_rate
from .timing import (
    TimingModel,
    delay_histogram,
    empirical_fidelities,
    et_fidelity_vs_window,
    simulate_timetags,
    write_histogram_csv,
)

SCHEMAS = {
    "distill": ("f_pol", "f_et", "gain", "yield", "f_distill", "status"),
    "sweep": ("f_pol", "f_et", "gain", "yield", "f_distill", "status"),
    "timing": ("window_s", "f_phiplus", "f_psiplus", "f_psiminus"),
    "rates": ("scheme", "rate_hz"),
}

STATUS_OK = "ok"
STATUS_ZERO_YIELD = "zero_yield"


def _sweep(cfg: RunConfig) -> list[dict]:
    rows = gain_map(
        cfg.pol_grid, cfg.et_grid, PolErrorType(cfg.noise_kind), GateImperfection(cfg.epsilon), n_jobs=cfg.n_jobs
    )
    return [
        {
            "f_pol": r.f_pol,
            "f_et": r.f_et,
            "gain": r.gain,
            "yield": r.yield_,
            "f_distill": r.f_distill,
            "status": STATUS_OK if r.ok else STATUS_ZERO_YIELD,
        }
        for r in rows
    ]


def _timing(cfg: RunConfig) -> list[dict]:
    model = TimingModel(cfg.delta_t, cfg.jitter_fwhm, cfg.pump_coherence, cfg.phase_error)
    samples = None
    if cfg.n_pairs > 0:
        samples = simulate_timetags(model, cfg.n_pairs, cfg.seed, n_jobs=cfg.n_jobs)
        if cfg.histogram:
            span = 2 * cfg.delta_t + 5 * model.sigma
            write_histogram_csv(cfg.histogram, *delay_histogram(samples, cfg.bin_width, span))
    rows = []
    for w in cfg.windows:
        if samples is None:
            f = et_fidelity_vs_window(model, w)
        else:
            f = empirical_fidelities(samples, w, cfg.phase_error)
        rows.append({"window_s": w, "f_phiplus": f.phi_plus, "f_psiplus": f.psi_plus, "f_psiminus": f.psi_minus})
    return rows


def _rates(cfg: RunConfig) -> list[dict]:
    b = LinkBudget.from_db(cfg.rep_rate, cfg.pair_prob, cfg.transmittance_db, cfg.protocol_yield)
    return [
        {"scheme": "single_copy", "rate_hz": single_copy_rate(b)},
        {"scheme": "two_copy", "rate_hz": two_copy_rate(b)},
    ]


_DISPATCH = {"distill": _sweep, "sweep": _sweep, "timing": _timing, "rates": _rates}


def run(config: RunConfig) -> list[dict]:
    """Evaluate a validated configuration; rows follow ``SCHEMAS[config.mode]``."""
    config.validate()
    rows = _DISPATCH[config.mode](config)
    for row in rows:
        for key, v in row.items():
            if isinstance(v, float) and not math.isfinite(v):
                raise ArithmeticError(f"non-finite value in column {key!r}")
    return rows


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    return v


def render(rows: list[dict], fmt: str, columns) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row[c]) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        records = [{c: _json_value(row[c]) for c in columns} for row in rows]
        return json.dumps(records, indent=2, ensure_ascii=False) + "\n"
    raise ValueError(f"unknown output format {fmt!r}")


def _json_value(v):
    if isinstance(v, float):
        return float(f"{v:.12g}")
    return v


def emit(rows: list[dict], fmt: str = "csv", path=None, columns=None) -> None:
    """Write rows with a fixed column order; ``path=None`` writes to stdout."""
    if columns is None:
        if not rows:
            raise ValueError("columns are required to emit an empty row list")
        columns = tuple(rows[0])
    text = render(rows, fmt, columns)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
