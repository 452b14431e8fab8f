"""Franson delay-histogram model: three Gaussian coincidence peaks.

Branches SS and LL land in the central peak at zero delay (population 1/2);
SL and LS form side peaks at ``-delta_t`` and ``+delta_t`` (1/4 each).
"""

from __future__ import annotations

import csv
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import ndtr

from .bellcore import BellLabel, BellWeights

FWHM_TO_SIGMA = 1 / (2 * math.sqrt(2 * math.log(2)))
ORDERING_MARGIN = 3.0
SHARD_SIZE = 1 << 18

LAB_DELTA_T = 2.6e-9
LAB_JITTER_FWHM = 800e-12
LAB_PUMP_COHERENCE = 600e-9


class Peak(enum.IntEnum):
    CENTRAL = 0
    SIDE_MINUS = 1
    SIDE_PLUS = 2


PEAK_POPULATIONS = np.array([0.5, 0.25, 0.25])


def peak_populations() -> tuple[float, float]:
    """``(central, each side)`` from four equally likely S/L branch pairs."""
    branches = [(a, b) for a in "SL" for b in "SL"]
    central = sum(a == b for a, b in branches) / len(branches)
    side = sum(a == "S" and b == "L" for a, b in branches) / len(branches)
    return central, side


@dataclass(frozen=True)
class TimingModel:
    """Interferometer delay, two-photon jitter FWHM and pump coherence time (seconds).

    ``phase_error`` is a residual Franson phase in radians that moves
    central-peak weight from Φ+ to Φ- as ``sin^2(phase/2)``.
    """

    delta_t: float = LAB_DELTA_T
    jitter_fwhm: float = LAB_JITTER_FWHM
    pump_coherence: float = LAB_PUMP_COHERENCE
    phase_error: float = 0.0

    def __post_init__(self):
        if min(self.delta_t, self.jitter_fwhm, self.pump_coherence) <= 0:
            raise ValueError("timing parameters must be positive")
        if ORDERING_MARGIN * self.jitter_fwhm > self.delta_t:
            raise ValueError(
                f"jitter FWHM {self.jitter_fwhm:g} s is not well below the delay {self.delta_t:g} s"
            )
        if ORDERING_MARGIN * self.delta_t > self.pump_coherence:
            raise ValueError(
                f"delay {self.delta_t:g} s is not well below the pump coherence {self.pump_coherence:g} s"
            )

    @property
    def sigma(self) -> float:
        return self.jitter_fwhm * FWHM_TO_SIGMA

    @property
    def centers(self) -> np.ndarray:
        return np.array([0.0, -self.delta_t, self.delta_t])


class EtFidelities(NamedTuple):
    phi_plus: float
    psi_plus: float
    psi_minus: float
    phi_minus: float = 0.0

    def as_weights(self) -> BellWeights:
        return BellWeights(
            {
                BellLabel.PHI_PLUS: self.phi_plus,
                BellLabel.PHI_MINUS: self.phi_minus,
                BellLabel.PSI_PLUS: self.psi_plus,
                BellLabel.PSI_MINUS: self.psi_minus,
            }
        )


def window_mass(center, sigma: float, window: float) -> np.ndarray:
    """Gaussian(center, sigma) probability inside ``[-window/2, window/2]``."""
    half = window / 2
    # the window is symmetric; using |center| keeps both CDF terms in the
    # lower tail and avoids cancellation near 1
    center = np.abs(np.asarray(center, dtype=float))
    return ndtr((half - center) / sigma) - ndtr((-half - center) / sigma)


def _fidelities(central: float, sides: float, phase_error: float) -> EtFidelities:
    s = float(sides / (central + sides) / 2)
    # derive the central share from s so the three weights sum to 1 and stay
    # monotone in the window under rounding
    f_c = 1.0 - 2.0 * s
    leak = math.sin(phase_error / 2) ** 2
    return EtFidelities(f_c * (1 - leak), s, s, f_c * leak)


def et_fidelity_vs_window(model: TimingModel, window: float) -> EtFidelities:
    """Energy-time Bell weights of coincidences accepted by a window of total width ``window``."""
    if not window > 0:
        raise ValueError(f"coincidence window must be positive, got {window!r}")
    m = PEAK_POPULATIONS * window_mass(model.centers, model.sigma, window)
    return _fidelities(m[0], m[1] + m[2], model.phase_error)


class DelaySample(NamedTuple):
    delay: float
    peak: Peak


class DelaySamples:
    """Columnar batch of simulated coincidences: delays (s) and true peak codes."""

    __slots__ = ("delay", "peak")

    def __init__(self, delay, peak):
        self.delay = np.asarray(delay, dtype=float)
        self.peak = np.asarray(peak, dtype=np.int8)
        if self.delay.shape != self.peak.shape:
            raise ValueError("delay and peak arrays differ in length")

    def __len__(self) -> int:
        return len(self.delay)

    def __getitem__(self, i) -> DelaySample:
        return DelaySample(float(self.delay[i]), Peak(int(self.peak[i])))

    def __iter__(self):
        for d, p in zip(self.delay, self.peak):
            yield DelaySample(float(d), Peak(int(p)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DelaySamples):
            return NotImplemented
        return np.array_equal(self.delay, other.delay) and np.array_equal(self.peak, other.peak)

    @classmethod
    def from_list(cls, samples: Sequence[DelaySample]) -> DelaySamples:
        return cls([s.delay for s in samples], [int(s.peak) for s in samples])


def _shard(model: TimingModel, n: int, seq: np.random.SeedSequence) -> DelaySamples:
    rng = np.random.default_rng(seq)
    peak = rng.choice(3, size=n, p=PEAK_POPULATIONS).astype(np.int8)
    delay = model.centers[peak] + rng.normal(0.0, model.sigma, size=n)
    return DelaySamples(delay, peak)


def simulate_timetags(model: TimingModel, n_pairs: int, seed: int, n_jobs: int = 1) -> DelaySamples:
    """Monte Carlo coincidence delays.

    Work is cut into fixed-size shards with seeds spawned from ``seed``, so the
    output depends only on ``(model, n_pairs, seed)`` and not on ``n_jobs``.
    """
    if n_pairs <= 0:
        raise ValueError("n_pairs must be positive")
    sizes = [SHARD_SIZE] * (n_pairs // SHARD_SIZE)
    if n_pairs % SHARD_SIZE:
        sizes.append(n_pairs % SHARD_SIZE)
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    if n_jobs == 1:
        parts = [_shard(model, n, s) for n, s in zip(sizes, seqs)]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(lambda a: _shard(model, *a), zip(sizes, seqs)))
    return DelaySamples(
        np.concatenate([p.delay for p in parts]), np.concatenate([p.peak for p in parts])
    )


def coincidence_count(samples, window: float) -> tuple[int, np.ndarray]:
    """Samples with ``|delay| <= window/2``, and their tally per true peak."""
    if not window > 0:
        raise ValueError(f"coincidence window must be positive, got {window!r}")
    if not isinstance(samples, DelaySamples):
        samples = DelaySamples.from_list(list(samples))
    inside = np.abs(samples.delay) <= window / 2
    by_peak = np.bincount(samples.peak[inside], minlength=3)
    return int(inside.sum()), by_peak


def empirical_fidelities(samples, window: float, phase_error: float = 0.0) -> EtFidelities:
    kept, by_peak = coincidence_count(samples, window)
    if kept == 0:
        raise ValueError("no coincidences inside the window")
    return _fidelities(float(by_peak[0]), float(by_peak[1] + by_peak[2]), phase_error)


def delay_histogram(samples, bin_width: float, span: float | None = None):
    """Histogram of delays; returns ``(edges, counts)``."""
    if not isinstance(samples, DelaySamples):
        samples = DelaySamples.from_list(list(samples))
    if span is None:
        span = float(np.abs(samples.delay).max()) if len(samples) else bin_width
    n = max(1, math.ceil(span / bin_width))
    edges = np.arange(-n, n + 1) * bin_width
    counts, _ = np.histogram(samples.delay, bins=edges)
    return edges, counts


def write_histogram_csv(path, edges: np.ndarray, counts: np.ndarray) -> None:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["bin_start_s", "bin_end_s", "count"])
            for lo, hi, c in zip(edges[:-1], edges[1:], counts):
                w.writerow([f"{lo:.12g}", f"{hi:.12g}", int(c)])
    except OSError as exc:
        raise OSError(f"cannot write histogram to {path}: {exc}") from exc
