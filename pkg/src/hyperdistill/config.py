"""Run configuration: validation and key-value file round trip."""

from __future__ import annotations

import configparser
import dataclasses
import io
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

from .channels import PolErrorType
from .distill import default_grid
from .rates import REFERENCE_BUDGET
from .timing import LAB_DELTA_T, LAB_JITTER_FWHM, LAB_PUMP_COHERENCE

MODES = ("distill", "sweep", "timing", "rates")
FORMATS = ("csv", "json")
SECTION = "run"


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class RunConfig:
    mode: str = "sweep"
    noise_kind: PolErrorType = PolErrorType.BIT_FLIP
    pol_grid: tuple[float, ...] = field(default_factory=lambda: tuple(default_grid()))
    et_grid: tuple[float, ...] = field(default_factory=lambda: tuple(default_grid()))
    epsilon: float = 0.0
    delta_t: float = LAB_DELTA_T
    jitter_fwhm: float = LAB_JITTER_FWHM
    pump_coherence: float = LAB_PUMP_COHERENCE
    phase_error: float = 0.0
    windows: tuple[float, ...] = (0.65e-9, 2.6e-9, 26e-9)
    n_pairs: int = 0
    seed: int | None = None
    histogram: str | None = None
    bin_width: float = 100e-12
    rep_rate: float = REFERENCE_BUDGET.rep_rate
    pair_prob: float = REFERENCE_BUDGET.pair_prob
    transmittance_db: float = -20.0
    protocol_yield: float = REFERENCE_BUDGET.protocol_yield
    output: str | None = None
    format: str = "csv"
    n_jobs: int = 1

    def replace(self, **changes) -> RunConfig:
        return dataclasses.replace(self, **changes)

    def validate(self) -> RunConfig:
        if self.mode not in MODES:
            raise ConfigError("mode", f"must be one of {MODES}, got {self.mode!r}")
        if self.format not in FORMATS:
            raise ConfigError("format", f"must be one of {FORMATS}, got {self.format!r}")
        try:
            PolErrorType(self.noise_kind)
        except ValueError:
            raise ConfigError("noise_kind", f"unknown error type {self.noise_kind!r}") from None
        for name in ("pol_grid", "et_grid"):
            grid = getattr(self, name)
            if not grid:
                raise ConfigError(name, "grid is empty")
            if any(not 0.0 <= g <= 1.0 for g in grid):
                raise ConfigError(name, "values must lie in [0, 1]")
            if list(grid) != sorted(grid):
                raise ConfigError(name, "values must be sorted ascending")
        if not 0.0 <= self.epsilon <= 0.5:
            raise ConfigError("epsilon", "must lie in [0, 0.5]")
        for name in ("delta_t", "jitter_fwhm", "pump_coherence", "bin_width", "rep_rate"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(name, "must be a positive number")
        if not self.windows or any(not w > 0 for w in self.windows):
            raise ConfigError("windows", "must be a non-empty list of positive widths")
        if self.n_pairs < 0:
            raise ConfigError("n_pairs", "must be non-negative")
        if self.mode == "timing" and (self.n_pairs > 0 or self.histogram) and self.seed is None:
            raise ConfigError("seed", "required for Monte Carlo timing runs")
        if self.histogram and self.n_pairs == 0:
            raise ConfigError("n_pairs", "histogram export needs n_pairs > 0")
        if not 0 <= self.pair_prob <= 1:
            raise ConfigError("pair_prob", "must lie in [0, 1]")
        if not self.transmittance_db <= 0:
            raise ConfigError("transmittance_db", "must be <= 0 dB")
        if not 0 <= self.protocol_yield <= 1:
            raise ConfigError("protocol_yield", "must lie in [0, 1]")
        if self.n_jobs < 1:
            raise ConfigError("n_jobs", "must be at least 1")
        return self

    def to_ini(self) -> str:
        cp = configparser.ConfigParser()
        cp[SECTION] = {f.name: _dump(getattr(self, f.name)) for f in fields(self)}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    @classmethod
    def from_ini(cls, text: str) -> RunConfig:
        cp = configparser.ConfigParser()
        cp.read_string(text)
        if not cp.has_section(SECTION):
            raise ConfigError("config", f"missing [{SECTION}] section")
        return cls.from_mapping(dict(cp[SECTION]))

    @classmethod
    def from_file(cls, path) -> RunConfig:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from None
        return cls.from_ini(text)

    @classmethod
    def from_mapping(cls, values: dict[str, str]) -> RunConfig:
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            if key not in known:
                raise ConfigError(key, "unknown configuration key")
            kwargs[key] = parse_value(key, raw)
        return cls(**kwargs)


_FLOAT_LISTS = {"pol_grid", "et_grid", "windows"}
_FLOATS = {
    "epsilon", "delta_t", "jitter_fwhm", "pump_coherence", "phase_error", "bin_width",
    "rep_rate", "pair_prob", "transmittance_db", "protocol_yield",
}
_INTS = {"n_pairs", "n_jobs"}
_OPTIONAL = {"seed", "histogram", "output"}


def _dump(v) -> str:
    if v is None:
        return ""
    if isinstance(v, PolErrorType):
        return v.value
    if isinstance(v, tuple):
        return ", ".join(repr(float(x)) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def parse_grid(raw: str) -> tuple[float, ...]:
    """``"a, b, c"`` list or ``"lo:hi:n"`` inclusive linspace."""
    raw = raw.strip()
    if raw.count(":") == 2:
        lo, hi, n = raw.split(":")
        return tuple(default_grid(int(n), float(lo), float(hi)))
    return tuple(float(x) for x in raw.replace(",", " ").split())


def parse_value(key: str, raw):
    if not isinstance(raw, str):
        return raw
    try:
        if key in _OPTIONAL and raw.strip() == "":
            return None
        if key in _FLOAT_LISTS:
            return parse_grid(raw)
        if key in _FLOATS:
            return float(raw)
        if key in _INTS or key == "seed":
            return int(raw)
        if key == "noise_kind":
            return PolErrorType(raw.strip())
    except ValueError as exc:
        raise ConfigError(key, f"cannot parse {raw!r}: {exc}") from None
    return raw.strip()
