"""Command-line front end: ``hyperdistill {distill,sweep,timing,rates}``."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import FORMATS, ConfigError, RunConfig, parse_value
from .runner import SCHEMAS, emit, run

log = logging.getLogger("hyperdistill")

# (flag, config field, help)
_COMMON = [
    ("--output", "output", "output file (default: stdout)"),
    ("--n-jobs", "n_jobs", "worker threads for grid points / Monte Carlo shards"),
]
_GATE = [
    ("--noise-kind", "noise_kind", "polarisation error: bit_flip or bit_phase_flip"),
    ("--epsilon", "epsilon", "wrong-port probability of each PBS, in [0, 0.5]"),
]
_SWEEP = [
    ("--pol-grid", "pol_grid", "polarisation fidelities: 'a,b,c' or 'lo:hi:n'"),
    ("--et-grid", "et_grid", "energy-time fidelities: 'a,b,c' or 'lo:hi:n'"),
]
_TIMING = [
    ("--delta-t", "delta_t", "interferometer delay in seconds"),
    ("--jitter-fwhm", "jitter_fwhm", "FWHM of the two-photon delay jitter in seconds"),
    ("--pump-coherence", "pump_coherence", "pump coherence time in seconds"),
    ("--phase-error", "phase_error", "residual interferometer phase in radians"),
    ("--windows", "windows", "coincidence window widths in seconds: 'a,b,c' or 'lo:hi:n'"),
    ("--n-pairs", "n_pairs", "Monte Carlo pairs (0 = analytic model only)"),
    ("--seed", "seed", "Monte Carlo seed"),
    ("--histogram", "histogram", "write the delay histogram CSV to this path"),
    ("--bin-width", "bin_width", "histogram bin width in seconds"),
]
_RATES = [
    ("--rep-rate", "rep_rate", "source repetition rate in Hz"),
    ("--pair-prob", "pair_prob", "mean photon pairs per pulse"),
    ("--transmittance-db", "transmittance_db", "per-link transmittance in dB"),
    ("--yield", "protocol_yield", "protocol yield"),
]


def _add(parser, options):
    for flag, dest, help_ in options:
        parser.add_argument(flag, dest=dest, default=None, help=help_)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperdistill", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="mode", required=True)

    def command(name, help_, *groups):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="key-value config file; flags override it")
        p.add_argument("--format", dest="format", choices=FORMATS, default=None)
        p.add_argument("--dump-config", action="store_true", help="print the resolved config and exit")
        for g in (_COMMON, *groups):
            _add(p, g)
        return p

    d = command("distill", "distil a single (f_pol, f_et) point", _GATE)
    d.add_argument("--f-pol", type=float, required=True)
    d.add_argument("--f-et", type=float, required=True)
    command("sweep", "gain/yield map over a fidelity grid", _GATE, _SWEEP)
    command("timing", "energy-time fidelities versus coincidence window", _TIMING)
    command("rates", "single-copy vs two-copy distillation rates", _RATES)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    overrides = {"mode": args.mode}
    for key, value in vars(args).items():
        if value is None or key in ("config", "mode", "verbose", "dump_config", "f_pol", "f_et"):
            continue
        overrides[key] = parse_value(key, value)
    if args.mode == "distill":
        overrides["pol_grid"] = (args.f_pol,)
        overrides["et_grid"] = (args.f_et,)
    return cfg.replace(**overrides).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"hyperdistill: config error: {exc}", file=sys.stderr)
        return 2
    if args.dump_config:
        sys.stdout.write(cfg.to_ini())
        return 0
    log.debug("running %s", cfg)
    try:
        rows = run(cfg)
        emit(rows, cfg.format, cfg.output, SCHEMAS[cfg.mode])
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"hyperdistill: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
