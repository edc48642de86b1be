"""Command-line front end: ``sweep``, ``validate`` and ``identity-check``.

Exit status is 0 on success, 1 when a validation check fails and 2 on a
configuration error.  ``--config`` reads a JSON object whose keys are flag
names (dashes or underscores); flags given on the command line win.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import validation
from .chanstat import binomial_identity_lhs
from .errors import ConfigurationError, NomaMecError
from .mc_oracle import MonteCarloSpec
from .sweep import MODES, GridAxis, SweepConfig, run_sweep

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2

# flag dest -> SweepConfig.fixed key
_FIXED = {
    "M": "M", "K": "K", "m": "m", "n": "n",
    "rho_m_db": "rho_m_db", "rho_n_db": "rho_n_db", "rho_db": "rho_db",
    "eta": "eta", "beta": "beta", "beta_tilde": "beta_tilde",
    "bits": "bits", "slot": "slot", "quad_points": "quad_points",
    "alpha_n_sq": "alpha_n_sq", "bits_m": "bits_m", "bits_n": "bits_n",
}
_RUN_KEYS = {"mode", "sweep", "mc_trials", "seed", "chunk", "out", "format", "workers"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _add_sweep_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON file of flag values (flags win)")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--M", type=int, metavar="USERS", help="users in the uplink cell")
    p.add_argument("--K", type=int, metavar="SERVERS", help="servers in the downlink")
    p.add_argument("--m", type=int, metavar="WEAK", help="weak index (1-based, ascending gains)")
    p.add_argument("--n", type=int, metavar="STRONG", help="strong index")
    p.add_argument("--rho-m-db", type=float)
    p.add_argument("--rho-n-db", type=float)
    p.add_argument("--rho-db", type=float, help="downlink transmit SNR")
    p.add_argument("--eta", type=float, help="rho_n / rho_m (linear)")
    p.add_argument("--beta", type=float)
    p.add_argument("--beta-tilde", type=float)
    p.add_argument("--bits", type=float)
    p.add_argument("--bits-m", type=float)
    p.add_argument("--bits-n", type=float)
    p.add_argument("--alpha-n-sq", type=float)
    p.add_argument("--slot", type=float)
    p.add_argument("--quad-points", type=int)
    p.add_argument("--sweep", help="param:start:stop:step, in dB")
    p.add_argument("--mc-trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--chunk", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="CSV path (stdout if omitted)")
    p.add_argument("--format", choices=("csv",))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nomamec", description="NOMA-assisted MEC offloading probabilities.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_sweep = sub.add_parser("sweep", help="evaluate one mode over an SNR grid and emit CSV")
    _add_sweep_args(p_sweep)

    p_val = sub.add_parser("validate", help="run the acceptance checks and print a report")
    p_val.add_argument("--criteria", type=int, nargs="+", choices=sorted(validation.CHECKS),
                       help="subset of criterion numbers (default: all)")
    p_val.add_argument("--quiet", action="store_true", help="one line per criterion")

    p_id = sub.add_parser("identity-check", help="check the binomial identity for small populations")
    p_id.add_argument("--max-M", type=int, default=12)
    p_id.add_argument("--tol", type=float, default=1e-10)
    return parser


def _merge_config(args: argparse.Namespace) -> dict:
    merged = {}
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigurationError("config file must hold a JSON object")
        for key, value in data.items():
            key = key.lstrip("-").replace("-", "_")
            if key not in _FIXED and key not in _RUN_KEYS:
                raise ConfigurationError(f"unknown config key {key!r}")
            merged[key] = value
    for key in list(_FIXED) + sorted(_RUN_KEYS):
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def sweep_config_from_args(args: argparse.Namespace) -> tuple[SweepConfig, int]:
    opts = _merge_config(args)
    if opts.get("mode") is None:
        raise ConfigurationError("--mode is required")
    if opts.get("sweep") is None:
        raise ConfigurationError("--sweep param:start:stop:step is required")
    if opts.get("format", "csv") != "csv":
        raise ConfigurationError("csv is the only supported format")
    mc = None
    if opts.get("mc_trials") is not None:
        mc = MonteCarloSpec(int(opts["mc_trials"]), int(opts.get("seed", 0)),
                            None if opts.get("chunk") is None else int(opts["chunk"]))
    elif opts.get("seed") is not None or opts.get("chunk") is not None:
        raise ConfigurationError("--seed and --chunk need --mc-trials")
    fixed = {_FIXED[k]: v for k, v in opts.items() if k in _FIXED}
    workers = int(opts.get("workers", 1))
    if workers < 1:
        raise ConfigurationError("--workers must be >= 1")
    config = SweepConfig(opts["mode"], GridAxis.parse(str(opts["sweep"])), fixed, mc, opts.get("out"))
    return config, workers


def _identity_check(max_M: int, tol: float) -> int:
    worst, failed = 0.0, 0
    print("M,m,lhs,abs_error,status")
    for M in range(2, max_M + 1):
        for m in range(1, M):
            lhs = binomial_identity_lhs(M, m)
            err = abs(lhs - 1)
            worst = max(worst, err)
            failed += err > tol
            print(f"{M},{m},{lhs!r},{err:.3e},{'PASS' if err <= tol else 'FAIL'}")
    print(f"# max abs error {worst:.3e}, {failed} failures at tol {tol:g}", file=sys.stderr)
    return EXIT_FAILED if failed else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "sweep":
            config, workers = sweep_config_from_args(args)
            text = run_sweep(config, workers)
            if config.output is None:
                sys.stdout.write(text)
            return EXIT_OK
        if args.command == "validate":
            results = validation.validate(args.criteria, verbose=not args.quiet)
            return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
        return _identity_check(args.max_M, args.tol)
    except NomaMecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
