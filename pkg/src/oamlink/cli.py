"""Command-line entry point ``oam-link``.

Exit codes: 0 success, 2 usage error, 3 configuration error,
4 computation error, 5 output error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .errors import ConfigError, IoError, OamLinkError
from .optimizer import STATE_RULES, TIE_BREAKS, optimize_interval
from .purity import purity_matrix
from .scenario import load_scenario
from .sweeps import FIGURES, figure_sweep, format_csv, run_sweep, write_text

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_COMPUTE, EXIT_IO = 0, 2, 3, 4, 5

_HELP = {
    "fig3": "capacity vs SNR, aligned and misaligned",
    "fig4a": "capacity vs spectral index for several distances",
    "fig4b": "capacity vs structure constant for several distances",
    "fig5": "capacity vs deflection (dB) for several state counts",
    "fig6": "capacity vs deflection (dB) for several antenna counts",
    "fig7": "capacity vs deflection (dB) per interval, with the optimal interval",
    "fig8": "error probability vs SNR for several deflections",
    "fig9": "error probability vs SNR for several intervals",
    "optimize": "search the state interval for one scenario",
    "purity": "dump the purity matrix of one scenario",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML scenario file (defaults if omitted)")
    common.add_argument("--out", metavar="PATH", help="CSV output file (stdout if omitted)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1, metavar="N",
                        help="worker processes for sweeps (default: CPU count)")
    common.add_argument("--tie-break", choices=TIE_BREAKS,
                        help="optimizer tie rule (overrides the config)")
    common.add_argument("--state-rule", choices=STATE_RULES,
                        help="state set rule (overrides the config)")
    p = argparse.ArgumentParser(prog="oam-link", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="<subcommand>")
    for name, text in _HELP.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return p


def _scenario(args):
    scn = load_scenario(args.config)
    if args.tie_break:
        scn = scn.replace("optimizer.tie_break", args.tie_break)
    if args.state_rule:
        scn = scn.replace("states.rule", args.state_rule)
    return scn


def _optimize(scn, out) -> None:
    res = optimize_interval(scn, scn.optimizer.max_interval, scn.optimizer.tie_break)
    rows = [[o, c, 1.0 if o == res.optimal_interval else 0.0]
            for o, c in res.per_interval_capacities]
    write_text(format_csv(["interval", "total_capacity", "optimal"], rows), out)
    print(f"optimal interval {res.optimal_interval}, capacity {res.optimal_capacity:.6g} "
          f"bit/s/Hz", file=sys.stderr)


def _purity(scn, out) -> None:
    pm = purity_matrix(scn.reference_beam(), scn.misalignment_params(),
                       scn.turbulence_params(), scn.state_list(), scn.z, scn.purity_config())
    header = ["state"] + [f"offset_{'m' if d < 0 else ''}{abs(d)}" for d in pm.offsets]
    rows = [[float(l)] + list(r) for l, r in zip(pm.states, np.asarray(pm.weights))]
    write_text(format_csv(header, rows), out)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.threads < 1:
        print("oam-link: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        scn = _scenario(args)
    except ConfigError as exc:
        print(f"oam-link: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command in FIGURES:
            run_sweep(scn, figure_sweep(args.command, scn), args.out, args.threads)
        elif args.command == "optimize":
            _optimize(scn, args.out)
        else:
            _purity(scn, args.out)
    except IoError as exc:
        print(f"oam-link: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as exc:
        print(f"oam-link: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OamLinkError, ValueError, ArithmeticError) as exc:
        print(f"oam-link: computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
