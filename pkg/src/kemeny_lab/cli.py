"""``kemeny-lab`` command line interface.

Exit codes:

    0  success
    1  usage error
    2  unreadable, malformed or non-stochastic matrix file
    3  chain is not regular (no strictly positive power)
    4  Monte Carlo censoring limit exceeded
    5  numerical failure (singular system where none was expected)

The report goes to stdout; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__, chain
from . import montecarlo as mc
from . import report
from .errors import (
    CensoringExceeded,
    DimensionMismatch,
    KemenyLabError,
    NotRegular,
    NotStochastic,
    ParseError,
)
from .evolution import DEFAULT_STEPS
from .matrixfile import read_matrix

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NOT_REGULAR, EXIT_CENSORED, EXIT_NUMERIC = range(6)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return value


def _add_common(sub):
    sub.add_argument("matrix", help="CSV or JSON matrix file")
    mode = sub.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact",
                      help="rational arithmetic (decimal entries are read exactly)")
    mode.add_argument("--float", dest="mode", action="store_const", const="float",
                      help="double precision arithmetic")


def _add_output(sub, default):
    out = sub.add_mutually_exclusive_group()
    out.add_argument("--json", dest="output", action="store_const", const="json")
    out.add_argument("--text", dest="output", action="store_const", const="text")
    sub.set_defaults(output=default)


def build_parser():
    parser = _Parser(prog="kemeny-lab", description="Kemeny constant and first passage analysis")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = subs.add_parser("analyze", help="full report: pi, M, K by three routes, basis certificate")
    _add_common(p)
    _add_output(p, "json")
    p.add_argument("--steps", type=_positive_int, default=10, help="evolution steps (default 10)")
    p.add_argument("--simulate", type=_positive_int, metavar="TRIALS",
                   help="also run a Monte Carlo check with this many trials per pair")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--threads", type=_positive_int)

    p = subs.add_parser("evolve", help="Kemeny time K_m along P^m as CSV")
    _add_common(p)
    p.add_argument("--steps", type=_positive_int, default=DEFAULT_STEPS)
    p.add_argument("--csv", metavar="OUT", help="write the CSV here instead of stdout")

    p = subs.add_parser("simulate", help="Monte Carlo hitting times vs analytic M")
    _add_common(p)
    p.add_argument("--trials", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--max-steps", type=_positive_int, default=mc.DEFAULT_MAX_STEPS)
    p.add_argument("--threads", type=_positive_int,
                   help=f"worker threads (default ${mc.THREADS_ENV} or CPU count)")

    p = subs.add_parser("basis", help="change-of-basis certificate for Mbar")
    _add_common(p)
    _add_output(p, "text")
    p.add_argument("--show-tableau", action="store_true")
    return parser


def _load(args):
    return chain.validate(read_matrix(args.matrix, args.mode))


def _dump_json(doc, out):
    out.write(json.dumps(doc, indent=2) + "\n")


def _float_repr(x):
    return repr(float(x))


def _fmt(exact):
    return str if exact else _float_repr


def _vec(values, fmt):
    return "(" + ", ".join(fmt(v) for v in values) + ")"


def cmd_analyze(args, out):
    p = _load(args)
    sim = None
    if args.simulate:
        sim = mc.SimulationConfig(trials=args.simulate, seed=args.seed)
    doc = report.analyze_document(p, steps=args.steps, sim_cfg=sim, threads=args.threads,
                                  fmt=_fmt(p.exact))
    if args.output == "json":
        _dump_json(doc, out)
        return EXIT_OK
    k, b = doc["kemeny"], doc["basis"]
    lines = [
        f"states: {doc['chain']['n']} ({doc['chain']['mode']} mode), "
        f"regular with witness exponent {doc['chain']['primitivity']['witness_exponent']}",
        f"pi = {_vec(doc['stationary']['pi'], str)}",
        "M =",
        *("  " + "  ".join(str(x) for x in row) for row in doc["mfpt"]["from_fundamental"]),
        f"k = M pi = {_vec(k['kemeny_vector'], str)}",
        f"K = {k['K']}   K - 1 = {k['K_minus_1']}",
        f"K (trace Z) = {k['K_trace']}   K (spectrum) = {k['K_eigen']}",
        f"normalization factor n(K-1) = {b['normalization_factor']}",
        "diagnostics:",
        *(f"  {name} = {value}" for name, value in doc["diagnostics"].items()),
    ]
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_evolve(args, out):
    p = _load(args)
    pi = chain.stationary(p)
    section, _ = report.evolution_section(p, pi, args.steps)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["m", "K_m_eigen", "K_m_pipeline", "projector_gap", "invariance_residual"])
    for row in section["steps"]:
        writer.writerow([
            row["m"],
            "" if row["K_eigen"] is None else row["K_eigen"],
            row["K_pipeline"],
            row["projector_gap"],
            row["invariance_residual"],
        ])
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_simulate(args, out):
    p = _load(args)
    cfg = mc.SimulationConfig(trials=args.trials, max_steps=args.max_steps, seed=args.seed)
    a = report.Analysis(p)
    doc = {
        "schema": report.SCHEMA,
        "command": "simulate",
        "chain": {"n": p.n, "mode": "exact" if p.exact else "float"},
        "stationary": {"pi": report.encode(a.pi)},
        "analytic_mfpt": report.encode(a.m),
        **report.simulation_section(p, a.pi, a.m, cfg, args.threads),
    }
    _dump_json(doc, out)
    return EXIT_OK


def cmd_basis(args, out):
    p = _load(args)
    a = report.Analysis(p)
    fmt = _fmt(p.exact)
    section = a.basis_section(fmt)
    if args.output == "json":
        section = {"schema": report.SCHEMA, "command": "basis",
                   "K": report.encode(a.kemeny.K), "pi": report.encode(a.pi), **section}
        if not args.show_tableau:
            del section["tableau"]
        _dump_json(section, out)
        return EXIT_OK
    b = a.basis
    lines = [
        f"states: {p.n} ({'exact' if p.exact else 'float'} mode)",
        f"pi = {_vec(a.pi, fmt)}",
        f"K = {fmt(a.kemeny.K)}   K - 1 = {fmt(a.kemeny.kbar_level)}",
        f"Mbar pi (column combination) = {_vec(b.reconstruction, fmt)}",
    ]
    if args.show_tableau:
        lines += ["tableau [Mbar | I] -> [I | Mbar^-1]:", *section["tableau"]["text"]]
    lines += [
        "Mbar^-1 =",
        *("  " + "  ".join(fmt(x) for x in row) for row in b.mbar_inverse),
        f"Mbar^-1 (e/n) = {_vec(b.pullback_vector, fmt)}",
        f"normalization factor n(K-1) = {fmt(b.normalization_factor)}",
        f"n(K-1) Mbar^-1 (e/n) = {_vec(b.normalization_factor * b.pullback_vector, fmt)}",
        f"pullback residual = {fmt(b.pullback_residual)}",
        f"reconstruction residual = {fmt(b.reconstruction_residual)}",
    ]
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "evolve": cmd_evolve, "simulate": cmd_simulate,
            "basis": cmd_basis}


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (ParseError, NotStochastic, DimensionMismatch) as exc:
        err.write(f"kemeny-lab: invalid matrix: {exc}\n")
        return EXIT_INPUT
    except NotRegular as exc:
        err.write(f"kemeny-lab: primitivity check failed: {exc}\n")
        return EXIT_NOT_REGULAR
    except CensoringExceeded as exc:
        err.write(f"kemeny-lab: censoring limit exceeded: {exc}\n")
        return EXIT_CENSORED
    except KemenyLabError as exc:
        err.write(f"kemeny-lab: numerical failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
