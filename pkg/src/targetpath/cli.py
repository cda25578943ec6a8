"""Command-line entry point: simulate, gains check/synth, lyapunov grid/trace.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 numerical
abort.  Every exit path prints at least one diagnostic line.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .config import ScenarioError, load_scenario
from .gains import check_conditions, synthesize_gains
from .lyapunov import check_trace, positivity_grid
from .simulator import IntegrationError, TrajectoryLog, run

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3


def _parse_overrides(pairs: list[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    for pair in pairs:
        key, sep, val = pair.partition("=")
        if not sep:
            raise ScenarioError(f"override {pair!r} is not of the form key=value")
        out[key.strip()] = val.strip()
    return out


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(args.scenario, _parse_overrides(args.override))
    except (OSError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        log = run(scenario)
    except IntegrationError as exc:
        print(f"integration aborted: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    log.write_csv(args.out)
    print(f"wrote {len(log)} rows to {args.out}")
    for line in log.summary_lines():
        print(line)
    return EXIT_OK


def cmd_gains_check(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except (OSError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = check_conditions(scenario.gains)
    for line in report.lines():
        print(line)
    for e in report.entries:
        print(f"{e.name}.lhs={e.lhs:.17g}")
        print(f"{e.name}.rhs={e.rhs:.17g}")
        print(f"{e.name}.ok={int(e.ok)}")
    return EXIT_OK if report.ok else EXIT_VALIDATION


def cmd_gains_synth(args: argparse.Namespace) -> int:
    try:
        g = synthesize_gains(args.d, args.kappa_max, args.c0, args.c2)
    except ValueError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"vehicle.d = {g.d:.17g}")
    print(f"path.kappa_max = {g.kappa_max:.17g}")
    print(f"gains.c0 = {g.c0:.17g}")
    print(f"gains.c1 = {g.c1:.17g}")
    print(f"gains.c2 = {g.c2:.17g}")
    print(f"gains.m = {g.m:.17g}")
    print(f"gains.n = {g.n:.17g}")
    print(f"gains.beta = {g.beta:.17g}")
    print(f"gains.rho = {g.rho:.17g}")
    return EXIT_OK


def cmd_lyapunov_grid(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except (OSError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    res = positivity_grid(scenario.gains, (-args.y_extent, args.y_extent), args.n, args.n)
    print(f"a_min = {res['a_min']:.9g}")
    print(f"b_min = {res['b_min']:.9g}")
    if res["a_min"] < -1e-12 or res["b_min"] < -1e-12:
        print("grid positivity FAILED")
        return EXIT_VALIDATION
    print("grid positivity ok")
    return EXIT_OK


def cmd_lyapunov_trace(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except (OSError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        log = TrajectoryLog.read_csv(args.log)
    except (OSError, ValueError) as exc:
        print(f"error reading log: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = check_trace(log, scenario.gains)
    print(f"t0 = {report.t0}")
    print(f"trapped_after_t0 = {report.trapped_after_t0}")
    print(f"monotone_after_t0 = {report.monotone_after_t0}")
    print(f"decrease_ok = {report.decrease_ok}")
    print(f"max_fd_gap = {report.max_fd_gap:.9g} over {report.n_smooth} smooth steps")
    for v in report.violations:
        print(f"violation: {v}")
    return EXIT_OK if report.ok else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="targetpath", description=__doc__)
    ap.add_argument("--version", action="version", version=f"targetpath {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario and write the CSV log")
    sim.add_argument("--scenario", required=True)
    sim.add_argument("--out", required=True)
    sim.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    sim.set_defaults(func=cmd_simulate)

    gains = sub.add_parser("gains", help="gain-condition checking and synthesis")
    gsub = gains.add_subparsers(dest="gains_command", required=True)
    gchk = gsub.add_parser("check", help="evaluate all gain conditions for a scenario")
    gchk.add_argument("--scenario", required=True)
    gchk.set_defaults(func=cmd_gains_check)
    gsyn = gsub.add_parser("synth", help="synthesize a compliant gain set")
    gsyn.add_argument("--d", type=float, required=True)
    gsyn.add_argument("--kappa-max", type=float, required=True)
    gsyn.add_argument("--c0", type=float, required=True)
    gsyn.add_argument("--c2", type=float, required=True)
    gsyn.set_defaults(func=cmd_gains_synth)

    lyap = sub.add_parser("lyapunov", help="energy-function verification")
    lsub = lyap.add_subparsers(dest="lyapunov_command", required=True)
    lgrid = lsub.add_parser("grid", help="positivity sweep of the decay bounds")
    lgrid.add_argument("--scenario", required=True)
    lgrid.add_argument("--n", type=int, default=401)
    lgrid.add_argument("--y-extent", type=float, default=10.0)
    lgrid.set_defaults(func=cmd_lyapunov_grid)
    ltr = lsub.add_parser("trace", help="post-hoc decrease check on a CSV log")
    ltr.add_argument("--log", required=True)
    ltr.add_argument("--scenario", required=True, help="scenario file providing the gains")
    ltr.set_defaults(func=cmd_lyapunov_trace)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors; remap to our contract
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
