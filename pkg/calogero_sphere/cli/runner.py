#!/usr/bin/env python3
"""Command-line launcher: root export, polyhedron export, verification sweeps, simulation."""

import argparse
import logging
import sys
from contextlib import contextmanager
from dataclasses import asdict
from typing import Iterator, List, Optional, TextIO, Union

from calogero_sphere.cli.writers import (
    TrajectoryCsvWriter,
    dumps_json,
    load_initial_state,
    parse_inline_values,
    write_polyhedron_json,
    write_polyhedron_obj,
    write_report_json,
    write_roots_csv,
    write_roots_json,
)
from calogero_sphere.config import configure_logging, load_settings
from calogero_sphere.dynamics import (
    INTEGRATORS,
    check_run,
    conservation_report,
    default_monitors,
    integrate,
)
from calogero_sphere.errors import (
    CalogeroError,
    IntegrationAbortedError,
    InvalidInputError,
    InvalidParameterError,
)
from calogero_sphere.geometry import ModelParams, cuboctahedron, root_system
from calogero_sphere.states import PhaseState, ReducedPhaseState
from calogero_sphere.verification import DEFAULT_TOLERANCES, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

SOLIDS = ("cuboctahedron",)


@contextmanager
def _output(path: Optional[str]) -> Iterator[TextIO]:
    """Open `path` for writing, or yield stdout for None / '-'."""
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        yield f


def cmd_roots(args: argparse.Namespace) -> int:
    """Emit the root vectors of A_{N-1} with pair labels and the cosine matrix."""
    rs = root_system(args.n)
    with _output(args.out) as stream:
        if args.format == "csv":
            write_roots_csv(rs, stream)
        else:
            write_roots_json(rs, stream)
    logger.info("Wrote %d roots for N=%d", len(rs), args.n)
    return EXIT_OK


def cmd_geometry(args: argparse.Namespace) -> int:
    """Emit the cuboctahedron of the N=4 force centers."""
    solid = cuboctahedron()
    with _output(args.out) as stream:
        if args.format == "obj":
            write_polyhedron_obj(solid, stream)
        else:
            write_polyhedron_json(solid, stream)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    """Run a verification suite and emit its JSON report; exit 1 if it fails."""
    report = run_suite(
        args.suite,
        n=args.n,
        samples=args.samples,
        seed=args.seed,
        tol=args.tol,
        fd_step=args.fd_step,
        g=args.g,
    )
    with _output(args.out) as stream:
        write_report_json(report.as_dict(), stream)
    logger.info("Suite %s %s", args.suite, "passed" if report.passed else "failed")
    return EXIT_OK if report.passed else EXIT_FAILURE


def _initial_state(args: argparse.Namespace) -> Union[PhaseState, ReducedPhaseState]:
    inline_lab = args.x is not None or args.p is not None
    inline_reduced = args.y is not None or args.py is not None
    sources = sum([args.init is not None, inline_lab, inline_reduced])
    if sources != 1:
        raise InvalidInputError(
            "Give exactly one initial state: --init FILE, --x/--p or --y/--py"
        )
    if args.init is not None:
        return load_initial_state(args.init)
    if inline_lab:
        if args.x is None or args.p is None:
            raise InvalidInputError("--x and --p must be given together")
        return PhaseState(
            x=parse_inline_values(args.x, "x"), p=parse_inline_values(args.p, "p")
        )
    if args.y is None or args.py is None:
        raise InvalidInputError("--y and --py must be given together")
    return ReducedPhaseState(
        y=parse_inline_values(args.y, "y"), py=parse_inline_values(args.py, "py")
    )


def _drift_line(traj) -> str:
    report = conservation_report(traj)
    return dumps_json({name: asdict(stats) for name, stats in report.items()}, indent=None)


def cmd_simulate(args: argparse.Namespace) -> int:
    """Integrate a trajectory, stream it as CSV and print the drift report on stderr."""
    state0 = _initial_state(args)
    if args.n is None:
        n = state0.n_particles if isinstance(state0, PhaseState) else state0.dimension + 1
    else:
        n = args.n
    params = ModelParams(n_particles=n, coupling=args.g)
    monitors = default_monitors(params)
    check_run(
        state0,
        params,
        dt=args.dt,
        steps=args.steps,
        record_stride=args.stride,
        monitors=monitors,
        integrator=args.integrator,
    )
    # the drift report compares the first and last samples
    if args.steps < args.stride:
        raise InvalidParameterError(
            f"--steps ({args.steps}) must be at least --stride ({args.stride})"
        )

    with _output(args.out) as stream:
        writer = TrajectoryCsvWriter(stream, state0, monitors)
        try:
            traj = integrate(
                state0,
                params,
                dt=args.dt,
                steps=args.steps,
                record_stride=args.stride,
                monitors=monitors,
                integrator=args.integrator,
                on_sample=writer.write_sample,
            )
        except IntegrationAbortedError as e:
            writer.write_abort(e)
            logger.error("Integration aborted: %s", e)
            partial = e.trajectory
            if partial is not None and len(partial.samples) >= 2:
                print(_drift_line(partial), file=sys.stderr)
            return EXIT_FAILURE

    logger.info("Recorded %d samples up to t=%g", len(traj.samples), traj.final_time)
    print(_drift_line(traj), file=sys.stderr)
    return EXIT_OK


def build_parser(fd_step_default: float = 1e-5) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="calogero-sphere",
        description="Calogero model reduction, Higgs oscillator geometry and verification",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  calogero-sphere roots --n 4 --format json
  calogero-sphere geometry --solid cuboctahedron --format obj --out cuboc.obj
  calogero-sphere verify --suite ksq --samples 1000 --seed 1 --tol 1e-9
  calogero-sphere simulate --g 1 --y 1.0,0.5 --py 0.0,0.3 --dt 1e-4 --steps 1000 --out run.csv

Exit codes: 0 pass, 1 verification or integration failure, 2 usage error.
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    roots = sub.add_parser("roots", help="Export the root vectors and cosine matrix")
    roots.add_argument("--n", type=int, default=4, help="Particle count N (default: 4)")
    roots.add_argument(
        "--format",
        choices=("json", "csv"),
        default="json",
        help="Output format (default: json)",
    )
    roots.add_argument("--out", default=None, help="Output path (default: stdout)")
    roots.set_defaults(handler=cmd_roots)

    geometry = sub.add_parser("geometry", help="Export the N=4 force-center polyhedron")
    geometry.add_argument(
        "--solid",
        choices=SOLIDS,
        default="cuboctahedron",
        help="Solid (default: cuboctahedron)",
    )
    geometry.add_argument(
        "--format",
        choices=("json", "obj"),
        default="json",
        help="Output format (default: json)",
    )
    geometry.add_argument("--out", default=None, help="Output path (default: stdout)")
    geometry.set_defaults(handler=cmd_geometry)

    verify = sub.add_parser("verify", help="Run a verification sweep")
    verify.add_argument(
        "--suite",
        choices=tuple(DEFAULT_TOLERANCES),
        required=True,
        help="Suite to run",
    )
    verify.add_argument(
        "--n",
        type=int,
        default=4,
        help="Particle count for the roots suite (default: 4)",
    )
    verify.add_argument(
        "--samples",
        type=int,
        default=100,
        help="Random samples (default: 100)",
    )
    verify.add_argument(
        "--seed",
        type=int,
        default=None,
        help="Seed, required for randomized suites",
    )
    verify.add_argument(
        "--tol",
        type=float,
        default=None,
        help="Tolerance (default: per suite)",
    )
    verify.add_argument(
        "--fd-step",
        type=float,
        default=fd_step_default,
        help=f"Finite-difference step (default: {fd_step_default:g}, env CALOGERO_FD_STEP)",
    )
    verify.add_argument("--g", type=float, default=1.0, help="Coupling (default: 1.0)")
    verify.add_argument("--out", default=None, help="Report path (default: stdout)")
    verify.set_defaults(handler=cmd_verify)

    simulate = sub.add_parser("simulate", help="Integrate a trajectory to CSV")
    simulate.add_argument(
        "--n",
        type=int,
        default=None,
        help="Particle count (default: from the state)",
    )
    simulate.add_argument(
        "--g",
        type=float,
        default=1.0,
        help="Coupling (default: 1.0)",
    )
    simulate.add_argument(
        "--init",
        default=None,
        help="YAML/JSON file with {x, p} or {y, py}",
    )
    simulate.add_argument(
        "--x",
        default=None,
        help="Lab-frame positions, comma-separated",
    )
    simulate.add_argument(
        "--p",
        default=None,
        help="Lab-frame momenta, comma-separated",
    )
    simulate.add_argument(
        "--y",
        default=None,
        help="Reduced coordinates, comma-separated",
    )
    simulate.add_argument("--py", default=None, help="Reduced momenta, comma-separated")
    simulate.add_argument(
        "--dt",
        type=float,
        default=1e-4,
        help="Time step (default: 1e-4)",
    )
    simulate.add_argument(
        "--steps",
        type=int,
        default=1000,
        help="Number of steps (default: 1000)",
    )
    simulate.add_argument(
        "--stride",
        type=int,
        default=1,
        help="Record every k-th step (default: 1)",
    )
    simulate.add_argument(
        "--integrator",
        choices=INTEGRATORS,
        default="leapfrog",
        help="Integrator (default: leapfrog)",
    )
    simulate.add_argument(
        "--format",
        choices=("csv",),
        default="csv",
        help="Output format (default: csv)",
    )
    simulate.add_argument("--out", default=None, help="Output path (default: stdout)")
    simulate.set_defaults(handler=cmd_simulate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main launcher function for command line usage."""
    try:
        settings = load_settings()
    except CalogeroError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(settings)

    parser = build_parser(settings.fd_step)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        return args.handler(args)
    except (CalogeroError, ValueError, FileNotFoundError) as e:
        logger.error("%s", e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
