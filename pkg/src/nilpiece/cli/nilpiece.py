# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

# PYTHON_ARGCOMPLETE_OK

"""Entrypoint to the nilpiece tool."""

from __future__ import annotations

import argparse
import os.path
import sys
from functools import partial

try:
    import argcomplete

    HAS_ARGCOMPLETE = True
except ImportError:
    HAS_ARGCOMPLETE = False

from antsibull_core.logging import (
    configure_logger,
    get_module_logger,
    initialize_app_logging,
)

initialize_app_logging()

# We have to call initialize_app_logging() before these imports so that the log object is configured
# correctly before other nilpiece modules make copies of it.
# pylint: disable=wrong-import-position,ungrouped-imports
from antsibull_core import app_context  # noqa: E402
from antsibull_core.args import (  # noqa: E402
    InvalidArgumentError,
    get_toplevel_parser,
    normalize_toplevel_options,
)
from antsibull_core.config import ConfigError, load_config  # noqa: E402
from antsibull_core.vendored._argparse_booleanoptionalaction import (  # noqa: E402
    BooleanOptionalAction,
)

from ..commands import (  # noqa: E402
    census_command,
    classify_command,
    selftest_command,
    universality_command,
    verify_bijection_command,
    verify_counts_command,
    verify_fibers_command,
    verify_prop2_command,
)
from ..constants import MAX_FIELD_ORDER, UNIVERSALITY_ORDERS  # noqa: E402
from ..exceptions import (  # noqa: E402
    ALL_ERRORS,
    InternalInvariantViolation,
    NilpieceError,
)

# pylint: enable=wrong-import-position


mlog = get_module_logger(__name__)

eprint = partial(print, file=sys.stderr)

ARGS_MAP = {
    "classify": classify_command,
    "census": census_command,
    "verify-prop2": verify_prop2_command,
    "verify-bijection": verify_bijection_command,
    "verify-fibers": verify_fibers_command,
    "verify-counts": verify_counts_command,
    "universality": universality_command,
    "selftest": selftest_command,
}

DEFAULT_COUNT_ORDERS = "2,3,4,5,8"
DEFAULT_UNIVERSALITY_ORDERS = ",".join(str(q) for q in UNIVERSALITY_ORDERS)


def _diagnostics_epilog() -> str:
    lines = [
        "exit codes: 0 success, 1 mathematical finding, 2 usage or size error",
        "",
        "diagnostics printed as 'nilpiece: <diagnostic>: <message>':",
        f"  {'usage':<20} invalid command line arguments",
        f"  {'config':<20} the configuration file could not be loaded",
    ]
    for error in ALL_ERRORS:
        summary = (error.__doc__ or error.__name__).strip().splitlines()[0]
        lines.append(f"  {error.diagnostic:<20} {summary}")
    return "\n".join(lines)


def _prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = next(d for d in range(2, q + 1) if q % d == 0)
    while q % p == 0:
        q //= p
    return q == 1


def _normalize_commands(
    args: argparse.Namespace,  # pylint: disable=unused-argument
) -> None:
    # If command names change and old ones need to be deprecated, do that here.
    pass


def _normalize_field_options(args: argparse.Namespace) -> None:
    if "p" not in args:
        return

    if args.k < 1:
        raise InvalidArgumentError(f"--k must be at least 1, not {args.k}")
    if args.p < 2:
        raise InvalidArgumentError(f"--p must be a prime, not {args.p}")


def _normalize_rank_options(args: argparse.Namespace) -> None:
    if "N" not in args:
        return

    if args.N < 1:
        raise InvalidArgumentError(f"--N must be at least 1, not {args.N}")


def _normalize_jobs_options(args: argparse.Namespace) -> None:
    if "jobs" not in args or args.jobs is None:
        return

    if args.jobs < 1:
        raise InvalidArgumentError(f"--jobs must be at least 1, not {args.jobs}")


def _normalize_classify_options(args: argparse.Namespace) -> None:
    if args.command != "classify":
        return

    if args.demo:
        if args.input is not None:
            raise InvalidArgumentError("--demo and --input cannot be combined")
        return

    if args.input is None:
        raise InvalidArgumentError("classify needs --input FILE (or --demo)")
    if not os.path.isfile(args.input):
        raise InvalidArgumentError(f"{args.input} must be an existing file")


def _normalize_census_options(args: argparse.Namespace) -> None:
    if args.command != "census":
        return

    if args.csv and args.table:
        raise InvalidArgumentError("--csv and --table cannot be combined")


def _normalize_q_list_options(args: argparse.Namespace) -> None:
    if "q_list" not in args:
        return

    if args.q_list is None:
        args.q_list = (
            DEFAULT_UNIVERSALITY_ORDERS
            if args.command == "universality"
            else DEFAULT_COUNT_ORDERS
        )
    try:
        orders = [int(item) for item in args.q_list.split(",")]
    except ValueError:
        raise InvalidArgumentError(
            f"--q-list must be a comma separated list of integers, not {args.q_list!r}"
        ) from None
    for q in orders:
        if not _prime_power(q) or q > MAX_FIELD_ORDER:
            raise InvalidArgumentError(
                f"--q-list entry {q} is not a prime power up to {MAX_FIELD_ORDER}"
            )
    if len(set(orders)) != len(orders):
        raise InvalidArgumentError("--q-list entries must be distinct")
    args.q_list = orders


def _normalize_n_max_options(args: argparse.Namespace) -> None:
    if "n_max" not in args:
        return

    if args.n_max < 1:
        raise InvalidArgumentError(f"--n-max must be at least 1, not {args.n_max}")


def parse_args(program_name: str, args: list[str]) -> argparse.Namespace:
    """
    Parse and coerce the command line arguments.

    :arg program_name: The name of the program
    :arg args: A list of the command line arguments
    :returns: A :python:`argparse.Namespace`
    :raises InvalidArgumentError: Whenever there's something wrong with the arguments.
    """
    field_parser = argparse.ArgumentParser(add_help=False)
    field_parser.add_argument(
        "--p", type=int, default=2, help="Characteristic of the field. Default: 2"
    )
    field_parser.add_argument(
        "--k",
        type=int,
        default=1,
        help="Degree of the field over its prime field. The field has p^k"
        f" elements, at most {MAX_FIELD_ORDER}. Default: 1",
    )

    rank_parser = argparse.ArgumentParser(add_help=False)
    rank_parser.add_argument(
        "--N",
        type=int,
        default=1,
        help="Rank of the standard space, which has dimension 2N+1. Default: 1",
    )

    output_parser = argparse.ArgumentParser(add_help=False)
    output_parser.add_argument(
        "--output",
        default=None,
        help="Write the report to this file instead of stdout",
    )

    jobs_parser = argparse.ArgumentParser(add_help=False)
    jobs_parser.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="Number of partitions enumerated concurrently. Changes the"
        " running time only, never the output. Defaults to the thread_max"
        " setting of the configuration",
    )

    force_parser = argparse.ArgumentParser(add_help=False)
    force_parser.add_argument(
        "--force",
        action="store_true",
        help="Lift the size guards. Enumerations beyond them can run for hours",
    )

    timing_parser = argparse.ArgumentParser(add_help=False)
    timing_parser.add_argument(
        "--timing",
        action="store_true",
        help="Include the elapsed wall time in the report",
    )

    seed_parser = argparse.ArgumentParser(add_help=False)
    seed_parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="Seed for the randomized choices that must not change the result."
        " Default: 0",
    )

    q_list_parser = argparse.ArgumentParser(add_help=False)
    q_list_parser.add_argument(
        "--q-list",
        dest="q_list",
        default=None,
        help="Comma separated field orders. Default: "
        f"{DEFAULT_COUNT_ORDERS} (universality: {DEFAULT_UNIVERSALITY_ORDERS})",
    )

    # Delay import to avoid potential import loops
    # pylint: disable-next=import-outside-toplevel
    from nilpiece import __version__ as _ver

    parser = get_toplevel_parser(
        prog=program_name,
        package="nilpiece",
        description="Classify nilpotent elements of the dual of odd orthogonal"
        " Lie algebras over small finite fields into pieces",
        package_version=_ver,
    )
    parser.epilog = _diagnostics_epilog()
    parser.formatter_class = argparse.RawDescriptionHelpFormatter

    subparsers = parser.add_subparsers(
        title="Subcommands",
        dest="command",
        help="for help use nilpiece SUBCOMMANDS -h",
    )
    subparsers.required = True

    classify_parser = subparsers.add_parser(
        "classify",
        parents=[field_parser, rank_parser, output_parser, seed_parser],
        description="Find the piece containing one alternating form",
    )
    classify_parser.add_argument(
        "--input",
        default=None,
        help="JSON or YAML document with the form, given by 'lower' (strict"
        " lower triangle row by row) or 'gram'",
    )
    classify_parser.add_argument(
        "--explain",
        action=BooleanOptionalAction,
        default=False,
        help="Include the case taken at every level of the recursion",
    )
    classify_parser.add_argument(
        "--demo",
        action="store_true",
        help="Print the regular form of the 3-dimensional space as an input"
        " document and exit",
    )

    census_parser = subparsers.add_parser(
        "census",
        parents=[
            field_parser,
            rank_parser,
            output_parser,
            jobs_parser,
            force_parser,
            timing_parser,
        ],
        description="Classify every nilpotent form and tally the pieces",
    )
    census_parser.add_argument(
        "--csv", action="store_true", help="Print the tally as CSV"
    )
    census_parser.add_argument(
        "--table", action="store_true", help="Print the tally as an aligned table"
    )

    prop2_parser = subparsers.add_parser(
        "verify-prop2",
        parents=[
            field_parser,
            rank_parser,
            output_parser,
            jobs_parser,
            force_parser,
            timing_parser,
            seed_parser,
        ],
        description="Check that the centralizer of a graded form stabilizes"
        " its filtration exactly when the form is open, for every profile",
    )
    prop2_parser.add_argument(
        "--group-cache",
        dest="group_cache",
        default=None,
        help="Directory in which enumerated isometry groups are cached",
    )

    subparsers.add_parser(
        "verify-bijection",
        parents=[field_parser, rank_parser, output_parser, force_parser, timing_parser],
        description="Check that every nilpotent form lies in exactly one piece"
        " and that classify finds it",
    )

    subparsers.add_parser(
        "verify-fibers",
        parents=[field_parser, rank_parser, output_parser, force_parser, timing_parser],
        description="Group the nilpotent forms by their induced pair and compare"
        " fiber sizes and counts with the formulas",
    )

    counts_parser = subparsers.add_parser(
        "verify-counts",
        parents=[
            field_parser,
            rank_parser,
            output_parser,
            force_parser,
            timing_parser,
            q_list_parser,
        ],
        description="Count isotropic sequences and nilpotent reductions, and"
        " evaluate the point count identities",
    )
    counts_parser.add_argument(
        "--n-max",
        dest="n_max",
        type=int,
        default=4,
        help="Largest rank for the pure formula identities. Default: 4",
    )

    subparsers.add_parser(
        "universality",
        parents=[
            rank_parser,
            output_parser,
            jobs_parser,
            force_parser,
            timing_parser,
            q_list_parser,
        ],
        description="Interpolate the piece counts as polynomials in q",
    )

    subparsers.add_parser(
        "selftest",
        parents=[output_parser],
        description="Run the smallest instance of every acceptance check",
    )

    # This must come after all parser setup
    if HAS_ARGCOMPLETE:
        argcomplete.autocomplete(parser)

    parsed_args: argparse.Namespace = parser.parse_args(args)

    # Validation and coercion
    normalize_toplevel_options(parsed_args)
    _normalize_commands(parsed_args)
    _normalize_field_options(parsed_args)
    _normalize_rank_options(parsed_args)
    _normalize_jobs_options(parsed_args)
    _normalize_classify_options(parsed_args)
    _normalize_census_options(parsed_args)
    _normalize_q_list_options(parsed_args)
    _normalize_n_max_options(parsed_args)

    return parsed_args


def run(args: list[str]) -> int:
    """
    Run the program.

    :arg args: A list of command line arguments.  Typically :python:`sys.argv`.
    :returns: A program return code.  0 for success, integers for any errors.  These are documented
        in :func:`main`.
    """
    flog = mlog.fields(func="run")
    flog.fields(raw_args=args).info("Enter")

    program_name = os.path.basename(args[0])
    try:
        parsed_args: argparse.Namespace = parse_args(program_name, args[1:])
    except InvalidArgumentError as e:
        eprint(f"nilpiece: usage: {e}")
        return 2

    try:
        cfg = load_config(parsed_args.config_file)
        flog.fields(config=cfg).info("Config loaded")
    except ConfigError as e:
        eprint(f"nilpiece: config: {e}")
        return 2

    context_data = app_context.create_contexts(args=parsed_args, cfg=cfg)
    with app_context.app_and_lib_context(context_data) as (app_ctx, dummy_):
        configure_logger(app_ctx)
        flog.debug("Set logging config")

        flog.fields(command=parsed_args.command).info("Action")
        try:
            return ARGS_MAP[parsed_args.command]()
        except InternalInvariantViolation as e:
            eprint(f"nilpiece: {e.diagnostic}: {e}")
            return 1
        except NilpieceError as e:
            eprint(f"nilpiece: {e.diagnostic}: {e}")
            return 2


def main() -> int:
    """
    Entrypoint called from the script.

    console_scripts call functions which take no parameters.  However, it's hard to test a function
    which takes no parameters so this function lightly wraps :func:`run`, which actually does the
    heavy lifting.

    :returns: A program return code.

    Return codes:
        :0: Success
        :1: A mathematical finding: a mismatch, a failed identity or check, a
            form outside the nilpotent cone, or a violated internal invariant
        :2: There was a problem with the command line arguments, the
            configuration, an input document, or a size guard refused to run
    """
    return run(sys.argv)


if __name__ == "__main__":
    sys.exit(main())
