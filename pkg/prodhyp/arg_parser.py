"""
Module implements arg parser for the program
"""

import argparse

from . import suites


TRUE_VALUES = frozenset(("1", "true", "True", "y", "Y"))
FALSE_VALUES = frozenset(("0", "false", "False", "n", "N"))
ALL_VALUES = TRUE_VALUES | FALSE_VALUES


def _get_bool_values() -> str:
    return ", ".join(map(lambda s: f"'{s}'", sorted(ALL_VALUES)))

def _parse_debug(value: str) -> bool:
    if value in TRUE_VALUES:
        return True

    if value in FALSE_VALUES:
        return False

    raise ValueError(
        "Unknown value for the 'debug' parameter: '{}', supported values: {}".format(
            value,
            _get_bool_values()
        )
    )

def _parse_tol(value: str) -> float:
    rv = float(value)
    if rv <= 0:
        raise ValueError(f"Tolerance must be positive, got {value}")
    return rv

def _parse_jobs(value: str) -> int:
    rv = int(value)
    if rv <= 0:
        raise ValueError(f"Jobs must be a positive integer, got {value}")
    return rv

def _parse_epsilon(value: str) -> int:
    rv = int(value)
    if rv not in (1, -1):
        raise ValueError(f"Epsilon must be ±1, got {value}")
    return rv

def _parse_s_range(value: str) -> tuple[float, float, int]:
    start, stop, count = value.split(",")
    rv = (float(start), float(stop), int(count))
    if rv[2] < 1 or (rv[2] > 1 and not rv[0] < rv[1]):
        raise ValueError(f"Expected 'start,stop,count' with count >= 1 and start < stop, got {value}")
    return rv

def _add_output_args(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--format",
        choices=("csv", "json"),
        default=None,
        help="output format, overrides the config"
    )
    parser.add_argument(
        "--out",
        default=None,
        metavar="PATH",
        help="output file, stdout by default"
    )

def _add_tol_arg(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--tol",
        type=_parse_tol,
        default=None,
        help="numerical tolerance, overrides the config"
    )

def _add_run_args(parser: argparse.ArgumentParser):
    _add_tol_arg(parser)
    parser.add_argument(
        "--jobs",
        type=_parse_jobs,
        default=None,
        help="number of worker threads for the grid evaluation"
    )
    _add_output_args(parser)

def parse_args(argv: list[str]|None = None) -> argparse.Namespace:
    """
    Processes program arguments, returns parsed data
    """
    parser = argparse.ArgumentParser(
        prog="prodhyp",
        description="curvature of hypersurfaces of Q^n(eps) x R over isoparametric bases"
    )
    parser.add_argument(
        "--debug",
        type=_parse_debug,
        default="0",
        help=f"debug 'flag', allowed values: {_get_bool_values()}"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    report = subparsers.add_parser("report", help="per-point curvature report of a config")
    report.add_argument("config", help="path to the config document")
    _add_run_args(report)

    sweep = subparsers.add_parser("sweep", help="theorem check over a grid of configs")
    sweep.add_argument("config", help="path to the sweep document")
    _add_run_args(sweep)

    rotation = subparsers.add_parser("rotation", help="constant curvature rotation hypersurface")
    rotation.add_argument("--epsilon", type=_parse_epsilon, required=True, help="+1 for S^n, -1 for H^n")
    rotation.add_argument("--n", type=int, required=True, help="dimension of the hypersurface")
    rotation.add_argument("--c", type=float, required=True, help="target sectional curvature")
    rotation.add_argument("--r", type=float, required=True, help="radius of the geodesic sphere base")
    rotation.add_argument(
        "--s-range",
        type=_parse_s_range,
        required=True,
        metavar="A,B,K",
        help="grid of K points over [A, B]"
    )
    _add_tol_arg(rotation)
    _add_output_args(rotation)

    verify = subparsers.add_parser("verify", help="run a verification suite")
    verify.add_argument(
        "suite",
        choices=(*suites.get_suite_types().keys(), "all"),
        help="suite to run"
    )
    _add_output_args(verify)

    return parser.parse_args(argv)
