from hydrobracket.frontend.cli import main
from hydrobracket.frontend.describe import describe_report
from hydrobracket.frontend.fixtures import fixture_bytes, list_fixtures
from hydrobracket.frontend.parsers import parse_poly, parse_rational_grid, parse_scalar, print_canonical
from hydrobracket.frontend.problem import LoadedProblem, ProblemFile, load_problem
from hydrobracket.frontend.report import Report, build_report

__all__ = [
    "LoadedProblem",
    "ProblemFile",
    "Report",
    "build_report",
    "describe_report",
    "fixture_bytes",
    "list_fixtures",
    "load_problem",
    "main",
    "parse_poly",
    "parse_rational_grid",
    "parse_scalar",
    "print_canonical",
]
