"""
Command line entry point. Exit codes: 0 when every check passes, 1 when a check fails, 2 for unreadable
or malformed input.
"""

from __future__ import annotations

import logging
import sys
import time
from argparse import ArgumentParser, ArgumentTypeError, Namespace, RawDescriptionHelpFormatter
from dataclasses import replace
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from envolved import describe_env_vars
from pydantic import ValidationError

from hydrobracket._version import __version__
from hydrobracket.config import DEFAULT_RESIDUAL_LIMIT, LogLevel, Settings, get_settings, non_negative, wide_enough
from hydrobracket.exceptions import (
    CrossCheckFailed,
    DimensionMismatch,
    IntegrationFailed,
    NotSymmetricMatrixError,
    PolyParseError,
    PreconditionFailed,
    ProblemFileError,
    SingularMatrixError,
)
from hydrobracket.frontend.describe import describe_report
from hydrobracket.frontend.fixtures import fixture_bytes, list_fixtures
from hydrobracket.frontend.parsers import parse_poly
from hydrobracket.frontend.problem import (
    ConstantFormFile,
    DensityFile,
    FlowFile,
    GeneralFormFile,
    LoadedProblem,
    WdvvFile,
    load_problem,
)
from hydrobracket.frontend.report import build_report, write_report
from hydrobracket.hierarchy import FlowSpec, commutation_report, run_hierarchy, structural_flows
from hydrobracket.locality import Functional, involution_residual, locality_residual, localize, wdvv_involution_check
from hydrobracket.operators import (
    ConstantFormSpec,
    GeneralFormSpec,
    check_pencil,
    hessian_affinors,
    verify_constant_form,
    verify_general_form,
)
from hydrobracket.verification import VerificationReport, relation_from_matrix, relation_from_tensor
from hydrobracket.wdvv import (
    abc_flow_check,
    affinors_from_phi,
    associativity_residual,
    structure_constants,
    verify_wdvv,
)

__all__ = ["main"]

logger = logging.getLogger(__name__)

Outputs = Dict[str, List[str]]
Outcome = Tuple[List[VerificationReport], Outputs]

INPUT_ERRORS = (
    PolyParseError,
    ProblemFileError,
    ValidationError,
    OSError,
    DimensionMismatch,
    SingularMatrixError,
    NotSymmetricMatrixError,
)

WDVV_KINDS = ("wdvv",)
CONSTANT_KINDS = ("wdvv", "constant-form", "density")
OPERATOR_KINDS = ("wdvv", "constant-form", "density", "general-form")
FLOW_KINDS = ("wdvv", "constant-form", "density", "flow")


def _constant_form(loaded: LoadedProblem) -> ConstantFormSpec:
    problem = loaded.problem
    if isinstance(problem, WdvvFile):
        return ConstantFormSpec.from_wdvv(problem.to_spec())
    assert isinstance(problem, ConstantFormFile)
    return problem.to_spec()


def _matrices(prefix: str, matrices: Sequence[object]) -> List[str]:
    return [f"{prefix}{n + 1} = {m}" for n, m in enumerate(matrices)]


def verify_wdvv_command(loaded: LoadedProblem, args: Namespace) -> Outcome:
    problem = loaded.problem
    assert isinstance(problem, WdvvFile)
    prob = problem.to_spec()
    algebra = VerificationReport(
        "Frobenius algebra",
        (relation_from_tensor("algebra associativity", associativity_residual(structure_constants(prob))),),
    )
    involution = wdvv_involution_check(prob)
    wdvv = verify_wdvv(prob)
    checks = [wdvv, algebra, VerificationReport("involution", (involution.relation("involution"),))]
    outputs: Outputs = {"potential": [str(prob.phi)], "affinors": _matrices("w", affinors_from_phi(prob))}
    f = prob.reduced_potential()
    if f is not None and wdvv.passed:
        checks.append(abc_flow_check(f))
        outputs["reduced potential"] = [str(f)]
    return checks, outputs


def _general_form_checks(spec: GeneralFormSpec) -> List[VerificationReport]:
    report = verify_general_form(spec)
    if not report.passed:
        return [report]
    return [report, check_pencil(spec)]


def verify_operator_command(loaded: LoadedProblem, args: Namespace) -> Outcome:
    problem = loaded.problem
    if isinstance(problem, GeneralFormFile):
        spec = problem.to_spec()
        return _general_form_checks(spec), {"affinors": _matrices("w", spec.ws)}
    constant = _constant_form(loaded)
    checks = [verify_constant_form(constant)]
    if checks[0].passed:
        checks.extend(_general_form_checks(constant.lower()))
    return checks, {"affinors": _matrices("w", hessian_affinors(constant))}


def hierarchy_command(loaded: LoadedProblem, args: Namespace) -> Outcome:
    spec = _constant_form(loaded)
    state = run_hierarchy(spec, args.steps)
    outputs: Outputs = {
        "densities": [f"h{s + 1} = {h}" for s, h in enumerate(state.densities)],
        "potentials": [
            f"F{n + 1}^({s + 1}) = {p}" for s, step in enumerate(state.steps) for n, p in enumerate(step.potentials)
        ],
        "flows": [f"A^({s + 1}) = {flow.a}" for s, flow in enumerate(state.flows)],
    }
    checks = [verify_constant_form(spec)]
    if args.check_commute:
        checks.append(commutation_report([*structural_flows(spec), *state.flows], "hierarchy commutation"))
    return checks, outputs


def localize_command(loaded: LoadedProblem, args: Namespace) -> Outcome:
    spec = _constant_form(loaded)
    problem = loaded.problem
    if args.density is not None:
        density = parse_poly(args.density, spec.dim)
    elif isinstance(problem, DensityFile):
        density = problem.to_functional().density
    else:
        raise ProblemFileError("a density is required, pass --density or use a 'density' problem file")
    h = Functional(density)
    locality = VerificationReport("locality", (relation_from_tensor("locality", locality_residual(spec, h)),))
    outputs: Outputs = {"density": [str(density)]}
    if locality.passed:
        result = localize(spec, h)
        outputs["potentials"] = [f"P{n + 1} = {p}" for n, p in enumerate(result.potentials)]
        outputs["local density"] = [str(result.density)]
        outputs["flow"] = [str(result.flow.a)]
    return [locality], outputs


def involution_command(loaded: LoadedProblem, args: Namespace) -> Outcome:
    problem = loaded.problem
    if isinstance(problem, WdvvFile):
        return [wdvv_involution_check(problem.to_spec())], {}
    spec = _constant_form(loaded)
    verdicts = [
        relation_from_matrix("involution", involution_residual(spec.psis[a], spec.psis[b], spec.eta), (a, b))
        for a, b in combinations(range(spec.size), 2)
    ]
    merged = VerificationReport(
        "involution",
        (replace(verdicts[0], residuals=tuple(r for v in verdicts for r in v.residuals)),) if verdicts else (),
    )
    return [merged], {}


def commute_command(loaded: LoadedProblem, args: Namespace) -> Outcome:
    problem = loaded.problem
    flows: List[FlowSpec]
    if isinstance(problem, FlowFile):
        flows = problem.to_flows()
    else:
        flows = structural_flows(_constant_form(loaded))
    return [commutation_report(flows)], {"flows": _matrices("A", [f.a for f in flows])}


Command = Callable[[LoadedProblem, Namespace], Outcome]

COMMANDS: Dict[str, Tuple[Command, Sequence[str], str]] = {
    "verify-wdvv": (verify_wdvv_command, WDVV_KINDS, "check the associativity equations of a potential"),
    "verify-operator": (verify_operator_command, OPERATOR_KINDS, "check that an operator is Hamiltonian"),
    "hierarchy": (hierarchy_command, CONSTANT_KINDS, "compute the densities of the bi-Hamiltonian hierarchy"),
    "localize": (localize_command, CONSTANT_KINDS, "check locality of a Hamiltonian and compute its local flow"),
    "involution": (involution_command, CONSTANT_KINDS, "check that the potentials are pairwise in involution"),
    "commute": (commute_command, FLOW_KINDS, "check pairwise commutation of flows"),
}


def _count(text: str) -> int:
    try:
        return non_negative(int(text))
    except ValueError as e:
        raise ArgumentTypeError(str(e)) from e


def _width(text: str) -> int:
    try:
        return wide_enough(int(text))
    except ValueError as e:
        raise ArgumentTypeError(str(e)) from e


def _arg_parser() -> ArgumentParser:
    ret = ArgumentParser(
        prog="hydrobracket",
        description="Exact verification of nonlocal Hamiltonian operators of hydrodynamic type.",
        epilog="environment variables:\n" + "\n".join("  " + line for line in describe_env_vars()),
        formatter_class=RawDescriptionHelpFormatter,
    )
    ret.add_argument("--version", action="version", version=__version__)
    ret.add_argument(
        "--residual-limit",
        type=_count,
        default=DEFAULT_RESIDUAL_LIMIT,
        help=f"residual entries kept per check (default {DEFAULT_RESIDUAL_LIMIT})",
    )
    ret.add_argument("--log-level", type=str.upper, choices=[lvl.name for lvl in LogLevel], default=None)
    ret.add_argument("--width", type=_width, default=None, help="wrap width of the text report")
    ret.add_argument("--timing", action="store_true", help="record the elapsed time in the report")
    ret.add_argument("--out", default=None, help="write the JSON report to this path")
    subparsers = ret.add_subparsers(dest="command", required=True)
    for name, (_, _, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("file", help="problem file, or fixtures/<name> for a built-in fixture")
        if name == "hierarchy":
            sub.add_argument("--steps", type=_count, default=1)
            sub.add_argument("--check-commute", action="store_true", help="also check that all flows commute")
        elif name == "localize":
            sub.add_argument("--density", default=None, help="the density h, overriding the problem file")
    fixtures = subparsers.add_parser("fixtures", help="list or show the built-in fixtures")
    fixtures.add_argument("action", choices=["list", "show"])
    fixtures.add_argument("name", nargs="?", default=None)
    return ret


def _settings(args: Namespace) -> Settings:
    settings = get_settings()
    if args.log_level is not None:
        settings = replace(settings, log_level=LogLevel[args.log_level])
    if args.width is not None:
        settings = replace(settings, report_width=args.width)
    return settings


def _fixtures_command(args: Namespace) -> int:
    if args.action == "list":
        sys.stdout.write("\n".join(list_fixtures()) + "\n")
        return 0
    if args.name is None:
        sys.stderr.write("fixtures show requires a fixture name\n")
        return 2
    sys.stdout.write(fixture_bytes(args.name).decode("utf-8"))
    return 0


def _run(args: Namespace, settings: Settings) -> int:
    func, kinds, _ = COMMANDS[args.command]
    start = time.perf_counter()
    loaded = load_problem(args.file, kinds=kinds)
    try:
        checks, outputs = func(loaded, args)
    except PreconditionFailed as e:
        logger.warning("%s", e)
        checks = [e.report] if e.report is not None else []
        outputs = {"error": [str(e)]}
        if not checks:
            checks = [VerificationReport(str(e))]
    report = build_report(
        args.command,
        loaded.source,
        loaded.digest,
        checks,
        outputs,
        limit=args.residual_limit,
        elapsed_seconds=time.perf_counter() - start if args.timing else None,
    )
    if "error" in outputs and report.passed:
        report = report.model_copy(update={"verdict": "fail"})
    sys.stdout.write("\n".join(describe_report(report, settings.report_width)) + "\n")
    if args.out is not None:
        write_report(report, args.out)
    return 0 if report.passed else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _arg_parser().parse_args(argv)
    try:
        settings = _settings(args)
    except ValueError as e:
        sys.stderr.write(f"invalid configuration: {e}\n")
        return 2
    logging.basicConfig(
        level=settings.log_level.value, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        if args.command == "fixtures":
            return _fixtures_command(args)
        return _run(args, settings)
    except INPUT_ERRORS as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except (IntegrationFailed, CrossCheckFailed) as e:
        sys.stderr.write(f"check failed: {e}\n")
        return 1
