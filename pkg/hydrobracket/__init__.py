from hydrobracket._version import __version__
from hydrobracket.algebra import ConstSymMatrix, JetPoly, Poly, PolyMatrix, PolyTensor
from hydrobracket.exceptions import (
    CrossCheckFailed,
    DimensionMismatch,
    HydroBracketError,
    IntegrationFailed,
    JetOrderError,
    NotClosed,
    NotSymmetric,
    PolyParseError,
    PreconditionFailed,
    ProblemFileError,
)
from hydrobracket.hierarchy import FlowSpec, HierarchyState, flows_commute, run_hierarchy, structural_flows
from hydrobracket.locality import Functional, involution_residual, locality_residual, localize, wdvv_involution_check
from hydrobracket.operators import (
    ConstantFormSpec,
    GeneralFormSpec,
    check_gauss,
    check_pencil,
    check_ricci,
    curvature,
    verify_constant_form,
    verify_general_form,
)
from hydrobracket.verification import RelationVerdict, VerificationReport
from hydrobracket.wdvv import WdvvProblem, abc_flow_check, dubrovin_residual, verify_wdvv, wdvv_residual

__all__ = [
    "__version__",
    "ConstSymMatrix",
    "ConstantFormSpec",
    "CrossCheckFailed",
    "DimensionMismatch",
    "FlowSpec",
    "Functional",
    "GeneralFormSpec",
    "HierarchyState",
    "HydroBracketError",
    "IntegrationFailed",
    "JetOrderError",
    "JetPoly",
    "NotClosed",
    "NotSymmetric",
    "Poly",
    "PolyMatrix",
    "PolyParseError",
    "PolyTensor",
    "PreconditionFailed",
    "ProblemFileError",
    "RelationVerdict",
    "VerificationReport",
    "WdvvProblem",
    "abc_flow_check",
    "check_gauss",
    "check_pencil",
    "check_ricci",
    "curvature",
    "dubrovin_residual",
    "flows_commute",
    "involution_residual",
    "locality_residual",
    "localize",
    "run_hierarchy",
    "structural_flows",
    "verify_constant_form",
    "verify_general_form",
    "verify_wdvv",
    "wdvv_involution_check",
    "wdvv_residual",
]
