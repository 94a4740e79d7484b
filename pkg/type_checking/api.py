from fractions import Fraction
from typing import List, Optional, Tuple

from hydrobracket import (
    ConstantFormSpec,
    ConstSymMatrix,
    FlowSpec,
    HierarchyState,
    JetPoly,
    Poly,
    VerificationReport,
    WdvvProblem,
    run_hierarchy,
    verify_constant_form,
    verify_wdvv,
)
from hydrobracket.config import Settings, settings_ev
from hydrobracket.frontend import parse_poly

u: Poly = parse_poly("1/6*u1^3", 1)
c: Fraction = u.terms[(3,)]
terms: List[Tuple[Tuple[int, ...], Fraction]] = list(u.terms.items())
eta = ConstSymMatrix.identity(1)

spec = ConstantFormSpec(eta, eta, (u,))
report: VerificationReport = verify_constant_form(spec)
passed: bool = report.passed
state: HierarchyState = run_hierarchy(spec, 2)
flows: Tuple[FlowSpec, ...] = state.flows

prob = WdvvProblem(ConstSymMatrix.identity(2), parse_poly("1/2*u1^2*u2", 2))
f: Optional[Poly] = prob.reduced_potential()
verify_wdvv(prob)

jet: JetPoly = JetPoly.u_x(2, 0) * JetPoly.u(2, 1)

with settings_ev.patch(Settings(report_width=60)):
    width: int = settings_ev.get().report_width
