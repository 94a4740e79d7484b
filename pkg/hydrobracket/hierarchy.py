from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, List, Sequence, Tuple

from hydrobracket.algebra.calculus import gradient, hessian, integrate_gradient, integrate_hessian
from hydrobracket.algebra.jet import flow_velocity, jet_total_x_derivative
from hydrobracket.algebra.matrix import PolyMatrix
from hydrobracket.algebra.poly import JetPoly, Poly
from hydrobracket.exceptions import (
    CrossCheckFailed,
    DimensionMismatch,
    IntegrationFailed,
    NotClosed,
    NotSymmetric,
    PreconditionFailed,
)
from hydrobracket.operators import ConstantFormSpec, hessian_affinors, verify_constant_form
from hydrobracket.verification import VerificationReport, relation_from_residuals

__all__ = [
    "FlowSpec",
    "HierarchyState",
    "HierarchyStep",
    "commutation_report",
    "dual_flows",
    "f_from_psi",
    "flows_commute",
    "initial_state",
    "mu_combination",
    "next_step",
    "quadratic_density",
    "run_hierarchy",
    "step_potentials",
    "structural_flows",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowSpec:
    """
    The system of hydrodynamic type u^i_t = A^i_j(u) u^j_x.
    """

    a: PolyMatrix

    def __post_init__(self) -> None:
        n = self.a.dim
        if self.a.shape != (n, n):
            raise DimensionMismatch(f"a flow matrix over {n} fields must be {n}x{n}, got {self.a.shape}")

    @property
    def dim(self) -> int:
        return self.a.dim

    def velocity(self) -> Tuple[JetPoly, ...]:
        return flow_velocity(self.a)


def structural_flows(spec: ConstantFormSpec) -> List[FlowSpec]:
    """
    The flows u_t = w_n(u) u_x attached to the affinors of the operator.
    """
    return [FlowSpec(w) for w in hessian_affinors(spec)]


def flows_commute(a: FlowSpec, b: FlowSpec) -> Tuple[JetPoly, ...]:
    """
    Component i of the result is D_{t_a} (B u_x)^i - D_{t_b} (A u_x)^i. The flows commute exactly when
    every component is zero.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"flows of dimensions {a.dim} and {b.dim} cannot be compared")
    xa = a.velocity()
    xb = b.velocity()
    return tuple(jet_total_x_derivative(vb, a.a) - jet_total_x_derivative(va, b.a) for va, vb in zip(xa, xb))


def commutation_report(flows: Sequence[FlowSpec], subject: str = "flow commutation") -> VerificationReport:
    """
    Pairwise commutation of a list of flows; residual indices are (first flow, second flow, component).
    """
    residuals = []
    for p, q in combinations(range(len(flows)), 2):
        residuals.extend(((p, q, i), r) for i, r in enumerate(flows_commute(flows[p], flows[q])))
    return VerificationReport(subject, (relation_from_residuals("commuting flows", residuals),))


def f_from_psi(psi: Poly) -> Poly:
    """
    sum_j psi_,j u^j - psi; equals (d-1) psi when psi is homogeneous of degree d.
    """
    ret = -psi
    for j, d in enumerate(gradient(psi)):
        ret += d * Poly.variable(psi.dim, j)
    return ret


def quadratic_density(spec: ConstantFormSpec) -> Poly:
    """
    h_1 = 1/2 eta_ij u^i u^j, built from the exact inverse of eta.
    """
    n = spec.dim
    lowered = spec.eta.inverse()
    u = [Poly.variable(n, i) for i in range(n)]
    ret = Poly.zero(n)
    for i, j, v in lowered.nonzero_items():
        ret += (u[i] * u[j]).scale(v)
    return ret.scale(Fraction(1, 2))


@dataclass(frozen=True)
class HierarchyStep:
    """
    One step s of the density recurrence.

    :param potentials: F_1..F_L of the step.
    :param density: the new density h_{s+1}.
    :param flow: the step's flow in the recurrence form sum_mn mu^mn eta Hess(psi_m) F_n.
    :param hessian_flow: the same flow as eta Hess(h_{s+1}); always equal to `flow`.
    """

    potentials: Tuple[Poly, ...]
    density: Poly
    flow: FlowSpec
    hessian_flow: FlowSpec


@dataclass(frozen=True)
class HierarchyState:
    spec: ConstantFormSpec
    densities: Tuple[Poly, ...]
    steps: Tuple[HierarchyStep, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if len(self.densities) != len(self.steps) + 1:
            raise ValueError("a hierarchy state holds exactly one more density than steps")

    @property
    def step_potentials(self) -> Tuple[Tuple[Poly, ...], ...]:
        return tuple(s.potentials for s in self.steps)

    @property
    def flows(self) -> Tuple[FlowSpec, ...]:
        return tuple(s.flow for s in self.steps)


def initial_state(spec: ConstantFormSpec) -> HierarchyState:
    return HierarchyState(spec, (quadratic_density(spec),))


def _integrated(func: Callable[..., Poly], *args: Any) -> Poly:
    try:
        return func(*args)
    except (NotClosed, NotSymmetric) as e:
        raise IntegrationFailed(f"integration failed, the operator is not Hamiltonian: {e}") from e


def step_potentials(spec: ConstantFormSpec, density: Poly) -> Tuple[Poly, ...]:
    """
    For each n, the potential F_n with dF_n/du^p = psi_n,jp eta^jr h_,r.

    :raises IntegrationFailed: if a covector is not closed.
    """
    raised = spec.eta.apply(gradient(density))
    return tuple(_integrated(integrate_gradient, h.apply(raised)) for h in spec.hessians)


def mu_combination(spec: ConstantFormSpec, potentials: Sequence[Poly]) -> PolyMatrix:
    """
    sum_mn mu^mn P_n Hess(psi_m).
    """
    n = spec.dim
    ret = PolyMatrix.zeros(n, n)
    for m, k, v in spec.mu.nonzero_items():
        ret = ret + spec.hessians[m] * potentials[k].scale(v)
    return ret


def dual_flows(spec: ConstantFormSpec, combination: PolyMatrix, density: Poly) -> Tuple[FlowSpec, FlowSpec]:
    """
    The flow eta M and the flow eta Hess(density); they must agree exactly.

    :raises CrossCheckFailed: if they do not.
    """
    flow = FlowSpec(spec.eta_matrix @ combination)
    hessian_flow = FlowSpec(spec.eta_matrix @ hessian(density))
    if flow != hessian_flow:
        raise CrossCheckFailed(f"flow {flow.a} disagrees with eta Hess({density}) = {hessian_flow.a}")
    return flow, hessian_flow


def next_step(state: HierarchyState) -> HierarchyState:
    """
    Extend the hierarchy by one density: integrate the potentials F_n from the last density, integrate
    sum_mn mu^mn F_n Hess(psi_m) twice to get the next density and cross-check the step's flow.

    :raises IntegrationFailed: chained to the underlying NotClosed/NotSymmetric.
    :raises CrossCheckFailed: if the two forms of the step's flow disagree.
    """
    spec = state.spec
    current = state.densities[-1]
    potentials = step_potentials(spec, current)
    combination = mu_combination(spec, potentials)
    density = _integrated(integrate_hessian, combination)
    flow, hessian_flow = dual_flows(spec, combination, density)
    logger.info(
        "hierarchy step %d: density of degree %d with %d terms", len(state.steps) + 1, density.degree, len(density)
    )
    step = HierarchyStep(potentials, density, flow, hessian_flow)
    return replace(state, densities=(*state.densities, density), steps=(*state.steps, step))


def run_hierarchy(spec: ConstantFormSpec, steps: int) -> HierarchyState:
    """
    Compute `steps` densities beyond h_1.

    :raises PreconditionFailed: if the operator is not Hamiltonian.
    """
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    report = verify_constant_form(spec)
    if not report.passed:
        raise PreconditionFailed("the hierarchy requires a Hamiltonian operator", report)
    state = initial_state(spec)
    for _ in range(steps):
        state = next_step(state)
    return state
