from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Tuple

from hydrobracket.algebra.calculus import gradient, hessian, integrate_gradient, integrate_hessian
from hydrobracket.algebra.matrix import ConstSymMatrix, PolyMatrix, PolyTensor
from hydrobracket.algebra.poly import Poly
from hydrobracket.exceptions import (
    CrossCheckFailed,
    DimensionMismatch,
    IntegrationFailed,
    NotClosed,
    NotSymmetric,
    PreconditionFailed,
)
from hydrobracket.hierarchy import FlowSpec, dual_flows, mu_combination, step_potentials
from hydrobracket.operators import ConstantFormSpec, verify_constant_form
from hydrobracket.verification import VerificationReport, relation_from_residuals, relation_from_tensor
from hydrobracket.wdvv import WdvvProblem, wdvv_residual

__all__ = [
    "Functional",
    "Localization",
    "hamiltonian_flow",
    "involution_certificate",
    "involution_residual",
    "locality_residual",
    "localize",
    "wdvv_involution_check",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Functional:
    """
    The functional H = integral of h(u(x)) dx of a density that depends on the fields only.
    """

    density: Poly

    @property
    def dim(self) -> int:
        return self.density.dim


def locality_residual(spec: ConstantFormSpec, h: Functional) -> PolyTensor:
    """
    Entry (n, s, p) is psi_n,js eta^jr h_,rp - psi_n,jp eta^jr h_,rs. The Hamiltonian system of h is local
    exactly when the tensor vanishes.
    """
    n = spec.dim
    if h.dim != n:
        raise DimensionMismatch(f"density of dimension {h.dim} against an operator of dimension {n}")
    contracted = spec.eta_matrix @ hessian(h.density)
    entries: Dict[Tuple[int, ...], Poly] = {}
    for m, hm in enumerate(spec.hessians):
        for s, p, diff in (hm @ contracted).asymmetries():
            entries[m, s, p] = diff
            entries[m, p, s] = -diff
    return PolyTensor((spec.size, n, n), n, entries)


@dataclass(frozen=True)
class Localization:
    """
    The local form of the Hamiltonian system of a density.

    :param potentials: P_1..P_L.
    :param density: f with hessian(f) = sum_mn mu^mn P_n Hess(psi_m).
    :param flow: the local flow A = eta sum_mn mu^mn P_n Hess(psi_m).
    :param hessian_flow: the same flow as eta Hess(f).
    """

    potentials: Tuple[Poly, ...]
    density: Poly
    flow: FlowSpec
    hessian_flow: FlowSpec


def localize(spec: ConstantFormSpec, h: Functional) -> Localization:
    """
    Rewrite the Hamiltonian system of `h` as a local system of hydrodynamic type.

    :raises PreconditionFailed: if the operator is not Hamiltonian or `h` fails the locality criterion.
    :raises IntegrationFailed: if an integration that the criterion guarantees does not succeed.
    """
    report = verify_constant_form(spec)
    locality = relation_from_tensor("locality", locality_residual(spec, h))
    report = report.merge(VerificationReport("locality", (locality,)), "localization preconditions")
    if not report.passed:
        raise PreconditionFailed(f"{h.density} cannot be localized", report)
    potentials = step_potentials(spec, h.density)
    combination = mu_combination(spec, potentials)
    try:
        density = integrate_hessian(combination)
    except (NotClosed, NotSymmetric) as e:
        raise IntegrationFailed(f"integration failed although {h.density} is local: {e}") from e
    flow, hessian_flow = dual_flows(spec, combination, density)
    logger.debug("localized %s to a flow with density %s", h.density, density)
    return Localization(potentials, density, flow, hessian_flow)


def hamiltonian_flow(spec: ConstantFormSpec, h: Functional) -> FlowSpec:
    return localize(spec, h).flow


def _involution_form(psi_a: Poly, psi_b: Poly, eta: ConstSymMatrix) -> Tuple[Poly, ...]:
    # omega_k = psi_a,i eta^ij psi_b,jk
    if psi_a.dim != psi_b.dim or psi_a.dim != eta.size:
        raise DimensionMismatch("both potentials and eta must share one dimension")
    raised = eta.apply(gradient(psi_a))
    return hessian(psi_b).apply(raised)


def involution_residual(psi_a: Poly, psi_b: Poly, eta: ConstSymMatrix) -> PolyMatrix:
    """
    Entry (l, k) is d_l omega_k - d_k omega_l for omega_k = psi_a,i eta^ij psi_b,jk. The functionals of
    psi_a and psi_b are in involution under the constant bracket exactly when the matrix vanishes.
    """
    omega = _involution_form(psi_a, psi_b, eta)
    n = psi_a.dim
    return PolyMatrix.from_function(n, n, n, lambda q, k: omega[k].partial(q) - omega[q].partial(k))


def involution_certificate(psi_a: Poly, psi_b: Poly, eta: ConstSymMatrix) -> Poly:
    """
    The potential S with dS/du^k = psi_a,i eta^ij psi_b,jk.

    :raises NotClosed: if the pair is not in involution.
    """
    return integrate_gradient(_involution_form(psi_a, psi_b, eta))


def wdvv_involution_check(prob: WdvvProblem) -> VerificationReport:
    """
    Check that the functionals of psi_n = dPhi/du^n are pairwise in involution, and that this agrees with
    the associativity equations of Phi. Residual indices are (n, m, l, k).

    :raises CrossCheckFailed: if the two criteria disagree.
    """
    psis = gradient(prob.phi)
    residuals: List[Tuple[Tuple[int, ...], Poly]] = []
    for a, b in combinations(range(prob.dim), 2):
        matrix = involution_residual(psis[a], psis[b], prob.eta)
        rows, cols = matrix.shape
        residuals.extend(((a, b, q, k), matrix[q, k]) for q in range(rows) for k in range(cols))
    involution = relation_from_residuals("involution", residuals)
    associativity = relation_from_tensor("associativity equations", wdvv_residual(prob))
    if involution.passed != associativity.passed:
        raise CrossCheckFailed(
            f"involution ({involution.passed}) and associativity ({associativity.passed}) disagree for {prob.phi}"
        )
    return VerificationReport("involution", (involution, associativity))
