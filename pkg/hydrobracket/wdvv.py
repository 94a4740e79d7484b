from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Tuple

from hydrobracket.algebra.calculus import third_derivatives
from hydrobracket.algebra.matrix import ConstSymMatrix, PolyMatrix, PolyTensor
from hydrobracket.algebra.poly import Poly
from hydrobracket.exceptions import DimensionMismatch, PreconditionFailed
from hydrobracket.verification import VerificationReport, relation_from_residuals, relation_from_tensor

__all__ = [
    "StructureConstants",
    "WdvvProblem",
    "abc_flow_check",
    "affinors_from_phi",
    "ansatz_head",
    "ansatz_part",
    "ansatz_potential",
    "antidiagonal_eta",
    "associativity_residual",
    "dubrovin_residual",
    "structure_constants",
    "verify_wdvv",
    "wdvv_residual",
]

logger = logging.getLogger(__name__)

# 0-based indices of u2 and u3 in the three dimensional reduction
_U2, _U3 = 1, 2


def antidiagonal_eta(n: int = 3) -> ConstSymMatrix:
    return ConstSymMatrix.antidiagonal(n)


def ansatz_head() -> Poly:
    """
    1/2*u1^2*u3 + 1/2*u1*u2^2, the part of the three dimensional potential fixed by the unit e1.
    """
    u1, u2, u3 = (Poly.variable(3, i) for i in range(3))
    half = Fraction(1, 2)
    return (u1**2 * u3 + u1 * u2**2).scale(half)


def _require_reduced(f: Poly) -> None:
    if f.dim != 3:
        raise DimensionMismatch(f"the reduced potential must be a polynomial in u1..u3, got dimension {f.dim}")
    if f.depends_on(0):
        raise DimensionMismatch(f"the reduced potential may only depend on u2 and u3, got {f}")


def ansatz_potential(f: Poly) -> Poly:
    """
    Assemble Phi = 1/2*u1^2*u3 + 1/2*u1*u2^2 + f(u2, u3).

    :raises DimensionMismatch: if f is not a polynomial in u2, u3 of dimension 3.
    """
    _require_reduced(f)
    return ansatz_head() + f


def ansatz_part(phi: Poly) -> Optional[Poly]:
    """
    The reduced potential f if `phi` has the three dimensional ansatz shape, otherwise None.
    """
    if phi.dim != 3:
        return None
    f = phi - ansatz_head()
    if f.depends_on(0):
        return None
    return f


@dataclass(frozen=True)
class WdvvProblem:
    """
    A potential Phi together with the constant metric eta that raises indices in the associativity
    equations.
    """

    eta: ConstSymMatrix
    phi: Poly

    def __post_init__(self) -> None:
        if self.eta.size != self.phi.dim:
            raise DimensionMismatch(f"eta is {self.eta.size}x{self.eta.size} but Phi has dimension {self.phi.dim}")

    @property
    def dim(self) -> int:
        return self.phi.dim

    @classmethod
    def from_ansatz(cls, f: Poly) -> WdvvProblem:
        return cls(antidiagonal_eta(3), ansatz_potential(f))

    def reduced_potential(self) -> Optional[Poly]:
        if self.eta != antidiagonal_eta(self.eta.size):
            return None
        return ansatz_part(self.phi)


@dataclass(frozen=True)
class StructureConstants:
    """
    c^k_ij of the algebra e_i * e_j = c^k_ij e_k, stored in a tensor indexed [k, i, j].
    """

    c: PolyTensor

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def __getitem__(self, index: Tuple[int, int, int]) -> Poly:
        return self.c[index]

    def perturbed(self, index: Tuple[int, int, int], delta: Poly) -> StructureConstants:
        entries = dict(self.c.nonzero_items())
        entries[index] = self.c[index] + delta
        return StructureConstants(PolyTensor(self.c.shape, self.c.dim, entries))


def _raise_first(eta: ConstSymMatrix, third: PolyTensor) -> Dict[Tuple[int, int, int], Poly]:
    # (k, i, j) -> sum_s eta^{ks} Phi_{sij}
    n = eta.size
    raised: Dict[Tuple[int, int, int], Poly] = {}
    for k, i, j in product(range(n), repeat=3):
        if j < i:
            raised[k, i, j] = raised[k, j, i]
            continue
        raised[k, i, j] = sum(
            (third[s, i, j] * eta[k, s] for s in range(n) if eta[k, s]), Poly.zero(third.dim)
        )
    return raised


def structure_constants(prob: WdvvProblem) -> StructureConstants:
    n = prob.dim
    raised = _raise_first(prob.eta, third_derivatives(prob.phi))
    return StructureConstants(PolyTensor((n, n, n), n, raised))


def wdvv_residual(prob: WdvvProblem) -> PolyTensor:
    """
    The associativity equations of Phi. With T(ab|cd) = sum_mn Phi_abm eta^mn Phi_ncd, entry (i, j, k, l)
    is T(ij|kl) - T(ik|jl), so swapping j and k negates it. Phi solves the equations exactly when the
    returned tensor is zero.
    """
    n = prob.dim
    third = third_derivatives(prob.phi)
    raised = _raise_first(prob.eta, third)
    pairings: Dict[Tuple[int, int, int, int], Poly] = {}

    def pairing(a: int, b: int, c: int, d: int) -> Poly:
        key = (min(a, b), max(a, b), min(c, d), max(c, d))
        if key not in pairings:
            pairings[key] = sum(
                (raised[m, key[0], key[1]] * third[m, key[2], key[3]] for m in range(n)), Poly.zero(n)
            )
        return pairings[key]

    ret = PolyTensor.from_function(
        (n, n, n, n), n, lambda i, j, k, q: pairing(i, j, k, q) - pairing(i, k, j, q)
    )
    logger.debug("associativity residual of %r: %d nonzero entries", prob.phi, ret.count_nonzero())
    return ret


def associativity_residual(c: StructureConstants) -> PolyTensor:
    """
    Entry (i, j, k, q) is the e_q component of (e_i * e_j) * e_k - e_i * (e_j * e_k).
    """
    n = c.dim
    dim = c.c.dim

    def entry(i: int, j: int, k: int, q: int) -> Poly:
        ret = Poly.zero(dim)
        for p in range(n):
            ret += c[p, i, j] * c[q, p, k] - c[p, j, k] * c[q, i, p]
        return ret

    return PolyTensor.from_function((n, n, n, n), dim, entry)


def dubrovin_residual(f: Poly) -> Poly:
    """
    f_333 - f_223^2 + f_222*f_233 for a reduced potential f(u2, u3).

    :raises DimensionMismatch: if f has dimension other than 3 or depends on u1.
    """
    _require_reduced(f)
    f22 = f.partial(_U2).partial(_U2)
    f33 = f.partial(_U3).partial(_U3)
    return f33.partial(_U3) - f22.partial(_U3) ** 2 + f22.partial(_U2) * f33.partial(_U2)


def abc_flow_check(f: Poly) -> VerificationReport:
    """
    Check that a = f_222, b = f_223, c = f_233 solve the quasilinear system
    (a, b, c)_u3 = M (a, b, c)_u2 with M = [[0, 1, 0], [0, 0, 1], [-c, 2b, -a]].

    :raises PreconditionFailed: if f does not solve the Dubrovin equation.
    """
    residual = dubrovin_residual(f)
    if residual:
        report = VerificationReport(
            "Dubrovin equation", (relation_from_residuals("Dubrovin equation", [((), residual)]),)
        )
        raise PreconditionFailed(f"{f} does not solve the Dubrovin equation", report)
    f22 = f.partial(_U2).partial(_U2)
    f23 = f.partial(_U2).partial(_U3)
    a = f22.partial(_U2)
    b = f22.partial(_U3)
    c = f23.partial(_U3)
    a2, b2, c2 = (x.partial(_U2) for x in (a, b, c))
    a3, b3, c3 = (x.partial(_U3) for x in (a, b, c))
    return VerificationReport(
        "(a, b, c) system",
        (
            relation_from_residuals("a_u3 = b_u2", [((0,), a3 - b2)]),
            relation_from_residuals("b_u3 = c_u2", [((1,), b3 - c2)]),
            relation_from_residuals("c_u3 = -c*a_u2 + 2*b*b_u2 - a*c_u2", [((2,), c3 - (2 * b * b2 - c * a2 - a * c2))]),
        ),
    )


def affinors_from_phi(prob: WdvvProblem) -> List[PolyMatrix]:
    """
    (w_n)^i_j = eta^is Phi_snj for n = 1..N, the Hessian affinors of psi_n = dPhi/du^n.
    """
    n = prob.dim
    raised = _raise_first(prob.eta, third_derivatives(prob.phi))
    return [PolyMatrix.from_function(n, n, n, lambda i, j, m=m: raised[i, m, j]) for m in range(n)]


def verify_wdvv(prob: WdvvProblem) -> VerificationReport:
    """
    The associativity equations, plus the Dubrovin equation when Phi has the three dimensional ansatz
    shape over the antidiagonal metric.
    """
    relations = [relation_from_tensor("associativity equations", wdvv_residual(prob))]
    f = prob.reduced_potential()
    if f is not None:
        relations.append(relation_from_residuals("Dubrovin equation", [((), dubrovin_residual(f))]))
    return VerificationReport("WDVV", tuple(relations))
