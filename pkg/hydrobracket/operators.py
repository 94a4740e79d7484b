"""
Nonlocal Hamiltonian operators of hydrodynamic type

    P^ij = g^ij d/dx + b^ij_k u^k_x + sum_mn mu^mn (w_m)^i_k u^k_x (d/dx)^-1 (w_n)^j_l u^l_x

given either in flat coordinates (constant metric eta and affinors that are eta-raised Hessians) or by
explicit coefficients g, b, w in arbitrary coordinates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from hydrobracket.algebra.calculus import gradient, hessian
from hydrobracket.algebra.matrix import ConstSymMatrix, PolyMatrix, PolyTensor, commutator
from hydrobracket.algebra.poly import Poly
from hydrobracket.exceptions import DimensionMismatch, PreconditionFailed
from hydrobracket.verification import (
    RelationVerdict,
    VerificationReport,
    relation_from_matrix,
    relation_from_residuals,
    relation_from_tensor,
)
from hydrobracket.wdvv import WdvvProblem

__all__ = [
    "GENERAL_FORM_RELATIONS",
    "ConstantFormSpec",
    "GeneralFormSpec",
    "check_gauss",
    "check_pencil",
    "check_ricci",
    "curvature",
    "hessian_affinors",
    "nonlocal_curvature",
    "verify_constant_form",
    "verify_general_form",
]

logger = logging.getLogger(__name__)

GENERAL_FORM_RELATIONS = (
    "metric symmetry",
    "metric derivative",
    "connection symmetry",
    "affinor symmetry",
    "affinor commutativity",
    "affinor derivative",
    "curvature relation",
)


@dataclass(frozen=True)
class ConstantFormSpec:
    """
    An operator in flat coordinates: constant metric eta (N x N), constant form mu (L x L) and the
    potentials psi_1..psi_L whose eta-raised Hessians are the affinors.
    """

    eta: ConstSymMatrix
    mu: ConstSymMatrix
    psis: Tuple[Poly, ...]

    def __post_init__(self) -> None:
        if not self.psis:
            raise DimensionMismatch("at least one potential is required")
        object.__setattr__(self, "psis", tuple(self.psis))
        if any(p.dim != self.eta.size for p in self.psis):
            raise DimensionMismatch(f"every potential must have dimension {self.eta.size}")
        if self.mu.size != len(self.psis):
            raise DimensionMismatch(f"mu is {self.mu.size}x{self.mu.size} but there are {len(self.psis)} potentials")

    @property
    def dim(self) -> int:
        return self.eta.size

    @property
    def size(self) -> int:
        """
        L, the number of nonlocal terms.
        """
        return len(self.psis)

    @cached_property
    def hessians(self) -> Tuple[PolyMatrix, ...]:
        return tuple(hessian(p) for p in self.psis)

    @cached_property
    def eta_matrix(self) -> PolyMatrix:
        return self.eta.as_poly_matrix(self.dim)

    @classmethod
    def from_wdvv(cls, prob: WdvvProblem, mu: Optional[ConstSymMatrix] = None) -> ConstantFormSpec:
        """
        The operator with psi_n = dPhi/du^n and mu = eta unless given, under which both conditions of
        the flat-coordinate criterion reduce to the associativity equations of Phi.
        """
        return cls(prob.eta, prob.eta if mu is None else mu, gradient(prob.phi))

    def lower(self) -> GeneralFormSpec:
        """
        The same operator in general form: g = eta, b = 0, w_n = eta Hess(psi_n).
        """
        n = self.dim
        return GeneralFormSpec(
            g=self.eta_matrix,
            b=PolyTensor((n, n, n), n),
            ws=tuple(hessian_affinors(self)),
            mu=self.mu,
        )


@dataclass(frozen=True)
class GeneralFormSpec:
    """
    An operator given by its coefficients: the contravariant metric g^ij, b^ij_k stored at [i, j, k],
    the affinors w_1..w_L and mu (which may be omitted when L is zero).
    """

    g: PolyMatrix
    b: PolyTensor
    ws: Tuple[PolyMatrix, ...] = field(default_factory=tuple)
    mu: Optional[ConstSymMatrix] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "ws", tuple(self.ws))
        n = self.g.dim
        if self.g.shape != (n, n):
            raise DimensionMismatch(f"g must be {n}x{n}, got {self.g.shape}")
        if self.b.shape != (n, n, n) or self.b.dim != n:
            raise DimensionMismatch(f"b must have shape {(n, n, n)}, got {self.b.shape}")
        for w in self.ws:
            if w.dim != n or w.shape != (n, n):
                raise DimensionMismatch(f"every affinor must be {n}x{n} over dimension {n}")
        if self.ws:
            if self.mu is None:
                raise DimensionMismatch("mu is required when there are affinors")
            if self.mu.size != len(self.ws):
                raise DimensionMismatch(f"mu is {self.mu.size}x{self.mu.size} but there are {len(self.ws)} affinors")

    @property
    def dim(self) -> int:
        return self.g.dim

    @property
    def size(self) -> int:
        return len(self.ws)


def hessian_affinors(spec: ConstantFormSpec) -> List[PolyMatrix]:
    """
    w_n = eta Hess(psi_n), i.e. (w_n)^i_j = eta^is psi_n,sj.
    """
    return [spec.eta_matrix @ h for h in spec.hessians]


def check_ricci(spec: ConstantFormSpec) -> VerificationReport:
    """
    For every pair of potentials j < k, the matrix Hess(psi_j) eta Hess(psi_k) must be symmetric under
    swapping j and k. Residual indices are (j, k, i, l).
    """
    eta = spec.eta_matrix
    residuals: List[Tuple[Tuple[int, ...], Poly]] = []
    for j, k in combinations(range(spec.size), 2):
        hj, hk = spec.hessians[j], spec.hessians[k]
        diff = hj @ eta @ hk - hk @ eta @ hj
        rows, cols = diff.shape
        residuals.extend(((j, k, i, q), diff[i, q]) for i in range(rows) for q in range(cols))
    verdict = relation_from_residuals("Ricci equations", residuals)
    logger.debug("Ricci equations: %d nonzero residuals", len(verdict.residuals))
    return VerificationReport("Ricci equations", (verdict,))


Pairing = Callable[[int, int, int, int], Poly]


def _mu_pairing(mu: ConstSymMatrix, left: Sequence[PolyMatrix], right: Sequence[PolyMatrix], dim: int) -> Pairing:
    # (a, b, c, d) -> sum_mn mu^mn left_m[a, b] right_n[c, d]
    cache: Dict[Tuple[int, int, int, int], Poly] = {}
    pairs = list(mu.nonzero_items())

    def pairing(a: int, b: int, c: int, d: int) -> Poly:
        key = (a, b, c, d)
        if key not in cache:
            cache[key] = sum((left[m][a, b] * right[n][c, d] * v for m, n, v in pairs), Poly.zero(dim))
        return cache[key]

    return pairing


def check_gauss(spec: ConstantFormSpec) -> VerificationReport:
    """
    sum_mn mu^mn psi_m,ij psi_n,kl must be symmetric under swapping j and k. Residual indices are
    (i, j, k, l).
    """
    n = spec.dim
    pairing = _mu_pairing(spec.mu, spec.hessians, spec.hessians, n)
    residual = PolyTensor.from_function(
        (n, n, n, n), n, lambda i, j, k, q: pairing(i, j, k, q) - pairing(i, k, j, q)
    )
    verdict = relation_from_tensor("Gauss equations", residual)
    logger.debug("Gauss equations: %d nonzero residuals", len(verdict.residuals))
    return VerificationReport("Gauss equations", (verdict,))


def verify_constant_form(spec: ConstantFormSpec) -> VerificationReport:
    """
    The operator is Hamiltonian exactly when both the Ricci and the Gauss equations hold.
    """
    return check_ricci(spec).merge(check_gauss(spec), "constant form")


def _g_contract(spec: GeneralFormSpec, i: int, column: Callable[[int], Poly]) -> Poly:
    # sum_s g^is column(s)
    n = spec.dim
    ret = Poly.zero(n)
    for s in range(n):
        gis = spec.g[i, s]
        if gis:
            ret += gis * column(s)
    return ret


def _metric_symmetry(spec: GeneralFormSpec) -> RelationVerdict:
    return relation_from_residuals("metric symmetry", (((i, j), d) for i, j, d in spec.g.asymmetries()))


def _metric_derivative(spec: GeneralFormSpec) -> RelationVerdict:
    n = spec.dim
    b = spec.b
    return relation_from_residuals(
        "metric derivative",
        (
            ((i, j, k), spec.g[i, j].partial(k) - b[i, j, k] - b[j, i, k])
            for i, j, k in product(range(n), repeat=3)
        ),
    )


def _connection_symmetry(spec: GeneralFormSpec) -> RelationVerdict:
    n = spec.dim
    b = spec.b
    return relation_from_residuals(
        "connection symmetry",
        (
            (
                (i, j, k),
                _g_contract(spec, i, lambda s, j=j, k=k: b[j, k, s])
                - _g_contract(spec, j, lambda s, i=i, k=k: b[i, k, s]),
            )
            for i, j in combinations(range(n), 2)
            for k in range(n)
        ),
    )


def _affinor_symmetry(spec: GeneralFormSpec) -> RelationVerdict:
    n = spec.dim
    residuals = []
    for m, w in enumerate(spec.ws):
        for i, j in combinations(range(n), 2):
            lhs = _g_contract(spec, i, lambda s, w=w, j=j: w[j, s])
            rhs = _g_contract(spec, j, lambda s, w=w, i=i: w[i, s])
            residuals.append(((m, i, j), lhs - rhs))
    return relation_from_residuals("affinor symmetry", residuals)


def _affinor_commutativity(spec: GeneralFormSpec) -> RelationVerdict:
    verdicts = [
        relation_from_matrix("affinor commutativity", commutator(spec.ws[m], spec.ws[k]), (m, k))
        for m, k in combinations(range(spec.size), 2)
    ]
    return RelationVerdict("affinor commutativity", tuple(r for v in verdicts for r in v.residuals))


def _affinor_derivative(spec: GeneralFormSpec) -> RelationVerdict:
    n = spec.dim
    g = spec.g
    b = spec.b
    residuals = []
    for m, w in enumerate(spec.ws):
        # d_s (w_m)^k_r, indexed [k][r][s]
        dw = [[[w[k, r].partial(s) for s in range(n)] for r in range(n)] for k in range(n)]

        def side(i: int, j: int, k: int, w: PolyMatrix = w, dw: List[List[List[Poly]]] = dw) -> Poly:
            ret = Poly.zero(n)
            for s, r in product(range(n), repeat=2):
                if g[i, s] and g[j, r] and dw[k][r][s]:
                    ret += g[i, s] * g[j, r] * dw[k][r][s]
                if g[j, r] and b[i, k, s] and w[s, r]:
                    ret -= g[j, r] * b[i, k, s] * w[s, r]
            return ret

        for i, j in combinations(range(n), 2):
            for k in range(n):
                residuals.append(((m, i, j, k), side(i, j, k) - side(j, i, k)))
    return relation_from_residuals("affinor derivative", residuals)


def _riemann_tensor(spec: GeneralFormSpec) -> PolyTensor:
    n = spec.dim
    b = spec.b

    def entry(i: int, j: int, k: int, r: int) -> Poly:
        ret = _g_contract(spec, i, lambda s: b[j, k, s].partial(r) - b[j, k, r].partial(s))
        for s in range(n):
            ret += b[i, j, s] * b[s, k, r] - b[i, k, s] * b[s, j, r]
        return ret

    return PolyTensor.from_function((n, n, n, n), n, entry)


def nonlocal_curvature(spec: GeneralFormSpec) -> PolyTensor:
    """
    The right hand side of the curvature relation,
    sum_mn mu^mn g^is ((w_m)^j_r (w_n)^k_s - (w_m)^j_s (w_n)^k_r), indexed (i, j, k, r). Zero when there
    are no affinors.
    """
    n = spec.dim
    if spec.mu is None or not spec.ws:
        return PolyTensor((n, n, n, n), n)
    pairing = _mu_pairing(spec.mu, spec.ws, spec.ws, n)
    return PolyTensor.from_function(
        (n, n, n, n),
        n,
        lambda i, j, k, r: _g_contract(spec, i, lambda s: pairing(j, r, k, s) - pairing(j, s, k, r)),
    )


def _curvature_relation(spec: GeneralFormSpec) -> RelationVerdict:
    return relation_from_tensor("curvature relation", _riemann_tensor(spec) - nonlocal_curvature(spec))


def verify_general_form(spec: GeneralFormSpec) -> VerificationReport:
    """
    Check all seven coefficient relations that characterize a Hamiltonian operator given in arbitrary
    coordinates. Every relation is a polynomial identity in g, b and the affinors; no metric inversion
    takes place.
    """
    relations = (
        _metric_symmetry(spec),
        _metric_derivative(spec),
        _connection_symmetry(spec),
        _affinor_symmetry(spec),
        _affinor_commutativity(spec),
        _affinor_derivative(spec),
        _curvature_relation(spec),
    )
    for r in relations:
        logger.debug("%s: %s", r.name, "pass" if r.passed else f"{len(r.residuals)} nonzero residuals")
    return VerificationReport("general form", relations)


def curvature(spec: GeneralFormSpec) -> PolyTensor:
    """
    R^ijk_r = g^is (d_r b^jk_s - d_s b^jk_r) + b^ij_s b^sk_r - b^ik_s b^sj_r, indexed (i, j, k, r).

    :raises PreconditionFailed: if g is not symmetric or b is not compatible with g, in which case the
        formula does not describe a curvature.
    """
    pre = VerificationReport(
        "curvature preconditions",
        (_metric_symmetry(spec), _metric_derivative(spec), _connection_symmetry(spec)),
    )
    if not pre.passed:
        raise PreconditionFailed("b is not the connection of a symmetric metric g", pre)
    return _riemann_tensor(spec)


def check_pencil(spec: GeneralFormSpec) -> VerificationReport:
    """
    The operator belongs to a pencil of compatible Hamiltonian operators exactly when both sides of the
    curvature relation vanish: the metric is flat and the affinor term is zero.

    :raises PreconditionFailed: if the operator itself is not Hamiltonian.
    """
    pre = verify_general_form(spec)
    if not pre.passed:
        raise PreconditionFailed("the operator does not satisfy the general-form relations", pre)
    return VerificationReport(
        "pencil",
        (
            relation_from_tensor("flat metric", curvature(spec)),
            relation_from_tensor("vanishing nonlocal curvature", nonlocal_curvature(spec)),
        ),
    )
