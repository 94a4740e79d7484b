from __future__ import annotations

from typing import Sequence, Tuple

from hydrobracket.algebra.matrix import PolyMatrix
from hydrobracket.algebra.poly import JetPoly
from hydrobracket.exceptions import DimensionMismatch, JetOrderError

__all__ = ["flow_velocity", "jet_total_x_derivative", "total_x_derivative"]


def _require_order_at_most_one(e: JetPoly) -> None:
    order = e.jet_order
    if order > 1:
        raise JetOrderError(order, 1)


def total_x_derivative(e: JetPoly) -> JetPoly:
    """
    D_x e = sum_i de/du^i * u^i_x + de/du^i_x * u^i_xx, for e of jet order at most 1.

    :raises JetOrderError: if e already contains second derivatives.
    """
    _require_order_at_most_one(e)
    n = e.dim
    ret = JetPoly.zero(n)
    for i in range(n):
        ret += e.partial(i) * JetPoly.u_x(n, i)
        ret += e.partial(n + i) * JetPoly.u_xx(n, i)
    return ret


def flow_velocity(flows: PolyMatrix) -> Tuple[JetPoly, ...]:
    """
    The right hand side X^i = A^i_j(u) u^j_x of the system u_t = A(u) u_x.
    """
    n = flows.dim
    if flows.shape != (n, n):
        raise DimensionMismatch(f"flow matrix must be {n}x{n}, got {flows.shape}")
    u_x = [JetPoly.u_x(n, j) for j in range(n)]
    return tuple(
        sum((JetPoly.embed(a) * u_x[j] for j, a in enumerate(row) if a), JetPoly.zero(n)) for row in flows
    )


def _evolutionary_derivative(e: JetPoly, velocity: Sequence[JetPoly]) -> JetPoly:
    n = e.dim
    ret = JetPoly.zero(n)
    for i, x in enumerate(velocity):
        by_u = e.partial(i)
        if by_u:
            ret += by_u * x
        by_u_x = e.partial(n + i)
        if by_u_x:
            ret += by_u_x * total_x_derivative(x)
    return ret


def jet_total_x_derivative(e: JetPoly, flows: PolyMatrix) -> JetPoly:
    """
    The derivative of e along the evolution u_t = flows(u) u_x: every u^i is differentiated into
    (flows u_x)^i and every u^i_x into D_x (flows u_x)^i. The result has jet order at most 2.

    :raises JetOrderError: if e contains second derivatives.
    :raises DimensionMismatch: if e and flows have different dimensions.
    """
    if e.dim != flows.dim:
        raise DimensionMismatch(f"jet polynomial of dimension {e.dim} against flows of dimension {flows.dim}")
    _require_order_at_most_one(e)
    return _evolutionary_derivative(e, flow_velocity(flows))
