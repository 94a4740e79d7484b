from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterator, Optional, Sequence, Tuple

from hydrobracket.algebra.matrix import PolyMatrix, PolyTensor
from hydrobracket.algebra.poly import Poly
from hydrobracket.exceptions import DimensionMismatch, NotClosed, NotSymmetric

__all__ = [
    "closedness_defects",
    "gradient",
    "hessian",
    "integrate_gradient",
    "integrate_hessian",
    "partial",
    "third_derivatives",
]


def partial(p: Poly, i: int) -> Poly:
    """
    d p / d u^(i+1); `i` is 0-based.
    """
    return p.partial(i)


def gradient(p: Poly) -> Tuple[Poly, ...]:
    return tuple(p.partial(i) for i in range(p.dim))


def hessian(p: Poly) -> PolyMatrix:
    n = p.dim
    first = gradient(p)
    entries: Dict[Tuple[int, int], Poly] = {}
    for i in range(n):
        for j in range(i, n):
            entries[i, j] = entries[j, i] = first[i].partial(j)
    return PolyMatrix.from_function(n, n, n, lambda i, j: entries[i, j])


def third_derivatives(p: Poly) -> PolyTensor:
    """
    The fully symmetric array of third partial derivatives of `p`.
    """
    n = p.dim
    second = hessian(p)
    cache: Dict[Tuple[int, int, int], Poly] = {}

    def entry(i: int, j: int, k: int) -> Poly:
        key = tuple(sorted((i, j, k)))
        if key not in cache:
            a, b, c = key
            cache[key] = second[a, b].partial(c)  # type: ignore[index]
        return cache[key]  # type: ignore[index]

    return PolyTensor.from_function((n, n, n), n, entry)


def closedness_defects(v: Sequence[Poly]) -> Iterator[Tuple[int, int, Poly]]:
    """
    Yield (i, j, dv_i/du^j - dv_j/du^i) for all i < j where the difference does not vanish.
    """
    dim = _check_covector(v)
    for i in range(dim):
        for j in range(i + 1, dim):
            residual = v[i].partial(j) - v[j].partial(i)
            if residual:
                yield i, j, residual


def _check_covector(v: Sequence[Poly]) -> int:
    if not v:
        raise DimensionMismatch("empty covector")
    dim = v[0].dim
    if len(v) != dim or any(c.dim != dim for c in v):
        raise DimensionMismatch(f"a covector over {dim} variables needs {dim} components of that dimension")
    return dim


def _radial_primitive(v: Sequence[Poly]) -> Poly:
    # phi(u) = integral_0^1 sum_i v_i(t u) u^i dt, exact on closed polynomial forms
    dim = v[0].dim
    ret = Poly.zero(dim)
    for i, component in enumerate(v):
        u_i = Poly.variable(dim, i)
        for degree, part in component.homogeneous_parts().items():
            ret += (u_i * part).scale(Fraction(1, degree + 1))
    return ret


def _integrate_closed(v: Sequence[Poly], stage: Optional[int]) -> Poly:
    defect = next(closedness_defects(v), None)
    if defect is not None:
        raise NotClosed(*defect, stage=stage)
    return _radial_primitive(v)


def integrate_gradient(v: Sequence[Poly]) -> Poly:
    """
    Return the unique polynomial phi with grad(phi) = v and phi(0) = 0.

    :raises NotClosed: if v is not a closed 1-form.
    """
    return _integrate_closed(v, None)


def integrate_hessian(m: PolyMatrix) -> Poly:
    """
    Return the unique h with hess(h) = m, h(0) = 0 and grad(h)(0) = 0. Columns are integrated first to
    potentials a_k, which must themselves form a closed 1-form, and those are integrated again.

    :raises NotSymmetric: if m is not symmetric.
    :raises NotClosed: with `stage` 1 if a column is not closed, with `stage` 2 if the potentials are not.
    """
    rows, cols = m.shape
    if rows != cols or rows != m.dim:
        raise DimensionMismatch(f"expected a {m.dim}x{m.dim} matrix, got shape {m.shape}")
    asymmetry = next(m.asymmetries(), None)
    if asymmetry is not None:
        raise NotSymmetric(*asymmetry)
    potentials = [_integrate_closed(m.column(k), 1) for k in range(cols)]
    return _integrate_closed(potentials, 2)
