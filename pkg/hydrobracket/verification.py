from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Tuple, Union

from hydrobracket.algebra.matrix import PolyMatrix, PolyTensor
from hydrobracket.algebra.poly import JetPoly, Poly

__all__ = [
    "RelationVerdict",
    "Residual",
    "VerificationReport",
    "relation_from_matrix",
    "relation_from_residuals",
    "relation_from_tensor",
]

ResidualValue = Union[Poly, JetPoly]


@dataclass(frozen=True)
class Residual:
    """
    A single nonzero entry of a residual tensor.

    :param indices: 0-based index tuple of the entry.
    :param value: the residual polynomial at that entry, never zero.
    """

    indices: Tuple[int, ...]
    value: ResidualValue


@dataclass(frozen=True)
class RelationVerdict:
    name: str
    residuals: Tuple[Residual, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.residuals


@dataclass(frozen=True)
class VerificationReport:
    """
    The outcome of checking a named list of polynomial identities. The report passes exactly when every
    relation in it passes.
    """

    subject: str
    relations: Tuple[RelationVerdict, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.relations)

    def failures(self) -> Tuple[RelationVerdict, ...]:
        return tuple(r for r in self.relations if not r.passed)

    def relation(self, name: str) -> RelationVerdict:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(name)

    def merge(self, other: VerificationReport, subject: Optional[str] = None) -> VerificationReport:
        return VerificationReport(subject or self.subject, self.relations + other.relations)


def relation_from_residuals(name: str, residuals: Iterable[Tuple[Tuple[int, ...], ResidualValue]]) -> RelationVerdict:
    return RelationVerdict(name, tuple(Residual(tuple(idx), v) for idx, v in residuals if v))


def relation_from_tensor(name: str, tensor: PolyTensor) -> RelationVerdict:
    return relation_from_residuals(name, tensor.nonzero_items())


def relation_from_matrix(name: str, matrix: PolyMatrix, prefix: Tuple[int, ...] = ()) -> RelationVerdict:
    rows, cols = matrix.shape
    return relation_from_residuals(
        name, ((prefix + (i, j), matrix[i, j]) for i in range(rows) for j in range(cols))
    )
