"""
Problem files: JSON documents describing one potential, operator, density or list of flows.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator
from typing_extensions import Annotated, Literal

from hydrobracket.algebra.matrix import ConstSymMatrix, PolyMatrix, PolyTensor
from hydrobracket.algebra.poly import Poly
from hydrobracket.exceptions import PolyParseError, ProblemFileError
from hydrobracket.frontend.fixtures import FIXTURE_PREFIX, fixture_bytes
from hydrobracket.frontend.parsers import parse_poly, parse_rational_grid, parse_scalar
from hydrobracket.hierarchy import FlowSpec
from hydrobracket.locality import Functional
from hydrobracket.operators import ConstantFormSpec, GeneralFormSpec
from hydrobracket.wdvv import WdvvProblem, ansatz_potential

__all__ = [
    "ConstantFormFile",
    "DensityFile",
    "FlowFile",
    "GeneralFormFile",
    "LoadedProblem",
    "ProblemFile",
    "WdvvFile",
    "load_problem",
    "problem_adapter",
]

RationalGrid = Union[str, List[List[Union[int, str]]]]
ExpressionMatrix = List[List[str]]


def _expression(src: str, dim: int, where: str) -> Poly:
    try:
        return parse_poly(src, dim)
    except PolyParseError as e:
        raise PolyParseError(f"{where}: {e.message}", e.line, e.column) from e


def _expression_matrix(rows: ExpressionMatrix, dim: int, where: str) -> PolyMatrix:
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ProblemFileError(f"{where} must be a {dim}x{dim} matrix")
    return PolyMatrix(
        ([_expression(e, dim, f"{where}[{i + 1}][{j + 1}]") for j, e in enumerate(r)] for i, r in enumerate(rows)),
        dim,
    )


def _const_sym(grid: RationalGrid, size: int, where: str) -> ConstSymMatrix:
    try:
        if isinstance(grid, str):
            values = parse_rational_grid(grid)
        else:
            values = [[parse_scalar(str(v)) for v in row] for row in grid]
        if len(values) != size or any(len(r) != size for r in values):
            raise ProblemFileError(f"{where} must be a {size}x{size} matrix")
        return ConstSymMatrix(values)
    except ValueError as e:
        raise ProblemFileError(f"{where}: {e}") from e


class _ProblemBase(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)

    name: Optional[str] = None
    description: Optional[str] = None
    dim: int = Field(alias="N", gt=0)


class WdvvFile(_ProblemBase):
    """
    A potential Phi, given directly or through its reduced part f(u2, u3) in three dimensions.
    """

    kind: Literal["wdvv"]
    eta: RationalGrid
    phi: Optional[str] = None
    f: Optional[str] = None

    @model_validator(mode="after")
    def check_one_potential(self) -> WdvvFile:
        if (self.phi is None) == (self.f is None):
            raise ValueError("exactly one of 'phi' and 'f' is required")
        if self.f is not None and self.dim != 3:
            raise ValueError("'f' describes a three dimensional potential, N must be 3")
        return self

    def to_spec(self) -> WdvvProblem:
        eta = _const_sym(self.eta, self.dim, "eta")
        if self.f is not None:
            f = _expression(self.f, self.dim, "f")
            try:
                phi = ansatz_potential(f)
            except ValueError as e:
                raise ProblemFileError(f"f: {e}") from e
        else:
            assert self.phi is not None
            phi = _expression(self.phi, self.dim, "phi")
        return WdvvProblem(eta, phi)


class ConstantFormFile(_ProblemBase):
    """
    An operator in flat coordinates, either with explicit potentials psi_1..psi_L or with psi_n = dPhi/du^n.
    """

    kind: Literal["constant-form"]
    eta: RationalGrid
    mu: Optional[RationalGrid] = None
    psis: Optional[List[str]] = None
    phi: Optional[str] = None
    size: Optional[int] = Field(default=None, alias="L", gt=0)

    @model_validator(mode="after")
    def check_one_source(self) -> ConstantFormFile:
        if (self.psis is None) == (self.phi is None):
            raise ValueError("exactly one of 'psis' and 'phi' is required")
        if self.psis is not None:
            if self.mu is None:
                raise ValueError("'mu' is required with 'psis'")
            if not self.psis:
                raise ValueError("'psis' must not be empty")
            if self.size is not None and self.size != len(self.psis):
                raise ValueError(f"L is {self.size} but {len(self.psis)} potentials are given")
        elif self.size is not None and self.size != self.dim:
            raise ValueError("with 'phi', L must equal N")
        return self

    def to_spec(self) -> ConstantFormSpec:
        eta = _const_sym(self.eta, self.dim, "eta")
        if self.phi is not None:
            phi = _expression(self.phi, self.dim, "phi")
            mu = eta if self.mu is None else _const_sym(self.mu, self.dim, "mu")
            return ConstantFormSpec.from_wdvv(WdvvProblem(eta, phi), mu)
        assert self.psis is not None
        assert self.mu is not None
        psis = tuple(_expression(p, self.dim, f"psis[{n + 1}]") for n, p in enumerate(self.psis))
        return ConstantFormSpec(eta, _const_sym(self.mu, len(psis), "mu"), psis)


class DensityFile(ConstantFormFile):
    """
    A constant-form operator together with the density of a Hamiltonian of hydrodynamic type.
    """

    kind: Literal["density"]  # type: ignore[assignment]
    density: str

    def to_functional(self) -> Functional:
        return Functional(_expression(self.density, self.dim, "density"))


class GeneralFormFile(_ProblemBase):
    """
    An operator by its coefficients g^ij, b^ij_k (as b[i][j][k], omitted for zero) and affinors w_n.
    """

    kind: Literal["general-form"]
    g: ExpressionMatrix
    b: Optional[List[List[List[str]]]] = None
    ws: List[ExpressionMatrix] = Field(default_factory=list)
    mu: Optional[RationalGrid] = None

    @model_validator(mode="after")
    def check_mu_for_affinors(self) -> GeneralFormFile:
        if self.ws and self.mu is None:
            raise ValueError("'mu' is required when affinors are given")
        return self

    def to_spec(self) -> GeneralFormSpec:
        n = self.dim
        g = _expression_matrix(self.g, n, "g")
        entries: Dict[Tuple[int, ...], Poly] = {}
        if self.b is not None:
            if len(self.b) != n or any(len(row) != n or any(len(c) != n for c in row) for row in self.b):
                raise ProblemFileError(f"b must be an {n}x{n}x{n} array")
            for i, row in enumerate(self.b):
                for j, cell in enumerate(row):
                    for k, e in enumerate(cell):
                        entries[i, j, k] = _expression(e, n, f"b[{i + 1}][{j + 1}][{k + 1}]")
        ws = tuple(_expression_matrix(w, n, f"ws[{m + 1}]") for m, w in enumerate(self.ws))
        mu = None if self.mu is None else _const_sym(self.mu, len(ws), "mu")
        return GeneralFormSpec(g, PolyTensor((n, n, n), n, entries), ws, mu)


class FlowFile(_ProblemBase):
    kind: Literal["flow"]
    flows: List[ExpressionMatrix] = Field(min_length=1)

    def to_flows(self) -> List[FlowSpec]:
        return [FlowSpec(_expression_matrix(a, self.dim, f"flows[{m + 1}]")) for m, a in enumerate(self.flows)]


ProblemFile = Annotated[
    Union[WdvvFile, ConstantFormFile, DensityFile, GeneralFormFile, FlowFile], Field(discriminator="kind")
]

problem_adapter: TypeAdapter[ProblemFile] = TypeAdapter(ProblemFile)


@dataclass(frozen=True)
class LoadedProblem:
    """
    :param source: the path or `fixtures/<name>` reference the problem was read from.
    :param digest: sha256 of the raw bytes.
    """

    source: str
    digest: str
    problem: ProblemFile


def load_problem(source: Union[str, Path], *, kinds: Optional[Sequence[str]] = None) -> LoadedProblem:
    """
    Read and validate a problem file, or a built-in fixture given as `fixtures/<name>`.

    :raises OSError: if the file cannot be read.
    :raises pydantic.ValidationError: if the document does not match any problem kind.
    :raises ProblemFileError: if the problem kind is not one of `kinds`.
    """
    source = str(source)
    if source.startswith(FIXTURE_PREFIX) and not Path(source).exists():
        raw = fixture_bytes(source)
    else:
        raw = Path(source).read_bytes()
    problem = problem_adapter.validate_json(raw)
    if kinds is not None and problem.kind not in kinds:
        raise ProblemFileError(f"{source} is a {problem.kind!r} problem, expected one of {', '.join(kinds)}")
    return LoadedProblem(source, hashlib.sha256(raw).hexdigest(), problem)
