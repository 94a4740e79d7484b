from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Matrix, Rational
from sympy.matrices.exceptions import NonInvertibleMatrixError

from hydrobracket.algebra.poly import Poly, ScalarInput, as_scalar
from hydrobracket.exceptions import DimensionMismatch, NotSymmetricMatrixError, SingularMatrixError

__all__ = ["ConstSymMatrix", "PolyMatrix", "PolyTensor", "bareiss_determinant", "commutator", "mat_mul"]

Index = Tuple[int, ...]


class PolyMatrix:
    """
    An immutable rows x cols matrix of polynomials sharing one dimension.
    """

    __slots__ = ("_rows", "_dim")

    def __init__(self, rows: Iterable[Iterable[Poly]], dim: Optional[int] = None):
        grid = tuple(tuple(r) for r in rows)
        if not grid or not grid[0]:
            raise DimensionMismatch("a polynomial matrix needs at least one row and one column")
        width = len(grid[0])
        if any(len(r) != width for r in grid):
            raise DimensionMismatch("ragged polynomial matrix")
        if dim is None:
            dim = grid[0][0].dim
        if any(not isinstance(p, Poly) or p.dim != dim for r in grid for p in r):
            raise DimensionMismatch(f"all entries must be polynomials of dimension {dim}")
        self._rows = grid
        self._dim = dim

    @classmethod
    def zeros(cls, dim: int, rows: int, cols: Optional[int] = None) -> PolyMatrix:
        z = Poly.zero(dim)
        return cls(((z,) * (rows if cols is None else cols) for _ in range(rows)), dim)

    @classmethod
    def identity(cls, dim: int, size: Optional[int] = None) -> PolyMatrix:
        size = dim if size is None else size
        z = Poly.zero(dim)
        o = Poly.one(dim)
        return cls(((o if i == j else z for j in range(size)) for i in range(size)), dim)

    @classmethod
    def from_function(cls, dim: int, rows: int, cols: int, func: Callable[[int, int], Poly]) -> PolyMatrix:
        return cls(((func(i, j) for j in range(cols)) for i in range(rows)), dim)

    @classmethod
    def from_constants(cls, dim: int, grid: Iterable[Iterable[ScalarInput]]) -> PolyMatrix:
        return cls(((Poly.constant(dim, c) for c in row) for row in grid), dim)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self._rows), len(self._rows[0])

    @property
    def rows(self) -> Tuple[Tuple[Poly, ...], ...]:
        return self._rows

    def row(self, i: int) -> Tuple[Poly, ...]:
        return self._rows[i]

    def column(self, j: int) -> Tuple[Poly, ...]:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, index: Tuple[int, int]) -> Poly:
        i, j = index
        return self._rows[i][j]

    def __iter__(self) -> Iterator[Tuple[Poly, ...]]:
        return iter(self._rows)

    def is_square(self) -> bool:
        r, c = self.shape
        return r == c

    def is_zero(self) -> bool:
        return all(p.is_zero() for r in self._rows for p in r)

    def asymmetries(self) -> Iterator[Tuple[int, int, Poly]]:
        """
        Yield (i, j, M_ij - M_ji) for every i < j where the difference is nonzero.
        """
        if not self.is_square():
            raise DimensionMismatch(f"symmetry is only defined for square matrices, got shape {self.shape}")
        n = self.shape[0]
        for i in range(n):
            for j in range(i + 1, n):
                diff = self._rows[i][j] - self._rows[j][i]
                if diff:
                    yield i, j, diff

    def is_symmetric(self) -> bool:
        return next(self.asymmetries(), None) is None

    def transpose(self) -> PolyMatrix:
        return PolyMatrix(zip(*self._rows), self._dim)

    def map(self, func: Callable[[Poly], Poly]) -> PolyMatrix:
        return PolyMatrix(((func(p) for p in r) for r in self._rows), self._dim)

    def _same_shape(self, other: PolyMatrix) -> None:
        if self.shape != other.shape or self._dim != other._dim:
            raise DimensionMismatch(f"shape/dimension mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: object) -> PolyMatrix:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        self._same_shape(other)
        return PolyMatrix(((a + b for a, b in zip(ra, rb)) for ra, rb in zip(self._rows, other._rows)), self._dim)

    def __neg__(self) -> PolyMatrix:
        return self.map(lambda p: -p)

    def __sub__(self, other: object) -> PolyMatrix:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self + (-other)

    def __mul__(self, factor: object) -> PolyMatrix:
        # scaling only; matrix products use @
        if isinstance(factor, Poly) or (isinstance(factor, (int, Fraction)) and not isinstance(factor, bool)):
            return self.map(lambda p: p * factor)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other: object) -> PolyMatrix:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return mat_mul(self, other)

    def apply(self, vector: Sequence[Poly]) -> Tuple[Poly, ...]:
        """
        The matrix-vector product M v.
        """
        if len(vector) != self.shape[1]:
            raise DimensionMismatch(f"vector of length {len(vector)} against {self.shape[1]} columns")
        return tuple(sum((a * v for a, v in zip(r, vector)), Poly.zero(self._dim)) for r in self._rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self._dim == other._dim and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._dim, self._rows))

    def text_rows(self) -> List[List[str]]:
        return [[str(p) for p in r] for r in self._rows]

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(r) for r in self.text_rows()) + "]"

    def __repr__(self) -> str:
        return f"PolyMatrix({self._dim}, {str(self)!r})"


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    ar, ac = a.shape
    br, bc = b.shape
    if ac != br or a.dim != b.dim:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    zero = Poly.zero(a.dim)
    cols = [b.column(j) for j in range(bc)]
    return PolyMatrix(
        ((sum((x * y for x, y in zip(a.row(i), cols[j]) if x and y), zero) for j in range(bc)) for i in range(ar)),
        a.dim,
    )


def commutator(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    """
    [A, B] = AB - BA
    """
    return mat_mul(a, b) - mat_mul(b, a)


def _sympy_matrix(grid: Sequence[Sequence[Fraction]]) -> Matrix:
    return Matrix([[Rational(v.numerator, v.denominator) for v in row] for row in grid])


def _from_rational(r: Rational) -> Fraction:
    return Fraction(int(r.p), int(r.q))


def bareiss_determinant(grid: Sequence[Sequence[Fraction]]) -> Fraction:
    """
    Exact determinant by fraction-free (Bareiss) elimination.
    """
    if not grid:
        return Fraction(1)
    return _from_rational(_sympy_matrix(grid).det(method="bareiss"))


def _exact_inverse(grid: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    try:
        inverse = _sympy_matrix(grid).inv()
    except NonInvertibleMatrixError as e:
        raise SingularMatrixError("matrix is not invertible") from e
    return [[_from_rational(v) for v in inverse.row(i)] for i in range(inverse.rows)]


class ConstSymMatrix:
    """
    A nondegenerate symmetric matrix of exact rationals, such as a flat metric in flat coordinates.
    """

    __slots__ = ("_entries", "_inverse", "_determinant")

    def __init__(self, entries: Iterable[Iterable[ScalarInput]]):
        grid = tuple(tuple(as_scalar(v) for v in row) for row in entries)
        n = len(grid)
        if n == 0 or any(len(r) != n for r in grid):
            raise DimensionMismatch("a constant symmetric matrix must be square and non-empty")
        for i in range(n):
            for j in range(i + 1, n):
                if grid[i][j] != grid[j][i]:
                    raise NotSymmetricMatrixError(f"entries ({i}, {j}) and ({j}, {i}) differ")
        det = bareiss_determinant(grid)
        if not det:
            raise SingularMatrixError("matrix has zero determinant")
        self._entries = grid
        self._determinant = det
        self._inverse: Optional[ConstSymMatrix] = None

    @classmethod
    def identity(cls, size: int) -> ConstSymMatrix:
        return cls([[int(i == j) for j in range(size)] for i in range(size)])

    @classmethod
    def antidiagonal(cls, size: int) -> ConstSymMatrix:
        return cls([[int(i + j == size - 1) for j in range(size)] for i in range(size)])

    @property
    def size(self) -> int:
        return len(self._entries)

    @property
    def rows(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return self._entries

    @property
    def determinant(self) -> Fraction:
        return self._determinant

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self._entries[i][j]

    def nonzero_items(self) -> Iterator[Tuple[int, int, Fraction]]:
        for i, row in enumerate(self._entries):
            for j, v in enumerate(row):
                if v:
                    yield i, j, v

    def inverse(self) -> ConstSymMatrix:
        if self._inverse is None:
            self._inverse = ConstSymMatrix(_exact_inverse(self._entries))
        return self._inverse

    def scaled(self, factor: ScalarInput) -> ConstSymMatrix:
        f = as_scalar(factor)
        return ConstSymMatrix([[v * f for v in row] for row in self._entries])

    def as_poly_matrix(self, dim: int) -> PolyMatrix:
        return PolyMatrix.from_constants(dim, self._entries)

    def apply(self, vector: Sequence[Poly]) -> Tuple[Poly, ...]:
        """
        The product C v for a vector of polynomials.
        """
        if len(vector) != self.size:
            raise DimensionMismatch(f"vector of length {len(vector)} against a {self.size}x{self.size} matrix")
        dim = vector[0].dim
        return tuple(
            sum((vector[j] * v for j, v in enumerate(row) if v), Poly.zero(dim)) for row in self._entries
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConstSymMatrix):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(self._entries)

    def __str__(self) -> str:
        return "; ".join(", ".join(str(v) for v in row) for row in self._entries)

    def __repr__(self) -> str:
        return f"ConstSymMatrix({str(self)!r})"


class PolyTensor:
    """
    A sparse rank-k array of polynomials with a fixed shape. Missing entries are zero.
    """

    __slots__ = ("_shape", "_dim", "_entries")

    def __init__(self, shape: Sequence[int], dim: int, entries: Union[Mapping[Index, Poly], None] = None):
        self._shape = tuple(shape)
        self._dim = dim
        clean: Dict[Index, Poly] = {}
        for index, value in (entries or {}).items():
            index = tuple(index)
            if len(index) != len(self._shape) or any(not 0 <= i < s for i, s in zip(index, self._shape)):
                raise DimensionMismatch(f"index {index} outside shape {self._shape}")
            if value.dim != dim:
                raise DimensionMismatch(f"entry at {index} has dimension {value.dim}, expected {dim}")
            if value:
                clean[index] = value
        self._entries = clean

    @classmethod
    def from_function(cls, shape: Sequence[int], dim: int, func: Callable[..., Poly]) -> PolyTensor:
        return cls(shape, dim, {idx: func(*idx) for idx in product(*(range(s) for s in shape))})

    @property
    def shape(self) -> Index:
        return self._shape

    @property
    def rank(self) -> int:
        return len(self._shape)

    @property
    def dim(self) -> int:
        return self._dim

    def __getitem__(self, index: Index) -> Poly:
        return self._entries.get(tuple(index)) or Poly.zero(self._dim)

    def nonzero_items(self) -> List[Tuple[Index, Poly]]:
        return sorted(self._entries.items())

    def count_nonzero(self) -> int:
        return len(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def __neg__(self) -> PolyTensor:
        return PolyTensor(self._shape, self._dim, {k: -v for k, v in self._entries.items()})

    def __add__(self, other: object) -> PolyTensor:
        if not isinstance(other, PolyTensor):
            return NotImplemented
        if other._shape != self._shape or other._dim != self._dim:
            raise DimensionMismatch(f"cannot add tensors of shapes {self._shape} and {other._shape}")
        res = dict(self._entries)
        for k, v in other._entries.items():
            res[k] = res[k] + v if k in res else v
        return PolyTensor(self._shape, self._dim, res)

    def __sub__(self, other: object) -> PolyTensor:
        if not isinstance(other, PolyTensor):
            return NotImplemented
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyTensor):
            return NotImplemented
        return self._shape == other._shape and self._dim == other._dim and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self._shape, self._dim, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return f"PolyTensor(shape={self._shape}, nonzero={len(self._entries)})"
