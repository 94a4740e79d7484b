from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import ClassVar, Dict, Iterable, List, Mapping, Optional, Tuple, Type, TypeVar, Union

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from hydrobracket.exceptions import DimensionMismatch

__all__ = ["Exponents", "JetPoly", "Poly", "ScalarInput", "as_scalar", "to_fraction", "to_rational"]

Exponents = Tuple[int, ...]
ScalarInput = Union[int, Fraction, str]

P = TypeVar("P", bound="_SparsePolynomial")

TermsInput = Union[Mapping[Exponents, ScalarInput], Iterable[Tuple[Exponents, ScalarInput]]]


def as_scalar(x: ScalarInput) -> Fraction:
    """
    Coerce an exact value into a Fraction. Floats are refused, there is no inexact arithmetic here.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, float)):
        raise TypeError(f"refusing inexact or boolean scalar {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot coerce {x!r} to an exact scalar")


def to_rational(x: ScalarInput) -> object:
    """
    The element of sympy's rational field QQ equal to `x`.
    """
    f = as_scalar(x)
    return QQ(f.numerator, f.denominator)


def to_fraction(c: object) -> Fraction:
    return Fraction(int(QQ.numer(c)), int(QQ.denom(c)))


@lru_cache(maxsize=None)
def polynomial_ring(names: Tuple[str, ...]) -> PolyRing:
    """
    The ring QQ[names] with graded lexicographic order, shared by every polynomial over those variables.
    """
    return PolyRing(",".join(names), QQ, grlex)


class _SparsePolynomial:
    """
    Immutable polynomial over the rationals, a thin wrapper around an element of a sympy `PolyRing`.
    Two polynomials are equal exactly when their term maps are equal.
    """

    __slots__ = ("_dim", "_element", "_fractions", "_hash")

    # number of polynomial variables per field variable
    vars_per_field: ClassVar[int] = 1

    _dim: int
    _element: PolyElement
    _fractions: Optional[Dict[Exponents, Fraction]]
    _hash: Optional[int]

    def __init__(self, dim: int, terms: TermsInput = ()):
        if dim < 1:
            raise DimensionMismatch(f"dimension must be positive, got {dim}")
        nvars = dim * self.vars_per_field
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: Dict[Exponents, Fraction] = {}
        for raw_exponents, raw_coeff in items:
            exponents = tuple(raw_exponents)
            if len(exponents) != nvars or any(e < 0 for e in exponents):
                raise DimensionMismatch(f"bad exponent vector {exponents} for {nvars} variables")
            clean[exponents] = clean.get(exponents, Fraction(0)) + as_scalar(raw_coeff)
        ring = self.ring(dim)
        self._dim = dim
        self._element = ring.from_dict({e: to_rational(c) for e, c in clean.items() if c})
        self._fractions = None
        self._hash = None

    @classmethod
    def variable_names(cls, dim: int) -> Tuple[str, ...]:
        return tuple(f"u{i + 1}" for i in range(dim))

    @classmethod
    def ring(cls, dim: int) -> PolyRing:
        return polynomial_ring(cls.variable_names(dim))

    @classmethod
    def _build(cls: Type[P], dim: int, element: PolyElement) -> P:
        # trusted constructor: the element already lives in cls.ring(dim)
        ret = object.__new__(cls)
        ret._dim = dim
        ret._element = element
        ret._fractions = None
        ret._hash = None
        return ret

    @classmethod
    def zero(cls: Type[P], dim: int) -> P:
        return cls(dim)

    @classmethod
    def constant(cls: Type[P], dim: int, value: ScalarInput) -> P:
        return cls._build(dim, cls.ring(dim).ground_new(to_rational(value)))

    @classmethod
    def one(cls: Type[P], dim: int) -> P:
        return cls.constant(dim, 1)

    @classmethod
    def monomial(cls: Type[P], dim: int, exponents: Exponents, coeff: ScalarInput = 1) -> P:
        return cls(dim, {exponents: coeff})

    @classmethod
    def _variable(cls: Type[P], dim: int, k: int) -> P:
        ring = cls.ring(dim)
        if not 0 <= k < ring.ngens:
            raise DimensionMismatch(f"variable index {k} out of range for {ring.ngens} variables")
        return cls._build(dim, ring.gens[k])

    @property
    def dim(self) -> int:
        """
        The number N of field variables u1..uN.
        """
        return self._dim

    @property
    def nvars(self) -> int:
        return self._dim * self.vars_per_field

    @property
    def element(self) -> PolyElement:
        """
        The underlying sympy ring element. It must not be mutated.
        """
        return self._element

    @property
    def terms(self) -> Mapping[Exponents, Fraction]:
        if self._fractions is None:
            self._fractions = {e: to_fraction(c) for e, c in self._element.items()}
        return MappingProxyType(self._fractions)

    @property
    def degree(self) -> int:
        """
        Total degree; the zero polynomial has degree 0.
        """
        return max((sum(e) for e in self._element.itermonoms()), default=0)

    def is_zero(self) -> bool:
        return not self._element

    def __bool__(self) -> bool:
        return bool(self._element)

    def __len__(self) -> int:
        return len(self._element)

    def is_constant(self) -> bool:
        return self._element.is_ground

    def constant_term(self) -> Fraction:
        return to_fraction(self._element.get(self._element.ring.zero_monom, QQ.zero))

    def depends_on(self, k: int) -> bool:
        return any(e[k] for e in self._element.itermonoms())

    def sorted_terms(self) -> List[Tuple[Exponents, Fraction]]:
        """
        Terms in descending graded lexicographic order, the canonical print order.
        """
        return [(e, to_fraction(c)) for e, c in self._element.terms(grlex)]

    def homogeneous_parts(self: P) -> Dict[int, P]:
        """
        The nonzero homogeneous components of the polynomial, keyed by degree.
        """
        grouped: Dict[int, Dict[Exponents, object]] = {}
        for e, c in self._element.items():
            grouped.setdefault(sum(e), {})[e] = c
        ring = self._element.ring
        return {d: self._build(self._dim, ring.from_dict(terms)) for d, terms in sorted(grouped.items())}

    def _coerce(self: P, other: object) -> Optional[P]:
        if isinstance(other, _SparsePolynomial):
            if type(other) is not type(self) or other._dim != self._dim:
                raise DimensionMismatch(f"cannot combine {self!r} with {other!r}")
            return other  # type: ignore[return-value]
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return type(self).constant(self._dim, other)
        return None

    def __add__(self: P, other: object) -> P:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._build(self._dim, self._element + rhs._element)

    __radd__ = __add__

    def __neg__(self: P) -> P:
        return self._build(self._dim, -self._element)

    def __sub__(self: P, other: object) -> P:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._build(self._dim, self._element - rhs._element)

    def __rsub__(self: P, other: object) -> P:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return self._build(self._dim, lhs._element - self._element)

    def scale(self: P, factor: ScalarInput) -> P:
        return self._build(self._dim, self._element.mul_ground(to_rational(factor)))

    def __mul__(self: P, other: object) -> P:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._build(self._dim, self._element * rhs._element)

    __rmul__ = __mul__

    def __pow__(self: P, exponent: int) -> P:
        if not isinstance(exponent, int) or isinstance(exponent, bool) or exponent < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {exponent!r}")
        return self._build(self._dim, self._element**exponent)

    def partial(self: P, k: int) -> P:
        """
        Exact partial derivative with respect to the k-th polynomial variable (0-based).
        """
        ring = self._element.ring
        if not 0 <= k < ring.ngens:
            raise DimensionMismatch(f"variable index {k} out of range for {ring.ngens} variables")
        return self._build(self._dim, self._element.diff(ring.gens[k]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, _SparsePolynomial):
            return NotImplemented
        return type(self) is type(other) and self._dim == other._dim and self._element == other._element

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((type(self).__name__, self._dim, frozenset(self.terms.items())))
        return self._hash

    def variable_name(self, k: int) -> str:
        return self._element.ring.symbols[k].name

    def __str__(self) -> str:
        if not self._element:
            return "0"
        parts: List[str] = []
        for exponents, coeff in self.sorted_terms():
            factors = [
                self.variable_name(k) if power == 1 else f"{self.variable_name(k)}^{power}"
                for k, power in enumerate(exponents)
                if power
            ]
            magnitude = abs(coeff)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = f"{magnitude}*" + "*".join(factors)
            if not parts:
                parts.append(f"-{body}" if coeff < 0 else body)
            else:
                parts.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._dim}, {str(self)!r})"


class Poly(_SparsePolynomial):
    """
    A polynomial in the field variables u1..uN.
    """

    __slots__ = ()

    @classmethod
    def variable(cls, dim: int, i: int) -> Poly:
        """
        The coordinate function u^(i+1).
        """
        return cls._variable(dim, i)


class JetPoly(_SparsePolynomial):
    """
    A polynomial in u1..uN, u1_x..uN_x and u1_xx..uN_xx, in that variable order.
    """

    __slots__ = ()

    vars_per_field = 3
    max_order: ClassVar[int] = 2

    @classmethod
    def variable_names(cls, dim: int) -> Tuple[str, ...]:
        return tuple(f"u{i + 1}{suffix}" for suffix in ("", "_x", "_xx") for i in range(dim))

    @classmethod
    def embed(cls, p: Poly) -> JetPoly:
        pad = (0,) * (2 * p.dim)
        return cls._build(p.dim, cls.ring(p.dim).from_dict({e + pad: c for e, c in p.element.items()}))

    @classmethod
    def u(cls, dim: int, i: int) -> JetPoly:
        return cls._jet_variable(dim, i, 0)

    @classmethod
    def u_x(cls, dim: int, i: int) -> JetPoly:
        return cls._jet_variable(dim, i, 1)

    @classmethod
    def u_xx(cls, dim: int, i: int) -> JetPoly:
        return cls._jet_variable(dim, i, 2)

    @classmethod
    def _jet_variable(cls, dim: int, i: int, order: int) -> JetPoly:
        if not 0 <= i < dim:
            raise DimensionMismatch(f"field index {i} out of range for dimension {dim}")
        return cls._variable(dim, order * dim + i)

    @property
    def jet_order(self) -> int:
        """
        The highest x-derivative order that occurs (0 for a function of u alone).
        """
        order = 0
        n = self._dim
        for e in self._element.itermonoms():
            if any(e[2 * n :]):
                return 2
            if any(e[n : 2 * n]):
                order = 1
        return order
