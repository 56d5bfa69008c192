"""Exact arithmetic substrate (Python 3.12).

Rationals are ``fractions.Fraction``. Vectors and matrices are dense
tuples over a field: either the rationals or the field of fractions of
k-variate polynomials with rational coefficients (sympy's sparse
``ring``/``field`` machinery). Multivariate polynomials are sympy
``PolyElement`` values, which are canonical dicts from exponent tuples to
nonzero rational coefficients in lexicographic monomial order.

The incremental span oracle ``extend_basis`` keeps an echelon basis with
unit pivots, and a witness word for each basis vector.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable, Mapping, Sequence

from sympy.polys.domains import QQ
from sympy.polys.fields import field as frac_field
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, ring as poly_ring_factory

from .exceptions import DimensionMismatchError, VariableCountError

Rational = Fraction
Word = tuple[int, ...]
Vector = tuple[Any, ...]
Matrix = tuple[Vector, ...]

_RATIONAL = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``num/den`` or an integer. Float literals are rejected.

    Raises ValueError for malformed text and ZeroDivisionError for a zero
    denominator so that callers can tell syntax from semantics.
    """
    m = _RATIONAL.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def to_qq(q: Fraction | int) -> Any:
    q = Fraction(q)
    return QQ(q.numerator, q.denominator)


def from_qq(c: Any) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


# ---------------------------------------------------------------------------
# Fields


@dataclass(frozen=True, slots=True)
class Field:
    """An exact field the linear-algebra routines can run over."""

    name: str
    zero: Any
    one: Any
    convert: Callable[[Fraction], Any]
    variables: int = 0


RATIONALS = Field("rational", Fraction(0), Fraction(1), Fraction)


def _symbols(k: int) -> str:
    return ",".join(f"y{j}" for j in range(1, k + 1))


@lru_cache(maxsize=None)
def poly_ring(k: int) -> tuple[Any, tuple[PolyElement, ...]]:
    """The ring QQ[y1..yk] and its generators."""
    if k < 1:
        raise VariableCountError(f"need at least one variable, got {k}")
    ring, *gens = poly_ring_factory(_symbols(k), QQ, lex)
    return ring, tuple(gens)


@lru_cache(maxsize=None)
def polynomial_fraction_field(k: int) -> tuple[Field, tuple[Any, ...]]:
    """The field QQ(y1..yk) as a ``Field`` plus its generators."""
    if k < 1:
        raise VariableCountError(f"need at least one variable, got {k}")
    fld, *gens = frac_field(_symbols(k), QQ, lex)
    return (
        Field(
            f"poly-fraction({k})",
            fld.zero,
            fld.one,
            lambda q: fld(to_qq(q)),
            variables=k,
        ),
        tuple(gens),
    )


# ---------------------------------------------------------------------------
# Dense vectors and matrices


def vector(values: Iterable[Any], fld: Field = RATIONALS) -> Vector:
    return tuple(fld.convert(v) if isinstance(v, (int, Fraction)) else v for v in values)


def vec_mat_mul(v: Sequence[Any], m: Sequence[Sequence[Any]], fld: Field = RATIONALS) -> Vector:
    """Row vector times matrix, exact; the result is not normalized."""
    if len(v) != len(m):
        raise DimensionMismatchError(
            f"vector of dimension {len(v)} times matrix with {len(m)} rows"
        )
    cols = len(m[0]) if m else 0
    out = [fld.zero] * cols
    for vi, row in zip(v, m):
        if len(row) != cols:
            raise DimensionMismatchError("ragged matrix")
        if not vi:
            continue
        for j, mij in enumerate(row):
            if mij:
                out[j] = out[j] + vi * mij
    return tuple(out)


def dot(u: Sequence[Any], w: Sequence[Any], fld: Field = RATIONALS) -> Any:
    if len(u) != len(w):
        raise DimensionMismatchError(f"dot of dimensions {len(u)} and {len(w)}")
    total = fld.zero
    for a, b in zip(u, w):
        if a and b:
            total = total + a * b
    return total


# ---------------------------------------------------------------------------
# Incremental span search


@dataclass(frozen=True, slots=True)
class Basis:
    """Linearly independent vectors in echelon form, each with a witness word.

    Rows are kept sorted by pivot column; every row has a unit pivot and
    zeros to the left of it.
    """

    dimension: int
    vectors: tuple[Vector, ...] = ()
    pivots: tuple[int, ...] = ()
    words: tuple[Word, ...] = ()

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def full(self) -> bool:
        return len(self.vectors) == self.dimension


def extend_basis(b: Basis, v: Sequence[Any], w: Word) -> tuple[Basis, bool]:
    """Add ``v`` (witnessed by word ``w``) to ``b`` if it is outside the span."""
    if len(v) != b.dimension:
        raise DimensionMismatchError(
            f"vector of dimension {len(v)} for a basis of dimension {b.dimension}"
        )
    r = list(v)
    for row, p in zip(b.vectors, b.pivots):
        c = r[p]
        if not c:
            continue
        for j in range(p, b.dimension):
            if row[j]:
                r[j] = r[j] - c * row[j]
    pivot = next((j for j, x in enumerate(r) if x), None)
    if pivot is None:
        return b, False
    inv = r[pivot] ** -1
    reduced = tuple(x * inv if x else x for x in r)
    at = bisect.bisect(b.pivots, pivot)
    return (
        Basis(
            b.dimension,
            b.vectors[:at] + (reduced,) + b.vectors[at:],
            b.pivots[:at] + (pivot,) + b.pivots[at:],
            b.words[:at] + (tuple(w),) + b.words[at:],
        ),
        True,
    )


# ---------------------------------------------------------------------------
# Multivariate polynomials


def _ngens(p: PolyElement) -> int:
    return p.ring.ngens


def poly_from_terms(k: int, terms: Mapping[tuple[int, ...], Fraction | int]) -> PolyElement:
    """Build a polynomial from an exponent-vector -> coefficient mapping."""
    ring, _ = poly_ring(k)
    for exps in terms:
        if len(exps) != k or any(e < 0 for e in exps):
            raise VariableCountError(f"exponent vector {exps} for {k} variables")
    return ring.from_dict({tuple(e): to_qq(c) for e, c in terms.items() if c})


def poly_terms(p: PolyElement) -> dict[tuple[int, ...], Fraction]:
    return {tuple(m): from_qq(c) for m, c in p.items()}


def poly_add(p: PolyElement, q: PolyElement) -> PolyElement:
    if _ngens(p) != _ngens(q):
        raise VariableCountError(f"{_ngens(p)} vs {_ngens(q)} variables")
    return p + q


def poly_mul(p: PolyElement, q: PolyElement) -> PolyElement:
    if _ngens(p) != _ngens(q):
        raise VariableCountError(f"{_ngens(p)} vs {_ngens(q)} variables")
    return p * q


def poly_eval(p: PolyElement, point: Sequence[Fraction | int]) -> Fraction:
    """Substitute every variable exactly."""
    if len(point) != _ngens(p):
        raise VariableCountError(
            f"point with {len(point)} coordinates for {_ngens(p)} variables"
        )
    if not p:
        return Fraction(0)
    return from_qq(p(*[to_qq(x) for x in point]))


def poly_diff(p: PolyElement, j: int) -> PolyElement:
    """Partial derivative with respect to y_j (1-based)."""
    if not 1 <= j <= _ngens(p):
        raise VariableCountError(f"no variable y{j} among {_ngens(p)}")
    return p.diff(p.ring.gens[j - 1])


def fraction_to_poly(value: Any) -> PolyElement:
    """Turn a polynomial-fraction value with constant denominator into a polynomial."""
    num, den = value.numer, value.denom
    if not den.is_ground:
        raise ValueError(f"{value} is not a polynomial")
    return num.quo_ground(den.LC)
