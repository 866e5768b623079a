"""Exact image classification for multilinear polynomials.

A multilinear polynomial is determined on all inputs by its values on
matrix-unit tuples, so the full 4^m table of those values decides
everything: the polynomial is an identity iff the table is all zero,
central iff all values are scalar, and otherwise its image contains the
trace-zero matrices.  Table values have a rigid shape (zero, a single
off-diagonal cell, or diagonal) and their linear span is one of exactly
four subspaces; both facts are enforced as hard internal assertions.

The four-letter span and the domain decide the reported label: over the
reals a full span means the image is all of M2, over other exact domains
it only certifies that the non-scalar trace-zero matrices are inside, so
the honest label there is SL2_SUBSET.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .errors import (
    NonUnitEntryError,
    NoOffdiagonalError,
    NotMultilinearError,
    StructuralViolationError,
    TooLargeError,
)
from .mat2 import Domain, FLOAT64, GFDomain, Matrix2, RATIONAL
from .ncpoly import NCPoly, is_multilinear

# unit order: index u <-> e_{ij}; chi (the 1<->2 index swap) is u -> 3-u
UNIT_PAIRS = ((1, 1), (1, 2), (2, 1), (2, 2))

MAX_UNIT_TABLE_VARS = 12  # 4^12 table entries; exactness over sampling


class ImageLabel(str, Enum):
    ZERO = "ZERO"
    SCALARS = "SCALARS"
    SL2 = "SL2"
    FULL = "FULL"
    SL2_SUBSET = "SL2_SUBSET"


class SpanLabel(str, Enum):
    ZERO = "zero"
    SCALARS = "scalars"
    SL2 = "sl2"
    FULL = "full"


def unit_matrix(domain: Domain, u: int) -> Matrix2:
    i, j = UNIT_PAIRS[u]
    return Matrix2.unit(domain, i, j)


def unit_index_of(m: Matrix2) -> int:
    """Index of a matrix unit; NonUnitEntryError for anything else."""
    dom = m.domain
    one, zero = dom.one(), dom.zero()
    entries = m.entries()
    hot = [k for k, e in enumerate(entries) if e == one]
    if len(hot) != 1 or any(e != zero for k, e in enumerate(entries) if k != hot[0]):
        raise NonUnitEntryError(f"{m!r} is not a matrix unit")
    return hot[0]


def chi_index(u: int) -> int:
    return 3 - u


def chi_flip(units: Sequence[Matrix2]) -> tuple[Matrix2, ...]:
    """Swap indices 1 and 2 in every slot: e11<->e22, e12<->e21.

    Realized by simultaneous conjugation with [[0,1],[1,0]]; an involution.
    """
    out = []
    for m in units:
        u = unit_index_of(m)
        out.append(unit_matrix(m.domain, chi_index(u)))
    return tuple(out)


def _word_on_units(word: tuple[int, ...], units: tuple[int, ...]) -> tuple[int, int] | None:
    """Product of matrix units along a word: a unit (i,j) or None for zero.

    e_ij * e_kl is e_il when j == k and zero otherwise, so the product
    survives exactly when the index chain matches up.
    """
    i, j = UNIT_PAIRS[units[word[0] - 1]]
    for v in word[1:]:
        k, l = UNIT_PAIRS[units[v - 1]]
        if j != k:
            return None
        j = l
    return (i, j)


Entries = tuple[Fraction, Fraction, Fraction, Fraction]


@lru_cache(maxsize=128)
def _rational_unit_values(p: NCPoly) -> tuple[Entries, ...]:
    """Exact values of p on all 4^m unit tuples, in itertools.product order."""
    if not is_multilinear(p):
        raise NotMultilinearError(f"{p!r} is not multilinear")
    m = p.num_vars
    if m > MAX_UNIT_TABLE_VARS:
        raise TooLargeError(f"m={m} exceeds the unit-table cap of {MAX_UNIT_TABLE_VARS}")
    terms = list(p.terms.items())
    values = []
    for units in product(range(4), repeat=m):
        cells = [Fraction(0)] * 4
        for word, coeff in terms:
            pos = _word_on_units(word, units)
            if pos is not None:
                i, j = pos
                cells[(i - 1) * 2 + (j - 1)] += coeff
        values.append(tuple(cells))
    return tuple(values)


def _shape_of(cells: Entries) -> str:
    """zero | offdiagonal | diagonal; anything else is a hard violation."""
    a11, a12, a21, a22 = cells
    if a12 == 0 and a21 == 0:
        return "zero" if a11 == 0 and a22 == 0 else "diagonal"
    if a11 == 0 and a22 == 0 and (a12 == 0 or a21 == 0):
        return "offdiagonal"
    raise StructuralViolationError(
        "unit-tuple value is neither zero, off-diagonal, nor diagonal",
        diagnostics={"value": cells},
    )


@dataclass(frozen=True)
class UnitTable:
    """Values of a multilinear polynomial on every matrix-unit tuple."""

    poly: NCPoly
    domain: Domain
    num_vars: int
    values: tuple[Matrix2, ...]

    def index_of(self, units: Sequence[int]) -> int:
        idx = 0
        for u in units:
            idx = idx * 4 + u
        return idx

    def value_at(self, units: Sequence[int]) -> Matrix2:
        return self.values[self.index_of(units)]

    def tuples(self) -> Iterator[tuple[int, ...]]:
        return product(range(4), repeat=self.num_vars)


def unit_table(p: NCPoly, domain: Domain = RATIONAL) -> UnitTable:
    """The complete 4^m table of p's values on matrix-unit tuples.

    Every entry is validated against the shape constraint (zero, c*e_ij
    with i != j, or diagonal); a violation raises StructuralViolationError.
    """
    raw = _rational_unit_values(p)
    for cells in raw:
        _shape_of(cells)
    if isinstance(domain, GFDomain):
        for coeff in p.terms.values():
            domain.from_fraction(coeff)  # validate p is definable mod p
    f = domain.from_fraction
    values = tuple(Matrix2(domain, f(c[0]), f(c[1]), f(c[2]), f(c[3])) for c in raw)
    return UnitTable(p, domain, p.num_vars, values)


def _span_rank(vectors, domain: Domain) -> int:
    """Rank of 4-entry vectors over the domain field, by exact elimination."""
    basis: list[list] = []
    for vec in vectors:
        row = list(vec)
        for b in basis:
            lead = next(k for k in range(4) if not domain.is_zero(b[k]))
            if not domain.is_zero(row[lead]):
                f = row[lead] / b[lead]
                row = [x - f * y for x, y in zip(row, b)]
        if any(not domain.is_zero(x) for x in row):
            basis.append(row)
            if len(basis) == 4:
                break
    return len(basis)


@dataclass(frozen=True)
class ImageClassML:
    """Classification record for a multilinear polynomial's image."""

    label: ImageLabel
    span_label: SpanLabel
    char: int
    note: str = ""

    def to_json_dict(self):
        return {
            "label": self.label.value,
            "span": self.span_label.value,
            "char": self.char,
            "note": self.note,
        }


def span_label_of_values(values: Sequence[Matrix2], domain: Domain) -> SpanLabel:
    """Which of the four subspaces the values span; anything else violates
    the dichotomy and raises StructuralViolationError."""
    nonzero = [v for v in values if not v.is_zero()]
    if not nonzero:
        return SpanLabel.ZERO
    rank = _span_rank([v.entries() for v in nonzero], domain)
    all_scalar = all(v.is_scalar() for v in nonzero)
    all_traceless = all(domain.is_zero(v.trace()) for v in nonzero)
    if rank == 1 and all_scalar:
        return SpanLabel.SCALARS
    if rank == 3 and all_traceless:
        return SpanLabel.SL2
    if rank == 4:
        return SpanLabel.FULL
    raise StructuralViolationError(
        "value span is outside the four-way dichotomy",
        diagnostics={"rank": rank, "all_scalar": all_scalar, "all_traceless": all_traceless},
    )


def classify(p: NCPoly, domain: Domain = RATIONAL) -> ImageClassML:
    """Exact classification of Image p via the unit table.

    The span of the table values is computed by exact rank over the
    coefficient field (mod p for GF domains; the float domain is decided
    over the rationals and labeled with real semantics).  A span outside
    the four-way list {0, scalars, sl2, full} raises StructuralViolationError.
    """
    table_domain = RATIONAL if domain in (RATIONAL, FLOAT64) else domain
    table = unit_table(p, table_domain)
    span = span_label_of_values(table.values, table_domain)
    char = domain.char
    note = ""
    if span is SpanLabel.ZERO:
        label = ImageLabel.ZERO
    elif span is SpanLabel.SCALARS:
        label = ImageLabel.SCALARS
    elif span is SpanLabel.SL2:
        label = ImageLabel.SL2
        if char == 2:
            note = "char 2: sl2 includes the scalar matrices; sl2 is contained in the image"
    else:
        if domain is FLOAT64:
            label = ImageLabel.FULL
        else:
            label = ImageLabel.SL2_SUBSET
            note = "full span certifies sl2 minus scalars inside the image; fullness is only claimed over the reals"
    return ImageClassML(label, span, char, note)


def locate_offdiagonal(p: NCPoly, domain: Domain = RATIONAL):
    """First unit tuple whose value is c*e12 or c*e21 with c != 0.

    Returns (units, c, position) where units is the tuple of unit matrices,
    and position is (1,2) or (2,1).  Rescaling slot 1 by 1/c and applying
    chi_flip when position is (2,1) turns the value into e12 exactly.
    Raises NoOffdiagonalError when the table has no off-diagonal value
    (exactly the identity/central cases).
    """
    table = unit_table(p, domain)
    dom = table.domain
    for units in table.tuples():
        v = table.value_at(units)
        if not dom.is_zero(v.a12):
            return tuple(unit_matrix(dom, u) for u in units), v.a12, (1, 2)
        if not dom.is_zero(v.a21):
            return tuple(unit_matrix(dom, u) for u in units), v.a21, (2, 1)
    raise NoOffdiagonalError("no unit tuple evaluates to an off-diagonal value")
