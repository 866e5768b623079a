"""Noncommutative polynomials: parsing, representation, structural analysis.

A polynomial in noncommuting variables x1..xm is stored as a map from words
(tuples of 1-based variable indices) to nonzero rational coefficients, with
no constant term.  The input grammar:

    expr    :=  ["+"|"-"] term { ("+"|"-") term }
    term    :=  factor { ["*"] factor }          (juxtaposition multiplies)
    factor  :=  primary [ "^" INTEGER ]          (INTEGER >= 1)
    primary :=  NUMBER | VARIABLE | "(" expr ")" | "[" expr "," expr "]"
    NUMBER  :=  digits [ "/" digits | "." digits ]
    VARIABLE:=  "x1".."x99" | "x" | "y" | "z" | "w"   (x,y,z,w = x1..x4)

"[a,b]" is commutator sugar for a*b - b*a.  Like terms are merged and zero
terms dropped; a nonzero constant term is rejected, the zero polynomial is
accepted and flagged by is_zero.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .errors import (
    ArityError,
    ConstantTermError,
    DomainError,
    PolyParseError,
)
from .mat2 import Domain, Matrix2

Word = tuple[int, ...]

MAX_VAR_INDEX = 99

_EMPTY: Word = ()


@dataclass(frozen=True)
class NCPoly:
    """Canonical noncommutative polynomial: word -> nonzero Fraction."""

    terms: Mapping[Word, Fraction]
    num_vars: int

    def __post_init__(self):
        for word, coeff in self.terms.items():
            if coeff == 0:
                raise ValueError("zero coefficient stored")
            if word == _EMPTY:
                raise ConstantTermError("constant term present")
            if any(not 1 <= v <= self.num_vars for v in word):
                raise ValueError(f"variable index out of range in {word}")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.num_vars == other.num_vars and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.num_vars, tuple(sorted(self.terms.items()))))

    def __str__(self) -> str:
        return to_string(self)

    def __repr__(self):
        return f"NCPoly({to_string(self)!r}, m={self.num_vars})"

    def total_degrees(self) -> list[int]:
        return [len(w) for w in self.terms]

    def degree_vectors(self) -> list[tuple[int, ...]]:
        """Per-monomial vector of per-variable degrees."""
        out = []
        for word in self.terms:
            counts = [0] * self.num_vars
            for v in word:
                counts[v - 1] += 1
            out.append(tuple(counts))
        return out


# ---------------------------------------------------------------------------
# raw term-dict arithmetic (constant term allowed only mid-parse)


def _add(a: dict, b: dict) -> dict:
    out = dict(a)
    for w, c in b.items():
        s = out.get(w, Fraction(0)) + c
        if s:
            out[w] = s
        else:
            out.pop(w, None)
    return out


def _scale(a: dict, c: Fraction) -> dict:
    if not c:
        return {}
    return {w: c * k for w, k in a.items()}


def _mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            w = w1 + w2
            s = out.get(w, Fraction(0)) + c1 * c2
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return out


def _pow(a: dict, n: int) -> dict:
    out = {_EMPTY: Fraction(1)}
    for _ in range(n):
        out = _mul(out, a)
    return out


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+|/\d+)?)|(?P<name>x\d+|[xyzw])|(?P<op>[-+*^(),\[\]]))"
)

_ALIASES = {"x": 1, "y": 2, "z": 3, "w": 4}


@dataclass
class _Token:
    kind: str  # number | name | op | end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            stripped = text[i:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped)
            raise PolyParseError(f"unexpected character {text[bad_at]!r}", bad_at)
        for kind in ("number", "name", "op"):
            t = m.group(kind)
            if t is not None:
                tokens.append(_Token(kind, t, m.start(kind)))
                break
        i = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.max_var = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect_op(self, op: str) -> _Token:
        t = self.peek()
        if t.kind != "op" or t.text != op:
            raise PolyParseError(f"expected {op!r}", t.pos)
        return self.next()

    def parse(self) -> dict:
        terms = self.parse_expr()
        t = self.peek()
        if t.kind != "end":
            raise PolyParseError(f"unexpected {t.text!r}", t.pos)
        return terms

    def parse_expr(self) -> dict:
        sign = Fraction(1)
        t = self.peek()
        if t.kind == "op" and t.text in "+-":
            self.next()
            if t.text == "-":
                sign = Fraction(-1)
        out = _scale(self.parse_term(), sign)
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.next()
                rhs = self.parse_term()
                out = _add(out, _scale(rhs, Fraction(1 if t.text == "+" else -1)))
            else:
                return out

    def parse_term(self) -> dict:
        out = self.parse_factor()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text == "*":
                self.next()
                out = _mul(out, self.parse_factor())
            elif t.kind == "name" or (t.kind == "op" and t.text in "(["):
                out = _mul(out, self.parse_factor())
            else:
                return out

    def parse_factor(self) -> dict:
        base = self.parse_primary()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.next()
            e = self.peek()
            if e.kind != "number" or not e.text.isdigit() or int(e.text) < 1:
                raise PolyParseError("exponent must be a positive integer", e.pos)
            self.next()
            return _pow(base, int(e.text))
        return base

    def parse_primary(self) -> dict:
        t = self.peek()
        if t.kind == "number":
            self.next()
            return {_EMPTY: Fraction(t.text)}
        if t.kind == "name":
            self.next()
            idx = _ALIASES.get(t.text) or int(t.text[1:])
            if not 1 <= idx <= MAX_VAR_INDEX:
                raise PolyParseError(f"variable index out of range: {t.text}", t.pos)
            self.max_var = max(self.max_var, idx)
            return {(idx,): Fraction(1)}
        if t.kind == "op" and t.text == "(":
            self.next()
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if t.kind == "op" and t.text == "[":
            self.next()
            a = self.parse_expr()
            self.expect_op(",")
            b = self.parse_expr()
            self.expect_op("]")
            return _add(_mul(a, b), _scale(_mul(b, a), Fraction(-1)))
        raise PolyParseError(f"unexpected {t.text!r}" if t.text else "unexpected end of input", t.pos)


def parse(text: str) -> NCPoly:
    """Parse polynomial text into canonical form.

    Raises PolyParseError (position-annotated) on bad syntax and
    ConstantTermError when a nonzero constant term survives cancellation.
    The zero polynomial is returned with is_zero set.
    """
    p = _Parser(text)
    terms = p.parse()
    const = terms.pop(_EMPTY, Fraction(0))
    if const != 0:
        raise ConstantTermError(f"polynomial has constant term {const}")
    return NCPoly(terms, p.max_var)


def make_poly(terms: Mapping[Word, Fraction | int], num_vars: int | None = None) -> NCPoly:
    """Build a canonical NCPoly from a word -> coefficient mapping."""
    clean = {tuple(w): Fraction(c) for w, c in terms.items() if Fraction(c) != 0}
    if num_vars is None:
        num_vars = max((max(w) for w in clean if w), default=0)
    return NCPoly(clean, num_vars)


def _coeff_str(c: Fraction) -> str:
    return str(c)


def to_string(p: NCPoly) -> str:
    """Canonical text form; parse(to_string(p)) == p."""
    if p.is_zero:
        return "0"
    parts = []
    for word in sorted(p.terms, key=lambda w: (len(w), w)):
        c = p.terms[word]
        mono = "*".join(f"x{v}" for v in word)
        if abs(c) == 1:
            body = mono
        else:
            body = f"{_coeff_str(abs(c))}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# evaluation


def evaluate(p: NCPoly, args: Sequence[Matrix2], domain: Domain | None = None) -> Matrix2:
    """Evaluate p on a tuple of matrices, all over one domain.

    Multilinear polynomials are linear in every slot; that exactness is
    relied on throughout (slot rescaling, plane combinations).
    """
    if len(args) != p.num_vars:
        raise ArityError(f"expected {p.num_vars} matrices, got {len(args)}")
    if args:
        dom = args[0].domain
        for a in args[1:]:
            if a.domain != dom:
                raise DomainError("evaluation arguments span different domains")
        if domain is not None and domain != dom:
            raise DomainError("explicit domain disagrees with argument domain")
    else:
        if domain is None:
            raise DomainError("evaluating a 0-variable polynomial needs an explicit domain")
        dom = domain
    acc = Matrix2.zero(dom)
    for word, coeff in p.terms.items():
        m = args[word[0] - 1]
        for v in word[1:]:
            m = m * args[v - 1]
        acc = acc + m.scale(dom.from_fraction(coeff))
    return acc


def is_multilinear(p: NCPoly) -> bool:
    """True iff every monomial contains each of x1..xm exactly once."""
    want = tuple(range(1, p.num_vars + 1))
    return all(tuple(sorted(word)) == want for word in p.terms)


# ---------------------------------------------------------------------------
# weight profiles


@dataclass(frozen=True)
class WeightProfile:
    """Integer weights (w1..wm) and the common weighted degree d != 0.

    Canonical: primitive (gcd 1), minimal max-norm among integer solutions,
    the all-ones vector preferred when valid, and sign fixed by d > 0.
    """

    weights: tuple[int, ...]
    weighted_degree: int


def _nullspace_basis(rows: list[tuple[Fraction, ...]], m: int) -> tuple[list[list[Fraction]], list[int]]:
    """RREF nullspace of the row system; returns (basis, free column indices)."""
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * m
        vec[fc] = Fraction(1)
        for row_i, pc in enumerate(pivots):
            vec[pc] = -mat[row_i][fc]
        basis.append(vec)
    return basis, free

# Enumeration guard for the minimal-norm weight search; beyond it the
# primitive integer basis vector is used directly.
_WEIGHT_SEARCH_LIMIT = 10**6


def _primitive(vec: list[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = math.gcd(g, abs(x))
    return tuple(x // g for x in vec) if g else tuple(vec)


def weight_profile(p: NCPoly) -> WeightProfile | None:
    """Weights making p semi-homogeneous of nonzero weighted degree, or None.

    Solves (d_j - d_1) . w = 0 over the rationals for the per-monomial
    degree vectors d_j, then picks the canonical primitive integer solution
    with d_1 . w != 0.
    """
    if p.is_zero:
        return None
    m = p.num_vars
    degs = p.degree_vectors()
    d1 = degs[0]
    # all-ones shortcut: valid iff all total degrees agree
    if len({sum(d) for d in degs}) == 1:
        total = sum(d1)
        if total != 0:
            return WeightProfile((1,) * m, total)
    rows = [tuple(Fraction(dj[k] - d1[k]) for k in range(m)) for dj in degs[1:]]
    basis, free = _nullspace_basis(rows, m)
    if not basis:
        return None

    def wdeg(vec) -> Fraction:
        return sum(Fraction(d1[k]) * vec[k] for k in range(m))

    # integer-cleared basis vectors give a guaranteed candidate (if any exists)
    fallback = None
    for vec in basis:
        lcm = 1
        for x in vec:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        ivec = _primitive([int(x * lcm) for x in vec])
        if wdeg(ivec) != 0:
            fallback = ivec
            break
    if fallback is None:
        return None

    bound = max(abs(x) for x in fallback)
    nfree = len(free)
    best: tuple[int, ...] | None = None
    for radius in range(1, bound + 1):
        if (2 * radius + 1) ** nfree > _WEIGHT_SEARCH_LIMIT:
            break
        for assign in product(range(-radius, radius + 1), repeat=nfree):
            vec = [Fraction(0)] * m
            for fi, a in zip(range(nfree), assign):
                if a:
                    for k in range(m):
                        vec[k] += a * basis[fi][k]
            if all(x.denominator == 1 for x in vec):
                ivec = [int(x) for x in vec]
                if ivec != [0] * m and max(abs(x) for x in ivec) <= radius and wdeg(ivec) != 0:
                    cand = _primitive(ivec)
                    if wdeg(cand) < 0:
                        cand = tuple(-x for x in cand)
                    if best is None or cand < best:
                        best = cand
        if best is not None:
            break
    if best is None:
        best = fallback if wdeg(fallback) > 0 else tuple(-x for x in fallback)
    d = wdeg(best)
    assert d.denominator == 1 and d > 0
    d = int(d)
    # sanity: every monomial hits the same weighted degree
    for dj in degs:
        assert sum(dj[k] * best[k] for k in range(m)) == d
    return WeightProfile(tuple(best), d)
