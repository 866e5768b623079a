"""2x2 matrix algebra over pluggable scalar domains.

Three domains are supported: RATIONAL (arbitrary-precision exact arithmetic
with fractions.Fraction), FLOAT64 (machine floats with one documented
zero-test tolerance), and GF(p) for primes p < 2**16 (exact mod-p
arithmetic).  Matrix2 values are immutable, carry their domain, and refuse
to mix domains within one expression.

Besides the arithmetic this module provides the similarity machinery
(conjugation, and an explicit conjugator built by the cyclic-vector method)
and seeded "generic" sampling: deterministic random rational or float
matrices used wherever a construction needs points avoiding algebraic
coincidences.  Every downstream use re-verifies its own postcondition, so
the sampler only has to make coincidences unlikely, not impossible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

# Absolute tolerance for float zero tests on unit max-norm data.  The single
# knob of the FLOAT64 domain; zero tests scale it by the context max-norm.
ZERO_TOL = 1e-12

# Relative tolerance for float characteristic-polynomial equality in
# `conjugator`.  Looser than ZERO_TOL because the inputs it gates already
# went through float pipelines.
CHARPOLY_MATCH_TOL = 1e-9


def _splitmix64(x: int) -> int:
    """One step of the splitmix64 generator; used to fork seeds."""
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


@dataclass(frozen=True, slots=True)
class GFElement:
    """Element of GF(p), stored as a canonical residue in [0, p)."""

    value: int
    p: int

    def _check(self, other: "GFElement") -> None:
        if not isinstance(other, GFElement) or other.p != self.p:
            raise DomainError("mixed GF moduli or non-GF operand")

    def __add__(self, other):
        self._check(other)
        return GFElement((self.value + other.value) % self.p, self.p)

    def __sub__(self, other):
        self._check(other)
        return GFElement((self.value - other.value) % self.p, self.p)

    def __mul__(self, other):
        self._check(other)
        return GFElement((self.value * other.value) % self.p, self.p)

    def __truediv__(self, other):
        self._check(other)
        if other.value == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        # p prime, so Fermat inversion is exact
        inv = pow(other.value, self.p - 2, self.p)
        return GFElement((self.value * inv) % self.p, self.p)

    def __neg__(self):
        return GFElement((-self.value) % self.p, self.p)

    def __repr__(self):
        return f"{self.value}"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Domain:
    """Scalar domain interface: construction, zero tests, serialization."""

    name: str
    char: int
    exact: bool

    def coerce(self, value):
        raise NotImplementedError

    def from_fraction(self, q: Fraction):
        raise NotImplementedError

    def zero(self):
        return self.from_fraction(Fraction(0))

    def one(self):
        return self.from_fraction(Fraction(1))

    def is_zero(self, x, scale=1) -> bool:
        raise NotImplementedError

    def to_json(self, x):
        raise NotImplementedError

    def from_json(self, v):
        return self.coerce(v)

    def __repr__(self):
        return self.name


class RationalDomain(Domain):
    name = "rational"
    char = 0
    exact = True

    def coerce(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, str)):
            return Fraction(value)
        if isinstance(value, float):
            return Fraction(value)  # exact binary value
        raise DomainError(f"cannot coerce {value!r} into the rational domain")

    def from_fraction(self, q):
        return q

    def is_zero(self, x, scale=1):
        return x == 0

    def to_json(self, x):
        return str(x)


class Float64Domain(Domain):
    name = "float"
    char = 0
    exact = False

    def coerce(self, value):
        if isinstance(value, (int, float)):
            return float(value)
        if isinstance(value, (Fraction, str)):
            return float(Fraction(value))
        raise DomainError(f"cannot coerce {value!r} into the float domain")

    def from_fraction(self, q):
        return q.numerator / q.denominator

    def is_zero(self, x, scale=1):
        return abs(x) <= ZERO_TOL * float(scale)

    def to_json(self, x):
        return x


class GFDomain(Domain):
    exact = True

    def __init__(self, p: int):
        if not _is_prime(p) or p >= 2**16:
            raise DomainError(f"GF modulus must be a prime below 2**16, got {p}")
        self.p = p
        self.char = p
        self.name = f"gf:{p}"

    def coerce(self, value):
        if isinstance(value, GFElement):
            if value.p != self.p:
                raise DomainError("GF element from a different field")
            return value
        if isinstance(value, int):
            return GFElement(value % self.p, self.p)
        if isinstance(value, (Fraction, str)):
            return self.from_fraction(Fraction(value))
        raise DomainError(f"cannot coerce {value!r} into GF({self.p})")

    def from_fraction(self, q):
        if q.denominator % self.p == 0:
            raise DomainError(f"denominator of {q} not invertible mod {self.p}")
        inv = pow(q.denominator % self.p, self.p - 2, self.p)
        return GFElement((q.numerator * inv) % self.p, self.p)

    def is_zero(self, x, scale=1):
        return x.value == 0

    def to_json(self, x):
        return x.value

    def __eq__(self, other):
        return isinstance(other, GFDomain) and other.p == self.p

    def __hash__(self):
        return hash(("gf", self.p))


RATIONAL = RationalDomain()
FLOAT64 = Float64Domain()

_GF_CACHE: dict[int, GFDomain] = {}


def GF(p: int) -> GFDomain:
    """The field GF(p); instances are cached per modulus."""
    if p not in _GF_CACHE:
        _GF_CACHE[p] = GFDomain(p)
    return _GF_CACHE[p]


def domain_from_name(name: str) -> Domain:
    """Resolve a CLI-style domain name: rational | float | real | gf:<p>."""
    if name == "rational":
        return RATIONAL
    if name in ("float", "real"):  # "real" accepted as an alias
        return FLOAT64
    if name.startswith("gf:"):
        return GF(int(name[3:]))
    raise DomainError(f"unknown domain {name!r}")


@dataclass(frozen=True, slots=True)
class Matrix2:
    """Immutable 2x2 matrix with entries in a fixed scalar domain."""

    domain: Domain
    a11: object
    a12: object
    a21: object
    a22: object

    # -- construction -----------------------------------------------------

    @classmethod
    def of(cls, domain: Domain, a11, a12, a21, a22) -> "Matrix2":
        c = domain.coerce
        return cls(domain, c(a11), c(a12), c(a21), c(a22))

    @classmethod
    def from_rows(cls, domain: Domain, rows) -> "Matrix2":
        (a, b), (c, d) = rows
        return cls.of(domain, a, b, c, d)

    @classmethod
    def zero(cls, domain: Domain) -> "Matrix2":
        z = domain.zero()
        return cls(domain, z, z, z, z)

    @classmethod
    def identity(cls, domain: Domain) -> "Matrix2":
        z, o = domain.zero(), domain.one()
        return cls(domain, o, z, z, o)

    @classmethod
    def scalar(cls, domain: Domain, c) -> "Matrix2":
        c = domain.coerce(c)
        z = domain.zero()
        return cls(domain, c, z, z, c)

    @classmethod
    def unit(cls, domain: Domain, i: int, j: int) -> "Matrix2":
        """Matrix unit e_ij, 1-based indices."""
        if i not in (1, 2) or j not in (1, 2):
            raise DomainError(f"matrix unit indices must be 1 or 2, got ({i},{j})")
        z, o = domain.zero(), domain.one()
        entries = [[z, z], [z, z]]
        entries[i - 1][j - 1] = o
        return cls.from_rows(domain, entries)

    # -- plumbing ---------------------------------------------------------

    def entries(self):
        return (self.a11, self.a12, self.a21, self.a22)

    def rows(self):
        return ((self.a11, self.a12), (self.a21, self.a22))

    def _same(self, other: "Matrix2") -> None:
        if self.domain is not other.domain and self.domain != other.domain:
            raise DomainError("matrices from different domains")

    def map_entries(self, f) -> "Matrix2":
        return Matrix2(self.domain, f(self.a11), f(self.a12), f(self.a21), f(self.a22))

    def to_domain(self, domain: Domain) -> "Matrix2":
        if domain == self.domain:
            return self
        if self.domain is RATIONAL:
            return Matrix2(domain, *[domain.from_fraction(e) for e in self.entries()])
        if self.domain is FLOAT64 and domain is RATIONAL:
            return Matrix2(RATIONAL, *[Fraction(e) for e in self.entries()])
        raise DomainError(f"no conversion from {self.domain} to {domain}")

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "Matrix2") -> "Matrix2":
        self._same(other)
        return Matrix2(
            self.domain,
            self.a11 + other.a11,
            self.a12 + other.a12,
            self.a21 + other.a21,
            self.a22 + other.a22,
        )

    def __sub__(self, other: "Matrix2") -> "Matrix2":
        self._same(other)
        return Matrix2(
            self.domain,
            self.a11 - other.a11,
            self.a12 - other.a12,
            self.a21 - other.a21,
            self.a22 - other.a22,
        )

    def __neg__(self) -> "Matrix2":
        return Matrix2(self.domain, -self.a11, -self.a12, -self.a21, -self.a22)

    def __mul__(self, other):
        if isinstance(other, Matrix2):
            self._same(other)
            return Matrix2(
                self.domain,
                self.a11 * other.a11 + self.a12 * other.a21,
                self.a11 * other.a12 + self.a12 * other.a22,
                self.a21 * other.a11 + self.a22 * other.a21,
                self.a21 * other.a12 + self.a22 * other.a22,
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Matrix2":
        c = self.domain.coerce(c)
        return self.map_entries(lambda e: c * e)

    def apply(self, v):
        """Matrix times column vector (pair)."""
        x, y = v
        return (self.a11 * x + self.a12 * y, self.a21 * x + self.a22 * y)

    # -- invariants -------------------------------------------------------

    def trace(self):
        return self.a11 + self.a22

    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def char_poly(self):
        """The pair (trace, det); x^2 - trace*x + det annihilates the matrix."""
        return (self.trace(), self.det())

    def discriminant(self):
        t = self.trace()
        d = self.domain.coerce(4)
        return t * t - d * self.det()

    def max_norm(self):
        """Largest absolute entry; ordered domains only."""
        if isinstance(self.domain, GFDomain):
            raise DomainError("max-norm undefined over GF(p)")
        return max(abs(e) for e in self.entries())

    def _scale_hint(self):
        # float zero tests run at ZERO_TOL relative to the matrix max-norm,
        # matching the "tolerance on unit max-norm matrices" contract
        if isinstance(self.domain, GFDomain) or self.domain.exact:
            return 1
        norm = self.max_norm()
        return norm if norm > 0 else 1.0

    def is_zero(self, scale=None) -> bool:
        s = self._scale_hint() if scale is None else scale
        return all(self.domain.is_zero(e, s) for e in self.entries())

    def is_scalar(self, scale=None) -> bool:
        s = self._scale_hint() if scale is None else scale
        z = self.domain.is_zero
        return z(self.a12, s) and z(self.a21, s) and z(self.a11 - self.a22, s)

    def is_nilpotent(self, scale=None) -> bool:
        s = self._scale_hint() if scale is None else scale
        sq = s * s if not self.domain.exact else s
        return self.domain.is_zero(self.trace(), s) and self.domain.is_zero(self.det(), sq)

    # -- inversion --------------------------------------------------------

    def inverse(self) -> "Matrix2":
        d = self.det()
        if self.domain.is_zero(d, self._scale_hint() ** 2 if not self.domain.exact else 1):
            raise DomainError("matrix is singular")
        return Matrix2(
            self.domain, self.a22 / d, -self.a12 / d, -self.a21 / d, self.a11 / d
        )

    # -- serialization ----------------------------------------------------

    def to_json(self):
        t = self.domain.to_json
        return [[t(self.a11), t(self.a12)], [t(self.a21), t(self.a22)]]

    @classmethod
    def from_json(cls, domain: Domain, data) -> "Matrix2":
        try:
            (a, b), (c, d) = data
        except (TypeError, ValueError):
            raise DomainError(f"matrix literal must be [[a,b],[c,d]], got {data!r}")
        return cls.of(domain, a, b, c, d)

    def __repr__(self):
        return f"[[{self.a11}, {self.a12}], [{self.a21}, {self.a22}]]"


def trace(a: Matrix2):
    return a.trace()


def det(a: Matrix2):
    return a.det()


def char_poly(a: Matrix2):
    return a.char_poly()


def discriminant(a: Matrix2):
    return a.discriminant()


def conjugate(a: Matrix2, p: Matrix2) -> Matrix2:
    """P * A * P^-1; raises DomainError for singular P."""
    return p * a * p.inverse()


def _cyclic_basis(a: Matrix2) -> Matrix2 | None:
    """An invertible Q = [v | A v] for some v; None when A is scalar.

    In that basis A becomes the companion matrix of its characteristic
    polynomial.  Candidate v's are tried in a fixed order; for a non-scalar
    A at least one of (1,0), (0,1), (1,1) is not an eigenvector.
    """
    dom = a.domain
    z, o = dom.zero(), dom.one()
    best = None
    best_key = None
    for v in ((o, z), (z, o), (o, o)):
        w = a.apply(v)
        d = v[0] * w[1] - v[1] * w[0]
        q = Matrix2(dom, v[0], w[0], v[1], w[1])
        if dom.exact:
            if not dom.is_zero(d):
                return q
        else:
            mag = abs(d)
            if best is None or mag > best_key:
                best, best_key = q, mag
    if best is not None and not dom.is_zero(best.det(), best._scale_hint() ** 2):
        return best
    return None


def conjugator(a: Matrix2, b: Matrix2) -> Matrix2 | None:
    """Invertible P with P*A*P^-1 = B, or None when A and B are not similar.

    Uses the cyclic-vector method: both matrices are brought to the
    companion form of their shared characteristic polynomial, so
    P = Q_B * Q_A^-1.  Equal scalars conjugate by the identity; a scalar is
    never similar to a non-scalar.  Over floats the characteristic
    polynomials are compared to relative tolerance CHARPOLY_MATCH_TOL.
    """
    a._same(b)
    dom = a.domain
    ta, da = a.char_poly()
    tb, db = b.char_poly()
    if dom.exact:
        same_cp = ta == tb and da == db
    else:
        s = max(1.0, a.max_norm(), b.max_norm())
        same_cp = abs(ta - tb) <= CHARPOLY_MATCH_TOL * s and abs(da - db) <= CHARPOLY_MATCH_TOL * s * s
    if not same_cp:
        return None
    sa, sb = a.is_scalar(), b.is_scalar()
    if sa and sb:
        return Matrix2.identity(dom)
    if sa or sb:
        return None
    qa = _cyclic_basis(a)
    qb = _cyclic_basis(b)
    if qa is None or qb is None:
        return None
    return qb * qa.inverse()


@dataclass
class GenericSampler:
    """Deterministic stream of "generic" scalars and matrices.

    Entries are uniform rationals with numerator and denominator bounded by
    the height H (default 1000), or uniform floats in [-1, 1].  Sampled
    matrices are redrawn while singular so downstream similarity machinery
    never receives a degenerate point; the redraw is the documented
    replacement for the non-computable notion of genericity.
    """

    seed: int
    height: int = 1000
    domain: Domain = RATIONAL

    def __post_init__(self):
        if self.domain not in (RATIONAL, FLOAT64):
            raise DomainError("generic sampling supports rational and float domains only")
        import random

        self._rng = random.Random(self.seed & 0xFFFFFFFFFFFFFFFF)

    def fork(self, index: int) -> "GenericSampler":
        """Independent child stream; deterministic in (seed, index)."""
        return GenericSampler(_splitmix64(self.seed ^ _splitmix64(index)), self.height, self.domain)

    def scalar(self):
        if self.domain is RATIONAL:
            num = self._rng.randint(-self.height, self.height)
            den = self._rng.randint(1, self.height)
            return Fraction(num, den)
        return self._rng.uniform(-1.0, 1.0)

    def matrix(self) -> Matrix2:
        for _ in range(64):
            m = Matrix2(self.domain, self.scalar(), self.scalar(), self.scalar(), self.scalar())
            if not self.domain.is_zero(m.det()):
                return m
        raise DomainError("sampler kept producing singular matrices")  # pragma: no cover

    def matrices(self, count: int) -> list[Matrix2]:
        return [self.matrix() for _ in range(count)]


def sample_generic(sampler: GenericSampler, count: int) -> list[Matrix2]:
    """`count` generic matrices from the sampler's deterministic stream."""
    return sampler.matrices(count)
