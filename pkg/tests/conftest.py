"""Shared strategies and generators for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

from hypothesis import strategies as st

from matimage import GF, Matrix2, RATIONAL, make_poly

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)
nonzero_fractions = small_fractions.filter(lambda f: f != 0)


def rational_matrices():
    return st.builds(
        lambda a, b, c, d: Matrix2.of(RATIONAL, a, b, c, d),
        small_fractions,
        small_fractions,
        small_fractions,
        small_fractions,
    )


def invertible_rational_matrices():
    return rational_matrices().filter(lambda m: m.det() != 0)


@st.composite
def multilinear_polys(draw, max_m: int = 4, max_terms: int = 6):
    m = draw(st.integers(min_value=1, max_value=max_m))
    perms = list(permutations(range(1, m + 1)))
    words = draw(
        st.lists(st.sampled_from(perms), min_size=1, max_size=min(max_terms, len(perms)), unique=True)
    )
    coeffs = draw(
        st.lists(nonzero_fractions, min_size=len(words), max_size=len(words))
    )
    return make_poly(dict(zip(words, coeffs)), m)


@st.composite
def general_polys(draw, max_m: int = 3, max_terms: int = 5, max_len: int = 5):
    m = draw(st.integers(min_value=1, max_value=max_m))
    words = draw(
        st.lists(
            st.lists(st.integers(min_value=1, max_value=m), min_size=1, max_size=max_len).map(tuple),
            min_size=1,
            max_size=max_terms,
            unique=True,
        )
    )
    coeffs = draw(st.lists(nonzero_fractions, min_size=len(words), max_size=len(words)))
    # num_vars inferred: parse round-trips only polynomials without phantom
    # trailing variables
    return make_poly(dict(zip(words, coeffs)))


def random_multilinear(rng: random.Random, max_m: int = 3, coeff_bound: int = 2):
    """Seeded multilinear polynomial with small integer coefficients."""
    m = rng.randint(1, max_m)
    perms = list(permutations(range(1, m + 1)))
    k = rng.randint(1, len(perms))
    words = rng.sample(perms, k)
    nonzero = [c for c in range(-coeff_bound, coeff_bound + 1) if c != 0]
    return make_poly({w: Fraction(rng.choice(nonzero)) for w in words}, m)


def random_rational_matrix(rng: random.Random, bound: int = 5) -> Matrix2:
    return Matrix2.of(RATIONAL, *[Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(4)])


def random_gf_matrix(rng: random.Random, q: int) -> Matrix2:
    return Matrix2.of(GF(q), *[rng.randrange(q) for _ in range(4)])
