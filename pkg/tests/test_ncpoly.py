"""Parser, evaluation, multilinearity, and weight profiles."""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matimage import (
    ArityError,
    ConstantTermError,
    FLOAT64,
    Matrix2,
    PolyParseError,
    RATIONAL,
    evaluate,
    is_multilinear,
    make_poly,
    parse,
    weight_profile,
)
from conftest import general_polys, multilinear_polys, rational_matrices, small_fractions

E11 = Matrix2.unit(RATIONAL, 1, 1)
E12 = Matrix2.unit(RATIONAL, 1, 2)
E21 = Matrix2.unit(RATIONAL, 2, 1)
E22 = Matrix2.unit(RATIONAL, 2, 2)
I2 = Matrix2.identity(RATIONAL)


class TestParse:
    def test_commutator(self):
        p = parse("x*y - y*x")
        assert dict(p.terms) == {(1, 2): 1, (2, 1): -1}
        assert p.num_vars == 2

    def test_commutator_sugar_square(self):
        p = parse("[x,y]^2")
        assert dict(p.terms) == {
            (1, 2, 1, 2): 1,
            (1, 2, 2, 1): -1,
            (2, 1, 1, 2): -1,
            (2, 1, 2, 1): 1,
        }

    def test_constant_term_rejected(self):
        with pytest.raises(ConstantTermError):
            parse("x + 3")

    def test_cancelling_constant_ok(self):
        p = parse("x + 3 - 3")
        assert dict(p.terms) == {(1,): 1}

    def test_zero_polynomial_flagged(self):
        for text in ("0", "x - x", "[x,x]"):
            p = parse(text)
            assert p.is_zero

    def test_syntax_error_has_position(self):
        with pytest.raises(PolyParseError) as err:
            parse("x*y + *z")
        assert err.value.position == 6

    def test_bad_character_position(self):
        with pytest.raises(PolyParseError) as err:
            parse("x + y$")
        assert err.value.position == 5

    def test_rational_and_decimal_coefficients(self):
        assert dict(parse("3/2*x").terms) == {(1,): Fraction(3, 2)}
        assert dict(parse("0.5*x").terms) == {(1,): Fraction(1, 2)}

    def test_aliases_and_indexed_variables(self):
        assert parse("x*y*z*w").num_vars == 4
        assert dict(parse("x4*x1").terms) == {(4, 1): 1}

    def test_juxtaposition(self):
        s4 = parse("[x1,x2][x3,x4]+[x3,x4][x1,x2]")
        explicit = parse("[x1,x2]*[x3,x4]+[x3,x4]*[x1,x2]")
        assert s4 == explicit

    def test_exponent_must_be_positive_integer(self):
        with pytest.raises(PolyParseError):
            parse("x^0")
        with pytest.raises(PolyParseError):
            parse("x^(2)")

    def test_like_terms_merge(self):
        assert dict(parse("x*y + x*y").terms) == {(1, 2): 2}


class TestEvaluate:
    def test_commutator_on_units(self):
        p = parse("[x,y]")
        assert evaluate(p, (E11, E12)) == E12

    def test_identity_factor(self):
        p = parse("x*y")
        a = Matrix2.of(RATIONAL, 1, 2, 3, 4)
        assert evaluate(p, (I2, a)) == a

    def test_commutator_of_equal_arguments(self):
        p = parse("[x,y]")
        a = Matrix2.of(RATIONAL, 5, -1, 2, 7)
        assert evaluate(p, (a, a)) == Matrix2.zero(RATIONAL)

    def test_arity_mismatch(self):
        with pytest.raises(ArityError):
            evaluate(parse("[x,y]"), (E11,))

    def test_float_domain(self):
        p = parse("x*y+y*x")
        a = Matrix2.of(FLOAT64, 1, 0, 0, 1)
        assert evaluate(p, (a, a)) == Matrix2.of(FLOAT64, 2, 0, 0, 2)

    @settings(max_examples=60)
    @given(multilinear_polys(max_m=3), rational_matrices(), rational_matrices(), small_fractions, small_fractions)
    def test_slot_linearity(self, p, a, b, alpha, beta):
        """Multilinear evaluation is exactly linear in every slot."""
        others = [Matrix2.of(RATIONAL, 1, 1, 0, 1)] * (p.num_vars - 1)
        for slot in range(p.num_vars):
            args_mix = others[:slot] + [a.scale(alpha) + b.scale(beta)] + others[slot:]
            args_a = others[:slot] + [a] + others[slot:]
            args_b = others[:slot] + [b] + others[slot:]
            lhs = evaluate(p, args_mix)
            rhs = evaluate(p, args_a).scale(alpha) + evaluate(p, args_b).scale(beta)
            assert lhs == rhs


class TestMultilinear:
    def test_examples(self):
        assert is_multilinear(parse("[x,y]"))
        assert not is_multilinear(parse("x^2"))
        assert is_multilinear(parse("x1*x2 + x2*x1"))

    def test_missing_variable_not_multilinear(self):
        assert not is_multilinear(make_poly({(1, 3): 1}, 3))


def brute_force_weights(p, bound=8):
    """Independent oracle: enumerate primitive small integer weight vectors,
    keep those giving a common nonzero weighted degree, prefer all-ones,
    else pick minimal max-norm (ties lexicographic), sign fixed by d > 0."""
    import math

    degs = p.degree_vectors()
    m = p.num_vars

    def wdeg(w):
        ds = {sum(a * b for a, b in zip(d, w)) for d in degs}
        return ds.pop() if len(ds) == 1 else None

    ones = (1,) * m
    d = wdeg(ones)
    if d:
        return ones, d
    best = None
    for w in product(range(-bound, bound + 1), repeat=m):
        g = 0
        for x in w:
            g = math.gcd(g, abs(x))
        if g != 1:
            continue
        d = wdeg(w)
        if not d:
            continue
        if d < 0:
            w, d = tuple(-x for x in w), -d
        key = (max(abs(x) for x in w), w)
        if best is None or key < best[0]:
            best = (key, w, d)
    return (best[1], best[2]) if best else None


class TestWeightProfile:
    def test_x2_plus_y3(self):
        wp = weight_profile(parse("x^2 + y^3"))
        assert (wp.weights, wp.weighted_degree) == ((3, 2), 6)
        assert brute_force_weights(parse("x^2 + y^3")) == ((3, 2), 6)

    def test_homogeneous_commutator(self):
        wp = weight_profile(parse("[x,y]"))
        assert (wp.weights, wp.weighted_degree) == ((1, 1), 2)

    def test_inhomogeneous_has_none(self):
        assert weight_profile(parse("x + x^2")) is None

    def test_zero_poly_has_none(self):
        assert weight_profile(parse("x-x")) is None

    def test_matches_brute_force(self):
        cases = ["x^2*y + y^2", "x*y+y*x", "x1^3 + x2^2*x1", "x1*x2*x1", "x^4+y^2*x^2"]
        for text in cases:
            p = parse(text)
            wp = weight_profile(p)
            oracle = brute_force_weights(p)
            if oracle is None:
                assert wp is None, text
            else:
                assert (wp.weights, wp.weighted_degree) == oracle, text

    def test_semi_homogeneity_property(self):
        for text in ["x^2+y^3", "[x,y]", "x1*x2*x1"]:
            p = parse(text)
            wp = weight_profile(p)
            for dj in p.degree_vectors():
                assert sum(a * b for a, b in zip(dj, wp.weights)) == wp.weighted_degree


class TestRoundTrip:
    @settings(max_examples=150)
    @given(general_polys())
    def test_parse_print_identity(self, p):
        assert parse(str(p)) == p

    @settings(max_examples=60)
    @given(multilinear_polys())
    def test_parse_print_identity_multilinear(self, p):
        assert parse(str(p)) == p

    def test_zero_round_trip(self):
        z = parse("x-x")
        assert str(z) == "0"
        assert parse(str(z)).is_zero


class TestScalingIdentity:
    @settings(max_examples=40)
    @given(
        st.sampled_from(["x^2+y^3", "[x,y]", "x*y+y*x", "x1*x2*x1"]),
        small_fractions.filter(lambda c: c != 0),
        st.integers(0, 2**30),
    )
    def test_weighted_rescaling(self, text, c, seed):
        """evaluate(p, c^w1 x1, ..., c^wm xm) == c^d evaluate(p, xs), exactly."""
        import random

        from conftest import random_rational_matrix

        p = parse(text)
        wp = weight_profile(p)
        rng = random.Random(seed)
        args = [random_rational_matrix(rng) for _ in range(p.num_vars)]
        scaled = [a.scale(Fraction(c) ** w) for a, w in zip(args, wp.weights)]
        assert evaluate(p, scaled) == evaluate(p, args).scale(Fraction(c) ** wp.weighted_degree)
