"""Semi-homogeneous classification: g-ratios, the eight labels, density."""

from fractions import Fraction
from itertools import permutations

import pytest

from matimage import (
    GenericSampler,
    Matrix2,
    NoWeightProfileError,
    RATIONAL,
    SeedFailureError,
    SHLabel,
    ZeroTraceError,
    classify_sh,
    conjugate,
    dense_witness_pair,
    evaluate,
    g_ratio,
    make_poly,
    parse,
    weight_profile,
)

E11 = Matrix2.unit(RATIONAL, 1, 1)
E12 = Matrix2.unit(RATIONAL, 1, 2)
E21 = Matrix2.unit(RATIONAL, 2, 1)
SIGMA = Matrix2.of(RATIONAL, 0, 1, 1, 0)

XSQ = parse("x^2")


def standard_identity_4():
    """Sum over S4 of sgn(s) x_s1 x_s2 x_s3 x_s4; vanishes identically on 2x2."""
    terms = {}
    for perm in permutations((1, 2, 3, 4)):
        inversions = sum(
            1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j]
        )
        terms[perm] = Fraction(-1) ** inversions
    return make_poly(terms, 4)


class TestGRatio:
    def test_diag_1_2(self):
        assert g_ratio(XSQ, (Matrix2.of(RATIONAL, 1, 0, 0, 2),)) == Fraction(4, 25)

    def test_diag_1_3(self):
        assert g_ratio(XSQ, (Matrix2.of(RATIONAL, 1, 0, 0, 3),)) == Fraction(9, 100)

    def test_commutator_trace_zero(self):
        with pytest.raises(ZeroTraceError):
            g_ratio(parse("[x,y]"), (E11, E12))

    def test_conjugation_invariance(self):
        import random

        from conftest import random_rational_matrix

        rng = random.Random(11)
        p = parse("x^2+y^3")
        for _ in range(20):
            args = (random_rational_matrix(rng), random_rational_matrix(rng))
            q = random_rational_matrix(rng)
            if q.det() == 0:
                continue
            conj = tuple(conjugate(m, q) for m in args)
            try:
                expected = g_ratio(p, args)
            except ZeroTraceError:
                continue
            assert g_ratio(p, conj) == expected


class TestClassifySH:
    def test_fourth_power_commutator_nonneg(self):
        assert classify_sh(parse("[x,y]^4")).label is SHLabel.SCALARS_NONNEG

    def test_negated_fourth_power_nonpos(self):
        assert classify_sh(parse("-[x,y]^4")).label is SHLabel.SCALARS_NONPOS

    def test_square_dense(self):
        sig = classify_sh(XSQ)
        assert sig.label is SHLabel.DENSE
        assert len(sig.evidence["g_values"]) == 2

    def test_squared_commutator_all_scalars(self):
        assert classify_sh(parse("[x,y]^2")).label is SHLabel.SCALARS_ALL

    def test_commutator_sl2_all(self):
        sig = classify_sh(parse("[x,y]"))
        assert sig.label is SHLabel.SL2_ALL
        tallies = sig.evidence["discriminant_signs"]
        assert tallies["positive"] > 0 and tallies["negative"] > 0

    def test_single_variable_dense(self):
        assert classify_sh(parse("x")).label is SHLabel.DENSE

    def test_standard_identity_zero(self):
        assert classify_sh(standard_identity_4()).label is SHLabel.ZERO

    def test_requires_weight_profile(self):
        with pytest.raises(NoWeightProfileError):
            classify_sh(parse("x + x^2"))

    def test_mixed_example_dense(self):
        sig = classify_sh(parse("[x,y]^4+[x^4,y^4]"))
        assert sig.label is SHLabel.DENSE

    def test_determinism(self):
        assert classify_sh(parse("[x,y]"), seed=3) == classify_sh(parse("[x,y]"), seed=3)

    def test_signature_serializes(self):
        import json

        doc = classify_sh(parse("[x,y]^2")).to_json_dict()
        json.dumps(doc)  # no Fractions may leak into the evidence
        assert doc["label"] == "SCALARS_ALL"


class TestDenseWitnessPair:
    def test_square_pair(self):
        t1, t2 = dense_witness_pair(XSQ)
        assert g_ratio(XSQ, t1) != g_ratio(XSQ, t2)

    def test_trace_example_pair(self):
        p = parse("[x,y]^4+[x^4,y^4]")
        t1, t2 = dense_witness_pair(p)
        assert g_ratio(p, t1) != g_ratio(p, t2)

    def test_scalar_valued_polynomial_has_no_pair(self):
        with pytest.raises(SeedFailureError):
            dense_witness_pair(parse("[x,y]^2"))

    def test_determinism(self):
        assert dense_witness_pair(XSQ, seed=4) == dense_witness_pair(XSQ, seed=4)


class TestPlusMinusIdentityWitnesses:
    def test_plus_identity(self):
        p = parse("[x,y]^2")
        assert evaluate(p, (E12, E21)) == Matrix2.identity(RATIONAL)

    def test_minus_identity(self):
        p = parse("[x,y]^2")
        args = (Matrix2.of(RATIONAL, 1, 0, 0, 0), SIGMA)
        assert evaluate(p, args) == Matrix2.identity(RATIONAL).scale(-1)


class TestSemiConeAndSymmetry:
    def test_semi_cone_rescaling(self):
        import random

        from conftest import random_rational_matrix

        rng = random.Random(23)
        for text in ("[x,y]", "[x,y]^2", "x^2+y^3"):
            p = parse(text)
            wp = weight_profile(p)
            args = [random_rational_matrix(rng) for _ in range(p.num_vars)]
            c = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            scaled = [a.scale(c**w) for a, w in zip(args, wp.weights)]
            assert evaluate(p, scaled) == evaluate(p, args).scale(c**wp.weighted_degree)

    def test_trace_zero_values_similar_to_negation(self):
        """Trace-zero values V and -V share a characteristic polynomial."""
        sampler = GenericSampler(31)
        p = parse("[x,y]")
        for _ in range(25):
            args = (sampler.matrix(), sampler.matrix())
            v = evaluate(p, args)
            assert (-v).char_poly() == v.char_poly()
