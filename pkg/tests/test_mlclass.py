"""Unit tables, exact classification, off-diagonal location, chi flips."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matimage import (
    FLOAT64,
    GF,
    ImageLabel,
    Matrix2,
    NonUnitEntryError,
    NotMultilinearError,
    RATIONAL,
    SpanLabel,
    chi_flip,
    classify,
    conjugate,
    evaluate,
    locate_offdiagonal,
    make_poly,
    parse,
    unit_table,
)
from matimage.errors import NoOffdiagonalError, TooLargeError
from conftest import multilinear_polys

E11 = Matrix2.unit(RATIONAL, 1, 1)
E12 = Matrix2.unit(RATIONAL, 1, 2)
E21 = Matrix2.unit(RATIONAL, 2, 1)
E22 = Matrix2.unit(RATIONAL, 2, 2)
SIGMA = Matrix2.of(RATIONAL, 0, 1, 1, 0)

S4 = "[x1,x2]*[x3,x4]+[x3,x4]*[x1,x2]"


class TestUnitTable:
    def test_commutator_entries(self):
        t = unit_table(parse("[x,y]"))
        # unit indices: 0=e11, 1=e12, 2=e21, 3=e22
        assert t.value_at((0, 1)) == E12
        assert t.value_at((1, 2)) == E11 - E22

    def test_zero_polynomial_table(self):
        t = unit_table(make_poly({}, 2))
        assert all(v == Matrix2.zero(RATIONAL) for v in t.values)

    def test_identity_polynomial_table(self):
        t = unit_table(parse("x1"))
        assert list(t.values) == [E11, E12, E21, E22]

    def test_requires_multilinear(self):
        with pytest.raises(NotMultilinearError):
            unit_table(parse("x^2"))

    def test_variable_cap(self):
        p = make_poly({tuple(range(1, 14)): 1}, 13)
        with pytest.raises(TooLargeError):
            unit_table(p)

    def test_table_determines_polynomial(self):
        """Multilinearity: the table reproduces evaluation on arbitrary input."""
        import random

        from conftest import random_rational_matrix

        p = parse("x*y - 2*y*x")
        t = unit_table(p)
        rng = random.Random(5)
        units = [E11, E12, E21, E22]
        a, b = random_rational_matrix(rng), random_rational_matrix(rng)
        acc = Matrix2.zero(RATIONAL)
        for i in range(4):
            for j in range(4):
                coeff = a.entries()[i] * b.entries()[j]
                acc = acc + t.value_at((i, j)).scale(coeff)
        assert acc == evaluate(p, (a, b))


class TestClassify:
    def test_commutator_sl2(self):
        assert classify(parse("[x,y]"), FLOAT64).label is ImageLabel.SL2

    def test_product_full_over_reals(self):
        assert classify(parse("x1*x2"), FLOAT64).label is ImageLabel.FULL

    def test_product_subset_over_rationals(self):
        cls = classify(parse("x1*x2"), RATIONAL)
        assert cls.label is ImageLabel.SL2_SUBSET
        assert cls.span_label is SpanLabel.FULL

    def test_s4_central(self):
        cls = classify(parse(S4), FLOAT64)
        assert cls.label is ImageLabel.SCALARS

    def test_s4_all_values_scalar_by_enumeration(self):
        # independent check of centrality: every one of the 256 table values
        # is scalar, and the specific value at (e12,e21,e12,e21) is 2I
        t = unit_table(parse(S4))
        assert all(v.is_scalar() for v in t.values)
        assert t.value_at((1, 2, 1, 2)) == Matrix2.scalar(RATIONAL, 2)

    def test_zero_polynomial(self):
        assert classify(parse("x-x"), FLOAT64).label is ImageLabel.ZERO
        assert classify(parse("0"), FLOAT64).label is ImageLabel.ZERO

    def test_char2_note(self):
        cls = classify(parse("[x,y]"), GF(2))
        assert cls.label is ImageLabel.SL2
        assert cls.char == 2
        assert "char 2" in cls.note

    def test_coefficients_vanish_mod_2(self):
        cls = classify(parse("2*x1*x2"), GF(2))
        assert cls.label is ImageLabel.ZERO

    @settings(max_examples=40)
    @given(multilinear_polys(max_m=3), st.permutations([1, 2, 3]))
    def test_relabeling_invariance(self, p, perm):
        relabeled = make_poly(
            {tuple(perm[v - 1] for v in w): c for w, c in p.terms.items()},
            p.num_vars,
        ) if p.num_vars == 3 else p
        assert classify(relabeled).label is classify(p).label


class TestLocateOffdiagonal:
    def test_commutator(self):
        units, c, pos = locate_offdiagonal(parse("[x,y]"))
        assert (units, c, pos) == ((E11, E12), 1, (1, 2))

    def test_product(self):
        units, c, pos = locate_offdiagonal(parse("x*y"))
        assert (units, c, pos) == ((E11, E12), 1, (1, 2))

    def test_central_has_none(self):
        with pytest.raises(NoOffdiagonalError):
            locate_offdiagonal(parse(S4))

    def test_normalization_recipe(self):
        """Rescaling slot 1 by 1/c (after a chi flip if needed) gives e12."""
        p = parse("2*y*x - 3*x*y")
        units, c, pos = locate_offdiagonal(p)
        inputs = list(chi_flip(units)) if pos == (2, 1) else list(units)
        inputs[0] = inputs[0].scale(1 / c)
        assert evaluate(p, inputs) == E12


class TestChiFlip:
    def test_definition(self):
        assert chi_flip((E11, E12)) == (E22, E21)
        assert chi_flip((E12, E21)) == (E21, E12)

    def test_involution(self):
        tup = (E11, E21, E22)
        assert chi_flip(chi_flip(tup)) == tup

    def test_non_unit_rejected(self):
        with pytest.raises(NonUnitEntryError):
            chi_flip((E11 + E12,))
        with pytest.raises(NonUnitEntryError):
            chi_flip((E11.scale(2),))

    @settings(max_examples=60)
    @given(multilinear_polys(max_m=3), st.data())
    def test_chi_realized_by_sigma_conjugation(self, p, data):
        """p(chi(a)) == sigma * p(a) * sigma on unit tuples, exactly."""
        units = [Matrix2.unit(RATIONAL, i, j) for i in (1, 2) for j in (1, 2)]
        tup = tuple(
            data.draw(st.sampled_from(units)) for _ in range(p.num_vars)
        )
        lhs = evaluate(p, chi_flip(tup))
        rhs = conjugate(evaluate(p, tup), SIGMA)
        assert lhs == rhs


class TestShapeConstraint:
    @settings(max_examples=120)
    @given(multilinear_polys(max_m=4))
    def test_values_are_zero_offdiagonal_or_diagonal(self, p):
        """Table construction itself asserts the shape; spot-check it too."""
        t = unit_table(p)
        for v in t.values:
            offdiag = v.a11 == 0 and v.a22 == 0 and (v.a12 == 0 or v.a21 == 0)
            diag = v.a12 == 0 and v.a21 == 0
            assert offdiag or diag

    @settings(max_examples=60)
    @given(multilinear_polys(max_m=3), st.data())
    def test_conjugated_witness_stays_witnessed(self, p, data):
        """Image membership is conjugation-invariant: conjugating every
        input realizes the conjugated value."""
        from conftest import invertible_rational_matrices

        units = [Matrix2.unit(RATIONAL, i, j) for i in (1, 2) for j in (1, 2)]
        tup = tuple(data.draw(st.sampled_from(units)) for _ in range(p.num_vars))
        q = data.draw(invertible_rational_matrices())
        value = evaluate(p, tup)
        conj_inputs = tuple(conjugate(x, q) for x in tup)
        assert evaluate(p, conj_inputs) == conjugate(value, q)
