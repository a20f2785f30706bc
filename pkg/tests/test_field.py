"""
Tests for multmaps.field: exact Q / Q(√d) arithmetic, the scalar grammar and
the ring homs.
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multmaps.errors import DivisionByZero, FieldMismatch, ParseError, ProbeMiss, UnregisteredHom
from multmaps.field import (
    CONJUGATION,
    IDENTITY,
    QQ,
    FieldDescriptor,
    RingHom,
    compose_homs,
    format_scalar,
    hom_apply,
    hom_check,
    parse_scalar,
    recognize_hom,
)

pytestmark = pytest.mark.unit

Q2 = FieldDescriptor.quadratic(2)

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10**6)
q2_elems = st.builds(Q2, fractions, fractions)


@settings(max_examples=200)
@given(q2_elems, q2_elems, q2_elems)
def test_field_axioms_in_q_sqrt2(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x


@given(q2_elems)
def test_nonzero_elements_invert(x):
    if x.is_zero:
        with pytest.raises(DivisionByZero):
            x.inv()
    else:
        assert x * x.inv() == 1


@given(q2_elems, q2_elems)
def test_conjugation_is_a_ring_hom(x, y):
    assert (x + y).conjugate() == x.conjugate() + y.conjugate()
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()


def test_sqrt_d_squares_to_d():
    s = Q2.sqrt_d
    assert s * s == 2
    assert (Q2(1, 1) * Q2(1, -1)) == -1


def test_quadratic_inverse_example():
    assert Q2(1, 1).inv() == Q2(-1, 1)


def test_rational_field_has_no_sqrt():
    with pytest.raises(FieldMismatch):
        QQ.sqrt_d
    with pytest.raises(FieldMismatch):
        QQ(1, 1)


@pytest.mark.parametrize('d', [0, 1, 4, 12, -9])
def test_non_squarefree_d_rejected(d):
    with pytest.raises(FieldMismatch):
        FieldDescriptor.quadratic(d)


def test_mixing_fields_raises():
    with pytest.raises(FieldMismatch):
        QQ(1) + Q2(1)


def test_powers():
    x = QQ(2)
    assert x ** 10 == 1024
    assert x ** -2 == Fraction(1, 4)
    assert x ** 0 == 1


class TestScalarGrammar:

    @pytest.mark.parametrize('text, a, b', [
        ('3/4', Fraction(3, 4), 0),
        ('-7', -7, 0),
        ('1/2-5/3*s', Fraction(1, 2), Fraction(-5, 3)),
        ('0+1*s', 0, 1),
    ])
    def test_parses(self, text, a, b):
        fd = Q2 if b else QQ
        x = parse_scalar(text, fd)
        assert (x.a, x.b) == (a, b)

    def test_format_matches_grammar(self):
        assert format_scalar(Q2(Fraction(1, 2), Fraction(-5, 3))) == '1/2-5/3*s'
        assert format_scalar(QQ(Fraction(-6, 4))) == '-3/2'
        assert format_scalar(Q2(0, 1)) == '0+1*s'

    def test_zero_denominator_reports_position(self):
        with pytest.raises(ParseError) as exc_info:
            parse_scalar('1/0', QQ)
        assert exc_info.value.position == 2

    @pytest.mark.parametrize('text', ['', 'abc', '1 /2', '1+2', '1+2*t', '--1'])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_scalar(text, Q2)

    def test_sqrt_part_rejected_over_q(self):
        with pytest.raises(ParseError):
            parse_scalar('1+1*s', QQ)

    @given(q2_elems)
    def test_format_then_parse_is_identity(self, x):
        assert parse_scalar(format_scalar(x), Q2) == x


class TestRingHoms:

    def test_identity_and_conjugation(self):
        x = Q2(3, -2)
        assert hom_apply(IDENTITY, x) == x
        assert hom_apply(CONJUGATION, x) == Q2(3, 2)

    def test_conjugation_over_q_is_a_mismatch(self):
        with pytest.raises(FieldMismatch):
            hom_apply(CONJUGATION, QQ(3))

    def test_sampled_lookup_and_one_level_decomposition(self):
        h = RingHom.sampled([(QQ(1), QQ(1)), (QQ(2), QQ(2))])
        assert hom_apply(h, QQ(2)) == 2
        assert hom_apply(h, QQ(0)) == 0
        assert hom_apply(h, QQ(3)) == 3   # 1 + 2
        assert hom_apply(h, QQ(4)) == 4   # 2 · 2
        with pytest.raises(ProbeMiss):
            hom_apply(h, QQ(7))

    def test_hom_check_accepts_registered(self):
        samples = [(Q2(1, 1), Q2(2)), (Q2(3), Q2(0, 1))]
        assert hom_check(IDENTITY, samples)
        assert hom_check(CONJUGATION, samples)

    def test_hom_check_rejects_corrupted_table(self):
        table = [(QQ(1), QQ(1)), (QQ(2), QQ(3)), (QQ(4), QQ(4))]
        assert not hom_check(RingHom.sampled(table), [(QQ(2), QQ(2))])

    def test_recognize_registered(self):
        table = [(Q2(0, 1), Q2(0, -1)), (Q2(2), Q2(2))]
        assert recognize_hom(table, Q2) == CONJUGATION
        assert recognize_hom([(QQ(2), QQ(2))], QQ) == IDENTITY

    def test_recognize_falls_back_to_sampled(self):
        h = recognize_hom([(QQ(2), QQ(3))], QQ)
        assert not h.is_registered

    def test_compose(self):
        assert compose_homs(CONJUGATION, CONJUGATION) == IDENTITY
        assert compose_homs(IDENTITY, CONJUGATION) == CONJUGATION
        with pytest.raises(UnregisteredHom):
            compose_homs(RingHom.sampled([]), IDENTITY)
