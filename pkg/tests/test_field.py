"""Scalar arithmetic in Q(q) with q^2 = b: frozen-value oracles and laws."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitdec.errors import (
    CalledInRationalMode,
    DivideByZero,
    FieldMismatch,
    ScalarParseError,
)
from splitdec.field import QUADRATIC, RATIONAL, GroundField, Scalar, as_scalar, embed

F2 = GroundField(2)
Fm2 = GroundField(-2)
F9 = GroundField(9)


class TestFrozenValues:
    """Hand-derived values at b = 2, frozen as literals."""

    def test_inverse_of_q(self):
        # 1/q = q/b = q/2
        assert 1 / F2.q == F2.scalar(0, Fraction(1, 2))

    def test_difference_of_squares(self):
        # (1+q)(1-q) = 1 - q^2 = 1 - 2 = -1
        assert (1 + F2.q) * (1 - F2.q) == -1

    def test_qpow_table(self):
        # q^0..q^5 = 1, q, 2, 2q, 4, 4q ; q^-1 = q/2, q^-2 = 1/2
        want = [(1, 0), (0, 1), (2, 0), (0, 2), (4, 0), (0, 4)]
        for n, (a0, a1) in enumerate(want):
            assert F2.qpow(n) == F2.scalar(a0, a1), n
        assert F2.qpow(-1) == F2.scalar(0, Fraction(1, 2))
        assert F2.qpow(-2) == F2.scalar(Fraction(1, 2), 0)

    def test_gauss_number_three(self):
        # q^2 + 1 + q^-2 = 2 + 1 + 1/2 = 7/2
        q = F2.q
        assert q ** 2 + 1 + q ** -2 == Fraction(7, 2)

    def test_division_general(self):
        # (3 + q)/(1 - q): multiply by conjugate (1+q)/(1+q): denom 1-2 = -1
        # (3+q)(1+q) = 3 + 4q + q^2 = 5 + 4q  =>  -(5 + 4q)
        got = (3 + F2.q) / (1 - F2.q)
        assert got == F2.scalar(-5, -4)

    def test_real_sign_exact(self):
        # 3/4 - q/2 at q = +sqrt(2): 0.75 - 0.707.. > 0
        assert F2.scalar(Fraction(3, 4), Fraction(-1, 2)).real_sign() == 1
        # 2/3 - q/2: 0.666.. - 0.707.. < 0
        assert F2.scalar(Fraction(2, 3), Fraction(-1, 2)).real_sign() == -1
        # sign flips with qsign
        Fneg = GroundField(2, qsign=-1)
        assert Fneg.scalar(Fraction(2, 3), Fraction(-1, 2)).real_sign() == 1
        assert F2.scalar(0, 0).real_sign() == 0


class TestModes:
    def test_rational_mode_folds_root(self):
        assert F9.mode == RATIONAL
        assert F9.scalar(0, 1) == 3
        assert F9.qpow(3) == 27
        assert GroundField(9, qsign=-1).scalar(0, 1) == -3
        assert GroundField(1).q == 1
        assert GroundField(4).qpow(-1) == Fraction(1, 2)

    def test_quadratic_modes(self):
        assert F2.mode == QUADRATIC
        assert Fm2.mode == QUADRATIC
        assert GroundField(-1).mode == QUADRATIC
        assert GroundField(-4).mode == QUADRATIC  # negative: never a square
        assert GroundField(12).mode == QUADRATIC

    def test_b_zero_rejected(self):
        with pytest.raises(ValueError):
            GroundField(0)

    def test_conjugation(self):
        # b > 0: q is real, conjugation is the identity
        s = F2.scalar(1, 2)
        assert s.conj() == s
        # b < 0: q is imaginary, conjugation negates the q-part
        t = Fm2.scalar(1, 2)
        assert t.conj() == Fm2.scalar(1, -2)
        assert (t * t.conj()).is_rational

    def test_sigma_quadratic_only(self):
        s = F2.scalar(1, 2)
        assert s.sigma() == F2.scalar(1, -2)
        with pytest.raises(CalledInRationalMode):
            F9.scalar(5).sigma()

    def test_complex_embedding(self):
        import math

        s = F2.scalar(1, 2)
        assert abs(s.to_complex() - (1 + 2 * math.sqrt(2))) < 1e-12
        t = Fm2.scalar(1, 2)
        z = t.to_complex()
        assert abs(z.real - 1) < 1e-12 and abs(z.imag - 2 * math.sqrt(2)) < 1e-12
        assert not t.is_real and s.is_real


class TestRing:
    def test_divide_by_zero(self):
        with pytest.raises(DivideByZero):
            F2.one / F2.scalar(0)
        # DivideByZero is a ZeroDivisionError
        with pytest.raises(ZeroDivisionError):
            F2.one / F2.scalar(0)

    def test_field_mismatch(self):
        with pytest.raises(FieldMismatch):
            F2.q + Fm2.q
        with pytest.raises(FieldMismatch):
            F2.q == Fm2.q

    def test_embed(self):
        assert embed(F2, Fraction(1, 3)) == F2.scalar(Fraction(1, 3))
        with pytest.raises(FieldMismatch):
            embed(Fm2, F2.q)
        assert embed(Fm2, F2.scalar(7)) == Fm2.scalar(7)

    def test_power(self):
        q = F2.q
        assert q ** 10 == 32
        assert (1 + q) ** 2 == F2.scalar(3, 2)
        assert (1 + q) ** -1 == (1 + q) ** 0 / (1 + q)

    def test_hash_matches_rational(self):
        assert hash(F2.scalar(Fraction(3, 2))) == hash(Fraction(3, 2))
        d = {F2.scalar(2): "x"}
        assert d[F2.scalar(2)] == "x"


class TestEncodeParse:
    @pytest.mark.parametrize(
        "text,a0,a1",
        [
            ("0", 0, 0),
            ("5", 5, 0),
            ("-7/3", Fraction(-7, 3), 0),
            ("r", 0, 1),
            ("-r", 0, -1),
            ("2*r", 0, 2),
            ("1+r", 1, 1),
            ("1-2/3*r", 1, Fraction(-2, 3)),
            ("-1/2+5*r", Fraction(-1, 2), 5),
        ],
    )
    def test_parse(self, text, a0, a1):
        assert F2.parse_scalar(text) == F2.scalar(a0, a1)

    def test_roundtrip(self):
        vals = [F2.scalar(0), F2.scalar(-3, 2), F2.scalar(Fraction(1, 7), Fraction(-5, 3))]
        for s in vals:
            assert F2.parse_scalar(s.encode()) == s

    def test_rational_mode_rejects_root(self):
        with pytest.raises(ScalarParseError):
            F9.parse_scalar("1+2*r")

    @pytest.mark.parametrize("bad", ["", "1++2", "r*2", "1 + r2", "x", "1/0"])
    def test_malformed(self, bad):
        with pytest.raises(ScalarParseError):
            F2.parse_scalar(bad)


@st.composite
def scalars(draw, field):
    num = st.integers(min_value=-50, max_value=50)
    den = st.integers(min_value=1, max_value=9)
    a0 = Fraction(draw(num), draw(den))
    a1 = Fraction(draw(num), draw(den))
    return field.scalar(a0, a1)


@settings(max_examples=60, deadline=None)
@given(s=scalars(F2), t=scalars(F2), u=scalars(F2))
def test_field_axioms_b2(s, t, u):
    assert (s + t) * u == s * u + t * u
    assert s * t == t * s
    assert (s - t) + t == s
    if not t.is_zero:
        assert (s / t) * t == s
    assert s.sigma().sigma() == s
    assert (s * t).sigma() == s.sigma() * t.sigma()


@settings(max_examples=60, deadline=None)
@given(s=scalars(Fm2), t=scalars(Fm2))
def test_conj_is_ring_hom_bneg(s, t):
    assert (s * t).conj() == s.conj() * t.conj()
    assert (s + t).conj() == s.conj() + t.conj()
    n = s * s.conj()
    assert n.is_rational
    if not s.is_zero:
        assert n.real_sign() == 1  # positive-definite norm for b < 0


@settings(max_examples=40, deadline=None)
@given(s=scalars(F2))
def test_encode_parse_roundtrip_prop(s):
    assert F2.parse_scalar(s.encode()) == s


def test_as_scalar_coercions():
    assert as_scalar(F2, 3) == F2.scalar(3)
    assert as_scalar(F2, Fraction(1, 2)) == F2.scalar(Fraction(1, 2))
    s = F2.scalar(1, 1)
    assert as_scalar(F2, s) is s
