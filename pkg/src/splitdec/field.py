"""Exact scalar arithmetic in Q(q) with q^2 = b.

A :class:`GroundField` fixes a nonzero integer ``b`` and a choice of root
``qsign`` (+1 or -1).  Scalars are pairs ``a0 + a1*q`` of arbitrary-precision
rationals.  When ``b`` is a perfect square the extension collapses:
``q = qsign*sqrt(b)`` is rational, the field runs in *rational mode*, and the
pair representation is forbidden (``a1`` is always folded away) because
Q[t]/(t^2 - b) has zero divisors for square ``b``.  Otherwise the field runs
in *quadratic mode* and pairs form the genuine quadratic field.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt

from .errors import CalledInRationalMode, DivideByZero, FieldMismatch, ScalarParseError

RATIONAL = "rational"
QUADRATIC = "quadratic"

_FractionTypes = (int, Fraction)

_RAT = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"(?P<a0>{_RAT})?(?P<qterm>(?P<sign>[+-])?(?:(?P<coef>\d+(?:/\d+)?)\*)?r)?"
)


def _perfect_root(b: int):
    if b > 0:
        r = isqrt(b)
        if r * r == b:
            return r
    return None


class GroundField:
    """Arithmetic context for scalars over Q(q), q^2 = b."""

    __slots__ = ("b", "qsign", "mode", "_rat_root", "zero", "one", "q")

    def __init__(self, b: int, qsign: int = 1):
        b = int(b)
        if b == 0:
            raise ValueError("b must be a nonzero integer")
        if qsign not in (1, -1):
            raise ValueError("qsign must be +1 or -1")
        self.b = b
        self.qsign = qsign
        root = _perfect_root(b)
        if root is None:
            self.mode = QUADRATIC
            self._rat_root = None
        else:
            self.mode = RATIONAL
            self._rat_root = Fraction(qsign * root)
        self.zero = Scalar(self, Fraction(0), Fraction(0))
        self.one = Scalar(self, Fraction(1), Fraction(0))
        self.q = self.qpow(1)

    # -- construction ------------------------------------------------------

    def scalar(self, a0, a1=0) -> "Scalar":
        """Build a scalar a0 + a1*q, folding a1 in rational mode."""
        a0 = Fraction(a0)
        a1 = Fraction(a1)
        if self.mode == RATIONAL and a1:
            a0, a1 = a0 + a1 * self._rat_root, Fraction(0)
        return Scalar(self, a0, a1)

    def qpow(self, n: int) -> "Scalar":
        """q**n for any integer n (negative allowed)."""
        n = int(n)
        if self.mode == RATIONAL:
            return self.scalar(self._rat_root ** n)
        k, odd = divmod(n, 2)
        base = Fraction(self.b) ** k
        if odd:
            return Scalar(self, Fraction(0), base)
        return Scalar(self, base, Fraction(0))

    def flip_qsign(self) -> "GroundField":
        return GroundField(self.b, -self.qsign)

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, GroundField)
            and self.b == other.b
            and self.qsign == other.qsign
        )

    def __hash__(self):
        return hash((self.b, self.qsign))

    def __repr__(self):
        return f"GroundField(b={self.b}, qsign={self.qsign:+d})"

    def same_arithmetic(self, other: "GroundField") -> bool:
        """True when scalars interoperate (b equal; qsign may differ only
        in how values embed into C, not in the pair arithmetic)."""
        return isinstance(other, GroundField) and self.b == other.b

    # -- parsing -----------------------------------------------------------

    def parse_scalar(self, text: str) -> "Scalar":
        """Inverse of :meth:`Scalar.encode`; also accepts the short forms
        ``r``, ``-r``, ``2*r``, ``1+r`` and the like."""
        text = text.strip()
        m = _SCALAR_RE.fullmatch(text)
        if m is None or (m.group("a0") is None and m.group("qterm") is None):
            raise ScalarParseError(f"malformed scalar {text!r}")
        if m.group("a0") is not None and m.group("qterm") and not m.group("sign"):
            raise ScalarParseError(f"malformed scalar {text!r}")  # e.g. "1r"
        try:
            a0 = Fraction(m.group("a0")) if m.group("a0") is not None else Fraction(0)
            if m.group("qterm"):
                a1 = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
                if m.group("sign") == "-":
                    a1 = -a1
            else:
                a1 = Fraction(0)
        except (ValueError, ZeroDivisionError) as exc:
            raise ScalarParseError(f"malformed scalar {text!r}") from exc
        if a1 and self.mode == RATIONAL:
            raise ScalarParseError(
                f"scalar {text!r} has a q-part but field b={self.b} is rational"
            )
        return Scalar(self, a0, a1)


class Scalar:
    """Immutable element a0 + a1*q of a :class:`GroundField`."""

    __slots__ = ("field", "a0", "a1")

    def __init__(self, field: GroundField, a0: Fraction, a1: Fraction):
        self.field = field
        self.a0 = a0
        self.a1 = a1

    # -- helpers -----------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, _FractionTypes):
            return Scalar(self.field, Fraction(other), Fraction(0))
        return None

    @property
    def is_zero(self) -> bool:
        return not self.a0 and not self.a1

    @property
    def is_rational(self) -> bool:
        return not self.a1

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Scalar(self.field, self.a0 + o.a0, self.a1 + o.a1)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, -self.a0, -self.a1)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Scalar(self.field, self.a0 - o.a0, self.a1 - o.a1)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Scalar(self.field, o.a0 - self.a0, o.a1 - self.a1)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.a1 and not o.a1:
            return Scalar(self.field, self.a0 * o.a0, Fraction(0))
        return Scalar(
            self.field,
            self.a0 * o.a0 + self.field.b * self.a1 * o.a1,
            self.a0 * o.a1 + self.a1 * o.a0,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero:
            raise DivideByZero("scalar inverse of 0")
        if not self.a1:
            return Scalar(self.field, 1 / self.a0, Fraction(0))
        # 1/(a0 + a1 q) = (a0 - a1 q) / (a0^2 - b a1^2); norm != 0 since b is
        # not a square in quadratic mode.
        norm = self.a0 * self.a0 - self.field.b * self.a1 * self.a1
        return Scalar(self.field, self.a0 / norm, -self.a1 / norm)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- involutions -------------------------------------------------------

    def conj(self) -> "Scalar":
        """Complex conjugation: identity for b > 0, negates a1 for b < 0."""
        if self.field.b > 0:
            return self
        return Scalar(self.field, self.a0, -self.a1)

    def sigma(self) -> "Scalar":
        """The field automorphism q -> -q (quadratic mode only)."""
        if self.field.mode == RATIONAL:
            raise CalledInRationalMode("sigma is undefined in rational mode")
        return Scalar(self.field, self.a0, -self.a1)

    # -- real structure ----------------------------------------------------

    @property
    def is_real(self) -> bool:
        return self.field.b > 0 or not self.a1

    def real_sign(self) -> int:
        """Exact sign of the real value of this scalar (requires is_real)."""
        if not self.is_real:
            raise ValueError("sign of a non-real scalar")
        if not self.a1:
            a = self.a0
            return (a > 0) - (a < 0)
        # value = a0 + a1 * qsign * sqrt(b), b > 0 non-square
        a0 = self.a0
        a1 = self.a1 * self.field.qsign
        if a0 >= 0 and a1 >= 0:
            return 1 if (a0 or a1) else 0
        if a0 <= 0 and a1 <= 0:
            return -1
        lead = 1 if a1 > 0 else -1  # sign of the irrational part
        cmp = a1 * a1 * self.field.b - a0 * a0
        if cmp > 0:
            return lead
        if cmp < 0:
            return -lead
        return 0  # impossible for non-square b unless both parts are 0

    def __float__(self):
        return float(self.to_complex().real)

    def to_complex(self) -> complex:
        b = self.field.b
        if b > 0:
            root = self.field.qsign * (b ** 0.5)
            return complex(float(self.a0) + float(self.a1) * root, 0.0)
        root = self.field.qsign * ((-b) ** 0.5)
        return complex(float(self.a0), float(self.a1) * root)

    # -- identity / text ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, _FractionTypes):
            return not self.a1 and self.a0 == other
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return self.a0 == other.a0 and self.a1 == other.a1

    def __hash__(self):
        if not self.a1:
            return hash(self.a0)
        return hash((self.a0, self.a1, self.field.b))

    def __bool__(self):
        return not self.is_zero

    def encode(self) -> str:
        """Textual form: ``a0``, ``a0+a1*r`` or ``a0-a1*r`` with rational
        coefficients printed as ``p/q`` (``/q`` omitted for integers)."""
        if not self.a1:
            return _enc_frac(self.a0)
        sign = "+" if self.a1 > 0 else "-"
        return f"{_enc_frac(self.a0)}{sign}{_enc_frac(abs(self.a1))}*r"

    def __repr__(self):
        return self.encode()


def _enc_frac(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_scalar(field: GroundField, value) -> Scalar:
    """Coerce ints/Fractions/Scalars of the same field into a Scalar."""
    if isinstance(value, Scalar):
        if value.field != field:
            raise FieldMismatch(f"{field} vs {value.field}")
        return value
    return field.scalar(value)


def embed(field: GroundField, value) -> Scalar:
    """Embed a scalar (or plain rational) into ``field`` when arithmetic allows.

    Rational values embed anywhere; quadratic scalars embed only into a field
    with the same b and qsign.
    """
    if not isinstance(value, Scalar):
        return field.scalar(value)
    if value.field == field:
        return value
    if value.is_rational:
        return field.scalar(value.a0)
    raise FieldMismatch(f"cannot embed {value!r} from {value.field} into {field}")
