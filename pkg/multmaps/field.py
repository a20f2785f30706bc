"""
Exact scalars for Q and quadratic fields Q(√d), plus the ring homomorphisms
we can represent on them.

√d is never approximated: an element of Q(√d) is the pair (a, b) of
Fractions standing for a + b·√d, so equality is componentwise and every
operation is exact. Elements of Q use the same class with b fixed at 0.

Only Identity and QuadConjugation are ever *applied* when evaluating maps.
Sampled homs exist so the classifier can report a probe table it could not
match against those two.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import DivisionByZero, FieldMismatch, ParseError, ProbeMiss, UnregisteredHom


class FieldKind(Enum):
    RATIONAL = 'rational'
    QUADRATIC = 'quadratic'


def is_squarefree(d):
    d = abs(d)
    i = 2
    while i * i <= d:
        if d % (i * i) == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldDescriptor:
    kind: FieldKind
    d: int | None = None

    def __post_init__(self):
        if self.kind is FieldKind.RATIONAL:
            if self.d is not None:
                raise FieldMismatch("rational field takes no d")
            return
        if not isinstance(self.d, int) or self.d in (0, 1) or not is_squarefree(self.d):
            raise FieldMismatch(f"d must be a squarefree integer other than 0 and 1, got {self.d!r}")

    @classmethod
    def rational(cls):
        return cls(FieldKind.RATIONAL)

    @classmethod
    def quadratic(cls, d):
        return cls(FieldKind.QUADRATIC, d)

    @property
    def is_quadratic(self):
        return self.kind is FieldKind.QUADRATIC

    def __call__(self, a=0, b=0):
        """Build an element of this field: fd(1, 2) is 1 + 2√d."""
        return FieldElem(self, a, b)

    @property
    def zero(self):
        return FieldElem(self, 0)

    @property
    def one(self):
        return FieldElem(self, 1)

    @property
    def sqrt_d(self):
        if not self.is_quadratic:
            raise FieldMismatch("√d only exists in a quadratic field")
        return FieldElem(self, 0, 1)

    def __str__(self):
        return 'rational' if not self.is_quadratic else f'quadratic:{self.d}'


QQ = FieldDescriptor.rational()


@dataclass(frozen=True, eq=False)
class FieldElem:
    fd: FieldDescriptor
    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        a, b = Fraction(self.a), Fraction(self.b)
        if b and not self.fd.is_quadratic:
            raise FieldMismatch("a rational element cannot carry a √d part")
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.fd != self.fd:
                raise FieldMismatch(f"cannot mix {self.fd} and {other.fd}")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.fd, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FieldElem(self.fd, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.fd, -self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FieldElem(self.fd, self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.fd.is_quadratic:
            return FieldElem(self.fd, self.a * other.a)
        d = self.fd.d
        return FieldElem(
            self.fd,
            self.a * other.a + d * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def norm(self):
        """a² − d·b², zero only for the zero element since d is not a square."""
        if not self.fd.is_quadratic:
            return self.a * self.a
        return self.a * self.a - self.fd.d * self.b * self.b

    def conjugate(self):
        return FieldElem(self.fd, self.a, -self.b)

    def inv(self):
        if self.is_zero:
            raise DivisionByZero("inverse of zero")
        if not self.fd.is_quadratic:
            return FieldElem(self.fd, 1 / self.a)
        n = self.norm()
        return FieldElem(self.fd, self.a / n, -self.b / n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inv() ** -exponent
        result = self.fd.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    @property
    def is_zero(self):
        return not self.a and not self.b

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.fd == other.fd and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash(self.a) if not self.b else hash((self.a, self.b))

    def __repr__(self):
        return f"FieldElem({format_scalar(self)!r}, {self.fd})"

    def __str__(self):
        return format_scalar(self)


def coerce_scalar(value, fd):
    """int, Fraction, scalar string or FieldElem -> FieldElem of fd."""
    if isinstance(value, FieldElem):
        if value.fd != fd:
            raise FieldMismatch(f"cannot mix {value.fd} and {fd}")
        return value
    if isinstance(value, str):
        return parse_scalar(value, fd)
    if isinstance(value, (int, Fraction)):
        return FieldElem(fd, value)
    raise TypeError(f"cannot turn {type(value).__name__} into a field element")


# Scalar grammar:
#   rational  := '-'? digits ('/' nonzero-digits)?
#   quadratic := rational (('+'|'-') rational '*s')?
_RATIONAL = re.compile(r'-?([0-9]+)(?:/([0-9]+))?')


def _match_rational(text, pos):
    m = _RATIONAL.match(text, pos)
    if m is None:
        raise ParseError("expected a rational number", pos, text)
    if m.group(2) is not None and int(m.group(2)) == 0:
        raise ParseError("zero denominator", m.start(2), text)
    return Fraction(m.group(0)), m.end()


def parse_scalar(text, fd):
    a, pos = _match_rational(text, 0)
    if pos == len(text):
        return FieldElem(fd, a)
    if not fd.is_quadratic:
        raise ParseError("unexpected character in rational scalar", pos, text)
    sign = text[pos]
    if sign not in '+-':
        raise ParseError("expected '+' or '-' before the √d part", pos, text)
    b, pos = _match_rational(text, pos + 1)
    if text[pos:] != '*s':
        raise ParseError("expected '*s' closing the √d part", pos, text)
    return FieldElem(fd, a, b if sign == '+' else -b)


def _format_fraction(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x):
    head = _format_fraction(x.a)
    if not x.b:
        return head
    sign = '+' if x.b > 0 else '-'
    return f"{head}{sign}{_format_fraction(abs(x.b))}*s"


class HomTag(Enum):
    IDENTITY = 'id'
    QUAD_CONJUGATION = 'conj'
    SAMPLED = 'sampled'


@dataclass(frozen=True)
class RingHom:
    tag: HomTag
    table: tuple = field(default=(), compare=True)

    @classmethod
    def identity(cls):
        return cls(HomTag.IDENTITY)

    @classmethod
    def conjugation(cls):
        return cls(HomTag.QUAD_CONJUGATION)

    @classmethod
    def sampled(cls, pairs):
        return cls(HomTag.SAMPLED, tuple((x, y) for x, y in pairs))

    @property
    def is_registered(self):
        return self.tag is not HomTag.SAMPLED

    @property
    def sort_key(self):
        order = {HomTag.IDENTITY: 0, HomTag.QUAD_CONJUGATION: 1, HomTag.SAMPLED: 2}
        return (order[self.tag], tuple((str(x), str(y)) for x, y in self.table))

    def __call__(self, x):
        return hom_apply(self, x)

    def __str__(self):
        return self.tag.value


IDENTITY = RingHom.identity()
CONJUGATION = RingHom.conjugation()


def _lookup(h, x):
    for probe, image in h.table:
        if probe == x:
            return image
    return None


def hom_apply(h, x):
    if h.tag is HomTag.IDENTITY:
        return x
    if h.tag is HomTag.QUAD_CONJUGATION:
        if not x.fd.is_quadratic:
            raise FieldMismatch("Galois conjugation needs a quadratic field")
        return x.conjugate()
    image = _lookup(h, x)
    if image is not None:
        return image
    if x.is_zero:
        return x
    # one level of decomposition through tabulated probes
    for u, hu in h.table:
        for v, hv in h.table:
            if u + v == x:
                return hu + hv
            if u * v == x:
                return hu * hv
    raise ProbeMiss(f"sampled hom has no value at {x}")


def hom_check(h, samples):
    """True iff h is additive, multiplicative and unital on every sampled pair.

    For sampled homs only tabulated values take part; pairs whose sum or
    product is off-table are not evidence either way.
    """
    def value(x):
        if h.tag is HomTag.SAMPLED:
            return _lookup(h, x)
        try:
            return hom_apply(h, x)
        except FieldMismatch:
            return None

    if h.tag is HomTag.QUAD_CONJUGATION and any(not x.fd.is_quadratic for pair in samples for x in pair):
        return False
    for x, y in samples:
        one = x.fd.one
        h_one = value(one)
        if h_one is not None and h_one != one:
            return False
        hx, hy = value(x), value(y)
        if hx is None or hy is None:
            continue
        h_sum, h_prod = value(x + y), value(x * y)
        if h_sum is not None and h_sum != hx + hy:
            return False
        if h_prod is not None and h_prod != hx * hy:
            return False
    return True


def registered_homs(fd):
    return [IDENTITY, CONJUGATION] if fd.is_quadratic else [IDENTITY]


def recognize_hom(table, fd):
    """Match a probe table against Identity / QuadConjugation, else keep it sampled."""
    table = tuple(table)
    for candidate in registered_homs(fd):
        if all(hom_apply(candidate, x) == y for x, y in table):
            return candidate
    return RingHom.sampled(table)


def compose_homs(f, g):
    """f∘g for registered homs."""
    if not (f.is_registered and g.is_registered):
        raise UnregisteredHom("composition involving a sampled hom is not representable")
    if f.tag is HomTag.IDENTITY:
        return g
    if g.tag is HomTag.IDENTITY:
        return f
    return IDENTITY
