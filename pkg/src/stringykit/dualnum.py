"""Dual rationals a + b*eps with eps^2 = 0: exact first-order derivatives.

Threading these scalars through the generic linear algebra turns every
derivative of a connection matrix entry into an exact rational, so
flatness identities become decidable at each rational base point.
"""

from fractions import Fraction


def _coerce(x):
    if isinstance(x, DualRational):
        return x
    if isinstance(x, (int, Fraction)):
        return DualRational(Fraction(x), Fraction(0))
    return NotImplemented


class DualRational:
    __slots__ = ("value", "deriv")

    def __init__(self, value, deriv=0):
        self.value = Fraction(value)
        self.deriv = Fraction(deriv)

    @classmethod
    def variable(cls, value):
        """The coordinate being differentiated: value + eps."""
        return cls(value, 1)

    @property
    def is_unit(self):
        return self.value != 0

    def inverse(self):
        if not self.value:
            raise ZeroDivisionError("dual number with zero value part")
        iv = 1 / self.value
        return DualRational(iv, -self.deriv * iv * iv)

    def __bool__(self):
        return bool(self.value) or bool(self.deriv)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.value == other.value and self.deriv == other.deriv

    def __hash__(self):
        return hash((self.value, self.deriv))

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return DualRational(self.value + other.value, self.deriv + other.deriv)

    __radd__ = __add__

    def __neg__(self):
        return DualRational(-self.value, -self.deriv)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return DualRational(self.value - other.value, self.deriv - other.deriv)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return DualRational(self.value * other.value,
                            self.value * other.deriv + self.deriv * other.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __repr__(self):
        return "DualRational(%s, %s)" % (self.value, self.deriv)
