"""Rational functions: canonically reduced quotients of multivariate polynomials.

Invariants: the denominator is nonzero, gcd(num, den) = 1, and the denominator
is in canonical form (integer content 1, positive leading coefficient); the
denominator's normalization scalar is absorbed into the numerator.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import MultiPoly, poly_div_exact, poly_gcd
from .scalars import Quad, scalar_inverse


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, *, _reduced=False):
        if den is None:
            den = MultiPoly.const(num.vars, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num = num
            self.den = MultiPoly.const(num.vars, 1)
            return
        if not _reduced:
            g = poly_gcd(num, den)
            if not g.is_const():
                num = poly_div_exact(num, g)
                den = poly_div_exact(den, g)
        c, den = den.canonical()
        if c != 1:
            num = num * scalar_inverse(c)
        self.num = num
        self.den = den

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_scalar(cls, vars, c):
        return cls(MultiPoly.const(vars, c))

    @classmethod
    def from_poly(cls, p: MultiPoly):
        return cls(p)

    @classmethod
    def var(cls, vars, name):
        return cls(MultiPoly.var(vars, name))

    @property
    def vars(self):
        return self.num.vars

    # -- queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        return self.num.const_value() / self.den.const_value()

    def is_poly(self) -> bool:
        return self.den.is_const()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, Quad, MultiPoly)):
            return self == RatFunc(other if isinstance(other, MultiPoly)
                                   else MultiPoly.const(self.vars, other))
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        return RatFunc(MultiPoly.const(self.vars, other))

    def __add__(self, other):
        other = self._coerce(other)
        g = poly_gcd(self.den, other.den)
        if g.is_const():
            num = self.num * other.den + other.num * self.den
            return RatFunc(num, self.den * other.den)
        d1 = poly_div_exact(self.den, g)
        d2 = poly_div_exact(other.den, g)
        num = self.num * d2 + other.num * d1
        return RatFunc(num, d1 * other.den)

    __radd__ = __add__

    def __neg__(self):
        r = RatFunc.__new__(RatFunc)
        r.num = -self.num
        r.den = self.den
        return r

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        # cross-reduce before multiplying to keep intermediates small
        n1, d2 = self.num, other.den
        g = poly_gcd(n1, d2)
        if not g.is_const():
            n1, d2 = poly_div_exact(n1, g), poly_div_exact(d2, g)
        n2, d1 = other.num, self.den
        g = poly_gcd(n2, d1)
        if not g.is_const():
            n2, d1 = poly_div_exact(n2, g), poly_div_exact(d1, g)
        return RatFunc(n1 * n2, d1 * d2, _reduced=True)

    __rmul__ = __mul__

    def reciprocal(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("reciprocal of zero rational function")
        return RatFunc(self.den, self.num, _reduced=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        r = RatFunc.from_scalar(self.vars, 1)
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base if n > 1 else base
            n >>= 1
        return r

    # -- substitution ----------------------------------------------------------

    def shift(self, var: str, delta) -> "RatFunc":
        return RatFunc(self.num.shift(var, delta), self.den.shift(var, delta))

    def subst_scalar(self, var: str, value) -> "RatFunc":
        return RatFunc(self.num.subst_scalar(var, value),
                       self.den.subst_scalar(var, value))

    def eval_all(self, assignment: dict):
        d = self.den.eval_all(assignment)
        if not d:
            raise ZeroDivisionError(f"denominator {self.den} vanishes")
        return self.num.eval_all(assignment) / d

    # -- rendering --------------------------------------------------------------

    def __str__(self):
        if self.den.is_const() and self.den.const_value() == 1:
            return str(self.num)
        num = str(self.num)
        if len(self.num) > 1:
            num = f"({num})"
        den = str(self.den)
        if len(self.den) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RatFunc({self})"


def ratfunc_arith(r: RatFunc, s: RatFunc, op: str) -> RatFunc:
    """Named add/sub/mul/div entry point."""
    if op == "add":
        return r + s
    if op == "sub":
        return r - s
    if op == "mul":
        return r * s
    if op == "div":
        return r / s
    raise ValueError(f"unknown op {op!r}")
