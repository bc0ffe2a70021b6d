"""Exact scalar arithmetic: rationals and one quadratic extension Q(sqrt(d)).

Scalars are plain ``int``/``Fraction`` values or :class:`Quad` elements
``u + v*sqrt(d)`` with rational u, v and a squarefree integer d >= 2.  All
arithmetic is exact; mixing two different radicands in one computation is an
error (one extension at a time).
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd, isqrt

Rational = (int, Fraction)


class ScalarError(ArithmeticError):
    """Illegal scalar operation (mixed radicands, negative radicand, ...)."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


class Quad:
    """u + v*sqrt(d) with u, v rational and d a squarefree integer >= 2."""

    __slots__ = ("u", "v", "d")

    def __init__(self, u, v, d: int):
        if d < 2 or not is_squarefree(d):
            raise ScalarError(f"radicand must be squarefree and >= 2, got {d}")
        self.u = _frac(u)
        self.v = _frac(v)
        self.d = d

    def __repr__(self):
        return f"Quad({self.u}, {self.v}, {self.d})"

    def __str__(self):
        return render_scalar(self)

    def conj(self) -> "Quad":
        return Quad(self.u, -self.v, self.d)

    def norm(self) -> Fraction:
        """Field norm u^2 - d*v^2 (product with the conjugate)."""
        return self.u * self.u - self.d * self.v * self.v

    def __eq__(self, other):
        if isinstance(other, Quad):
            return self.d == other.d and self.u == other.u and self.v == other.v
        if isinstance(other, Rational):
            return self.v == 0 and self.u == other
        return NotImplemented

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.u, self.v, self.d))

    def __bool__(self):
        return bool(self.u) or bool(self.v)

    def __neg__(self):
        return Quad(-self.u, -self.v, self.d)

    def __add__(self, other):
        if isinstance(other, Quad):
            if other.d != self.d:
                raise ScalarError(f"mixed radicands {self.d} and {other.d}")
            return make_quad(self.u + other.u, self.v + other.v, self.d)
        if isinstance(other, Rational):
            return Quad(self.u + other, self.v, self.d)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Quad):
            if other.d != self.d:
                raise ScalarError(f"mixed radicands {self.d} and {other.d}")
            return make_quad(
                self.u * other.u + self.d * self.v * other.v,
                self.u * other.v + self.v * other.u,
                self.d,
            )
        if isinstance(other, Rational):
            if not other:
                return Fraction(0)
            return Quad(self.u * other, self.v * other, self.d)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroDivisionError("zero quadratic scalar")
        return make_quad(self.u / n, -self.v / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, Quad):
            return self * other.inverse()
        if isinstance(other, Rational):
            if not other:
                raise ZeroDivisionError
            return Quad(self.u / other, self.v / other, self.d)
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Fraction(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def make_quad(u, v, d: int):
    """Quad constructor that demotes to Fraction when the radical part is 0."""
    u, v = _frac(u), _frac(v)
    if v == 0:
        return u
    return Quad(u, v, d)


def is_rational(x) -> bool:
    return isinstance(x, Rational) or (isinstance(x, Quad) and x.v == 0)


def conj(x):
    return x.conj() if isinstance(x, Quad) else x


def scalar_sign(x) -> int:
    """Sign convention: rational part first, radical part as tiebreak."""
    if isinstance(x, Quad):
        if x.u:
            return 1 if x.u > 0 else -1
        return 1 if x.v > 0 else (-1 if x.v < 0 else 0)
    return 1 if x > 0 else (-1 if x < 0 else 0)


def scalar_inverse(x):
    if isinstance(x, Quad):
        return x.inverse()
    if not x:
        raise ZeroDivisionError
    return 1 / _frac(x)


def quad_radicand(x) -> int | None:
    return x.d if isinstance(x, Quad) and x.v else None


def common_radicand(*xs) -> int | None:
    """Single radicand shared by the given scalars, or None if all rational."""
    d = None
    for x in xs:
        xd = quad_radicand(x)
        if xd is None:
            continue
        if d is None:
            d = xd
        elif d != xd:
            raise ScalarError(f"mixed radicands {d} and {xd}")
    return d


def abs_upper(x) -> Fraction:
    """Rational upper bound for |x|."""
    if isinstance(x, Quad):
        return abs(x.u) + abs(x.v) * x.d  # sqrt(d) <= d for d >= 2
    return abs(_frac(x))


def abs_lower(x) -> Fraction:
    """Rational lower bound for |x|, positive whenever x != 0."""
    if isinstance(x, Quad):
        if not x:
            return Fraction(0)
        up = abs(x.u) + abs(x.v) * x.d
        return abs(x.norm()) / up
    return abs(_frac(x))


# ---------------------------------------------------------------------------
# Integer factorization (small utility for rational root finding and
# squarefree decomposition of radicands).
# ---------------------------------------------------------------------------

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24 with these witnesses
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(0xC0FFEE ^ n)
    while True:
        c = rng.randrange(1, n)
        f = lambda x: (x * x + c) % n
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = gcd(abs(x - y), n)
        if d != n:
            return d


def factorint(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}; n must be nonzero."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    factors: dict[int, int] = {}
    for p in range(2, 10000):
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend([d, m // d])
    return factors


def divisors(n: int) -> list[int]:
    """All positive divisors of |n|, ascending."""
    divs = [1]
    for p, e in factorint(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    if n == 1:
        return True
    return all(e == 1 for e in factorint(n).values())


def squarefree_decompose(n: int) -> tuple[int, int]:
    """n = s^2 * d with d squarefree; returns (s, d).  Sign goes into d."""
    if n == 0:
        return (1, 0)
    sign = 1 if n > 0 else -1
    s, d = 1, 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return s, sign * d


def exact_sqrt_fraction(x) -> Fraction | None:
    """sqrt(x) when x is a perfect rational square, else None."""
    x = _frac(x)
    if x < 0:
        return None
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def sqrt_scalar(x):
    """Exact square root of a nonnegative rational, as Fraction or Quad."""
    x = _frac(x)
    if x < 0:
        raise ScalarError(f"negative radicand {x}")
    if x == 0:
        return Fraction(0)
    r = exact_sqrt_fraction(x)
    if r is not None:
        return r
    # x = num/den = (num*den)/den^2; pull the square part of num*den
    s, d = squarefree_decompose(x.numerator * x.denominator)
    return Quad(0, Fraction(s, x.denominator), d)


def render_scalar(x) -> str:
    """Render a scalar in the expression grammar (re-parseable)."""
    if isinstance(x, Quad):
        parts = []
        if x.u:
            parts.append(render_scalar(x.u))
        root = f"sqrt({x.d})"
        if x.v == 1:
            rad = root
        elif x.v == -1:
            rad = f"-{root}"
        elif x.v.denominator == 1:
            rad = f"{x.v}*{root}"
        else:
            rad = f"{x.v.numerator}/{x.v.denominator}*{root}"
        if parts and not rad.startswith("-"):
            return f"{parts[0]}+{rad}"
        return f"{parts[0] if parts else ''}{rad}"
    x = _frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
