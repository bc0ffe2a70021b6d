"""The summand language: products of Pochhammers, factorials, powers, signs
and rational-function factors, with exact shift ratios and exact evaluation.

A term is hypergeometric in a variable when every affine argument has an
integer coefficient in that variable; the shift ratio t(var+1)/t(var) is then
a rational function, computed factor by factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .poly import MultiPoly, poly_gcd, poly_sqrt
from .ratfunc import RatFunc
from .scalars import (
    Quad,
    Rational,
    _frac,
    exact_sqrt_fraction,
    make_quad,
    render_scalar,
    sqrt_scalar,
    squarefree_decompose,
)


class NotHypergeometricError(ValueError):
    """Term is not hypergeometric in the requested variable."""


class TermEvalError(ArithmeticError):
    """Structured evaluation error naming the offending factor."""

    def __init__(self, factor, reason: str):
        self.factor = factor
        self.reason = reason
        super().__init__(f"{reason} in factor {factor}")


# ---------------------------------------------------------------------------
# Affine forms
# ---------------------------------------------------------------------------


class AffineForm:
    """const + sum(coeff[v] * v) with exact rational entries."""

    __slots__ = ("const", "coeffs")

    def __init__(self, const=0, coeffs: dict | None = None):
        self.const = _frac(const)
        self.coeffs = {v: _frac(c) for v, c in (coeffs or {}).items() if c}

    @classmethod
    def variable(cls, name: str):
        return cls(0, {name: 1})

    @classmethod
    def constant(cls, c):
        return cls(c)

    def coeff(self, var: str) -> Fraction:
        return self.coeffs.get(var, Fraction(0))

    def is_const(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if isinstance(other, AffineForm):
            return self.const == other.const and self.coeffs == other.coeffs
        if isinstance(other, Rational):
            return self.is_const() and self.const == other
        return NotImplemented

    def __hash__(self):
        return hash((self.const, frozenset(self.coeffs.items())))

    def __add__(self, other):
        if isinstance(other, Rational):
            return AffineForm(self.const + other, self.coeffs)
        coeffs = dict(self.coeffs)
        for v, c in other.coeffs.items():
            coeffs[v] = coeffs.get(v, Fraction(0)) + c
        return AffineForm(self.const + other.const, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return AffineForm(-self.const, {v: -c for v, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, Rational):
            return AffineForm(self.const - other, self.coeffs)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _frac(c)
        if not c:
            return AffineForm(0)
        return AffineForm(self.const * c, {v: x * c for v, x in self.coeffs.items()})

    def subst(self, var: str, image: "AffineForm") -> "AffineForm":
        if var not in self.coeffs:
            return self
        c = self.coeffs[var]
        rest = {v: x for v, x in self.coeffs.items() if v != var}
        return AffineForm(self.const, rest) + image.scale(c)

    def shift(self, var: str, delta) -> "AffineForm":
        if var not in self.coeffs:
            return self
        return AffineForm(self.const + self.coeffs[var] * delta, self.coeffs)

    def eval(self, assignment: dict) -> Fraction:
        total = self.const
        for v, c in self.coeffs.items():
            total += c * _frac(assignment[v])
        return total

    def to_poly(self, vars: tuple) -> MultiPoly:
        p = MultiPoly.const(vars, self.const)
        for v, c in self.coeffs.items():
            p = p + MultiPoly.var(vars, v) * c
        return p

    def sort_key(self):
        return (tuple(sorted((v, (c.numerator, c.denominator))
                             for v, c in self.coeffs.items())),
                (self.const.numerator, self.const.denominator))

    def __str__(self):
        parts = []
        for v in sorted(self.coeffs):
            c = self.coeffs[v]
            if c == 1:
                txt = v
            elif c == -1:
                txt = f"-{v}"
            else:
                txt = f"{render_scalar(c)}*{v}"
            if parts and not txt.startswith("-"):
                parts.append(f"+{txt}")
            else:
                parts.append(txt)
        if self.const or not parts:
            txt = render_scalar(self.const)
            if parts and not txt.startswith("-"):
                txt = f"+{txt}"
            parts.append(txt)
        return "".join(parts)

    def __repr__(self):
        return f"AffineForm({self})"


# ---------------------------------------------------------------------------
# Quadratic-extension elements (radical hypergeometric parameters)
# ---------------------------------------------------------------------------


class QuadExtElem:
    """u + v*sqrt(D) with u, v rational functions and D a polynomial radicand."""

    __slots__ = ("u", "v", "radicand")

    def __init__(self, u: RatFunc, v: RatFunc, radicand: MultiPoly):
        self.u = u
        self.v = v
        self.radicand = radicand

    def conj(self) -> "QuadExtElem":
        return QuadExtElem(self.u, -self.v, self.radicand)

    def __eq__(self, other):
        if not isinstance(other, QuadExtElem):
            return NotImplemented
        return (self.u == other.u and self.v == other.v
                and self.radicand == other.radicand)

    def __hash__(self):
        return hash((self.u, self.v, self.radicand))

    def eval(self, assignment: dict):
        """Exact value at rational parameters, as Fraction or Quad."""
        d_val = self.radicand.eval_all(assignment)
        root = sqrt_scalar(d_val)
        return self.u.eval_all(assignment) + self.v.eval_all(assignment) * root

    def is_conjugate_of(self, other: "QuadExtElem") -> bool:
        return (self.u == other.u and self.radicand == other.radicand
                and self.v == -other.v)

    def __str__(self):
        u = str(self.u)
        vtxt = str(self.v)
        root = f"sqrt({self.radicand})"
        if vtxt == "1":
            rad = root
        elif vtxt == "-1":
            rad = f"-{root}"
        elif vtxt.startswith("-"):
            rad = f"-{vtxt[1:]}*{root}"
        else:
            rad = f"{vtxt}*{root}"
        if self.u.is_zero():
            return rad
        if rad.startswith("-"):
            return f"{u}{rad}"
        return f"{u}+{rad}"

    def __repr__(self):
        return f"QuadExtElem({self})"


def canonical_radicand(d: RatFunc | MultiPoly, vars: tuple):
    """Rewrite sqrt(d) as scale*sqrt(D) with D a canonical polynomial radicand.

    Square rational factors and detected square polynomial factors are pulled
    out; an integer radicand is reduced to its squarefree part.
    """
    if isinstance(d, MultiPoly):
        d = RatFunc(d)
    # sqrt(n/m) = sqrt(n*m)/m
    scale = RatFunc(d.den).reciprocal()
    p = d.num * d.den
    c, prim = p.canonical()
    # rational square part of c
    c = _frac(c)
    sign = -1 if c < 0 else 1
    num_s, num_d = squarefree_decompose(abs(c.numerator))
    den_s, den_d = squarefree_decompose(c.denominator)
    # c = sign * (num_s^2 num_d)/(den_s^2 den_d); sqrt -> (num_s/den_s) sqrt(sign num_d den_d)/den_d
    scale = scale * Fraction(num_s, den_s * den_d)
    radicand = prim * (sign * num_d * den_d)
    # polynomial square factors
    root = poly_sqrt(radicand if sign > 0 else -radicand)
    if root is not None and sign > 0:
        return scale * RatFunc(root), None
    for var in radicand.vars:
        if radicand.degree_in(var) == 0:
            continue
        g = poly_gcd(radicand, radicand.derivative(var))
        while not g.is_const():
            from .poly import try_div_exact

            quo = try_div_exact(radicand, g * g)
            if quo is None:
                break
            radicand = quo
            scale = scale * RatFunc(g)
            g = poly_gcd(radicand, radicand.derivative(var))
    cc, radicand = radicand.canonical()
    cc = _frac(cc)
    ns, nd = squarefree_decompose(abs(cc.numerator))
    ds, dd = squarefree_decompose(cc.denominator)
    scale = scale * Fraction(ns, ds * dd)
    radicand = radicand * ((1 if cc > 0 else -1) * nd * dd)
    return scale, radicand


# ---------------------------------------------------------------------------
# Term factors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Poch:
    base: AffineForm
    length: AffineForm
    power: int = 1

    def __str__(self):
        s = f"poch({self.base},{self.length})"
        return s if self.power == 1 else f"{s}^{self.power}"


@dataclass(frozen=True)
class Fact:
    arg: AffineForm
    power: int = 1

    def __str__(self):
        s = f"factorial({self.arg})"
        return s if self.power == 1 else f"{s}^{self.power}"


@dataclass(frozen=True)
class PowFactor:
    base: RatFunc
    exponent: AffineForm

    def __str__(self):
        base = str(self.base)
        if len(base) > 1 and not base.isalnum():
            base = f"({base})"
        return f"{base}^({self.exponent})"


@dataclass(frozen=True)
class SignPow:
    exponent: AffineForm

    def __str__(self):
        return f"(-1)^({self.exponent})"


@dataclass(frozen=True)
class RatFactor:
    value: RatFunc

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class ConjPochPair:
    """poch(u+v*sqrt(D), L) * poch(u-v*sqrt(D), L): radical-free products."""

    u: RatFunc
    v: RatFunc
    radicand: MultiPoly
    length: AffineForm
    power: int = 1

    def __str__(self):
        e = QuadExtElem(self.u, self.v, self.radicand)
        s = f"poch({e},{self.length})*poch({e.conj()},{self.length})"
        return s if self.power == 1 else f"({s})^{self.power}"


_KIND_RANK = {Poch: 0, ConjPochPair: 1, Fact: 2, PowFactor: 3, SignPow: 4, RatFactor: 5}


def _factor_key(f):
    rank = _KIND_RANK[type(f)]
    if isinstance(f, Poch):
        return (rank, f.base.sort_key(), f.length.sort_key())
    if isinstance(f, ConjPochPair):
        return (rank, str(f.u), str(f.v), str(f.radicand), f.length.sort_key())
    if isinstance(f, Fact):
        return (rank, f.arg.sort_key())
    if isinstance(f, PowFactor):
        return (rank, str(f.base), f.exponent.sort_key())
    if isinstance(f, SignPow):
        return (rank, f.exponent.sort_key())
    return (rank,)


class TermExpr:
    """Product of term factors over a fixed variable table."""

    __slots__ = ("vars", "factors")

    def __init__(self, vars: tuple[str, ...], factors=(), *, normalized=False):
        self.vars = vars
        if normalized:
            self.factors = tuple(factors)
        else:
            self.factors = self._normalize(vars, factors)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def one(cls, vars):
        return cls(vars, ())

    def with_factors(self, factors):
        return TermExpr(self.vars, factors)

    def __mul__(self, other: "TermExpr") -> "TermExpr":
        if self.vars != other.vars:
            raise ValueError("mixed variable tables")
        return TermExpr(self.vars, self.factors + other.factors)

    def inverse(self) -> "TermExpr":
        inv = []
        for f in self.factors:
            if isinstance(f, Poch):
                inv.append(Poch(f.base, f.length, -f.power))
            elif isinstance(f, ConjPochPair):
                inv.append(ConjPochPair(f.u, f.v, f.radicand, f.length, -f.power))
            elif isinstance(f, Fact):
                inv.append(Fact(f.arg, -f.power))
            elif isinstance(f, PowFactor):
                inv.append(PowFactor(f.base, -f.exponent))
            elif isinstance(f, SignPow):
                inv.append(f)  # (-1)^-e == (-1)^e
            elif isinstance(f, RatFactor):
                inv.append(RatFactor(f.value.reciprocal()))
        return TermExpr(self.vars, inv)

    def __pow__(self, n: int) -> "TermExpr":
        if n == 0:
            return TermExpr.one(self.vars)
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def __eq__(self, other):
        if not isinstance(other, TermExpr):
            return NotImplemented
        return self.vars == other.vars and self.factors == other.factors

    def __hash__(self):
        return hash((self.vars, self.factors))

    # -- normalization ---------------------------------------------------------

    @staticmethod
    def _normalize(vars, factors) -> tuple:
        poch: dict = {}
        pairs: dict = {}
        fact: dict = {}
        powf: dict = {}
        sign = AffineForm(0)
        rat = RatFunc.from_scalar(vars, 1)

        def add_rat(r):
            nonlocal rat
            rat = rat * r

        for f in factors:
            if isinstance(f, RatFactor):
                add_rat(f.value)
            elif isinstance(f, SignPow):
                sign = sign + f.exponent
            elif isinstance(f, Poch):
                if f.power == 0 or f.length == 0:
                    continue
                base, length = f.base, f.length
                if length.is_const() and length.const.denominator == 1:
                    # constant length: expand into a rational factor
                    add_rat(_poch_expand(vars, base, int(length.const)) ** f.power)
                    continue
                if base == 1:
                    # (1)_L == L!
                    key = ("fact", length.sort_key())
                    fact[key] = (length, fact.get(key, (length, 0))[1] + f.power)
                    continue
                key = (base.sort_key(), length.sort_key())
                cur = poch.get(key)
                poch[key] = (base, length, (cur[2] if cur else 0) + f.power)
            elif isinstance(f, ConjPochPair):
                if f.power == 0 or f.length == 0:
                    continue
                key = (str(f.u), str(f.v), str(f.radicand), f.length.sort_key())
                cur = pairs.get(key)
                pairs[key] = (f, (cur[1] if cur else 0) + f.power)
            elif isinstance(f, Fact):
                if f.power == 0 or f.arg == 0:
                    continue
                if f.arg.is_const() and f.arg.const.denominator == 1:
                    n = int(f.arg.const)
                    if n < 0:
                        raise TermEvalError(f, "factorial of a negative constant")
                    val = Fraction(1)
                    for i in range(2, n + 1):
                        val *= i
                    add_rat(RatFunc.from_scalar(vars, val) ** f.power)
                    continue
                key = ("fact", f.arg.sort_key())
                cur = fact.get(key)
                fact[key] = (f.arg, (cur[1] if cur else 0) + f.power)
            elif isinstance(f, PowFactor):
                if f.exponent == 0:
                    continue
                if f.base == 1:
                    continue
                if f.base == -1:
                    sign = sign + f.exponent
                    continue
                if f.exponent.is_const() and f.exponent.const.denominator == 1:
                    add_rat(f.base ** int(f.exponent.const))
                    continue
                key = str(f.base)
                cur = powf.get(key)
                if cur:
                    powf[key] = (f.base, cur[1] + f.exponent)
                else:
                    powf[key] = (f.base, f.exponent)
            else:
                raise TypeError(f"unknown factor {f!r}")

        out = []
        for base, length, p in poch.values():
            if p:
                out.append(Poch(base, length, p))
        for pair, p in pairs.values():
            if p:
                out.append(ConjPochPair(pair.u, pair.v, pair.radicand, pair.length, p))
        for arg, p in fact.values():
            if p:
                out.append(Fact(arg, p))
        for base, e in powf.values():
            if e == 0:
                continue
            if e.is_const() and e.const.denominator == 1:
                rat = rat * base ** int(e.const)
            else:
                out.append(PowFactor(base, e))
        sign = _reduce_sign_exponent(sign)
        if sign is not None:
            if sign.is_const():
                if int(sign.const) % 2:
                    rat = rat * -1
            else:
                out.append(SignPow(sign))
        if not rat == 1 or not out:
            out.append(RatFactor(rat))
        out.sort(key=_factor_key)
        return tuple(out)

    # -- substitution -----------------------------------------------------------

    def subst_affine(self, var: str, image: AffineForm) -> "TermExpr":
        image_poly = image.to_poly(self.vars)
        out = []
        for f in self.factors:
            if isinstance(f, Poch):
                out.append(Poch(f.base.subst(var, image), f.length.subst(var, image), f.power))
            elif isinstance(f, ConjPochPair):
                out.append(ConjPochPair(
                    _ratfunc_subst(f.u, var, image_poly),
                    _ratfunc_subst(f.v, var, image_poly),
                    f.radicand.subst_poly(var, image_poly),
                    f.length.subst(var, image), f.power))
            elif isinstance(f, Fact):
                out.append(Fact(f.arg.subst(var, image), f.power))
            elif isinstance(f, PowFactor):
                out.append(PowFactor(_ratfunc_subst(f.base, var, image_poly),
                                     f.exponent.subst(var, image)))
            elif isinstance(f, SignPow):
                out.append(SignPow(f.exponent.subst(var, image)))
            elif isinstance(f, RatFactor):
                out.append(RatFactor(_ratfunc_subst(f.value, var, image_poly)))
        return TermExpr(self.vars, out)

    def shift(self, var: str, delta: int) -> "TermExpr":
        return self.subst_affine(var, AffineForm(delta, {var: 1}))

    def __str__(self):
        num, den = [], []
        for f in self.factors:
            p = getattr(f, "power", 1)
            if isinstance(f, PowFactor):
                num.append(str(f))
            elif isinstance(f, RatFactor):
                num.append(str(f))
            elif isinstance(f, SignPow):
                num.append(str(f))
            elif p >= 0:
                num.append(str(f))
            else:
                flipped = type(f)(**{**{k: getattr(f, k) for k in f.__dataclass_fields__},
                                     "power": -p})
                den.append(str(flipped))
        text = "*".join(num) if num else "1"
        if den:
            text += "/(" + "*".join(den) + ")"
        return text

    def __repr__(self):
        return f"TermExpr({self})"


def _reduce_sign_exponent(e: AffineForm) -> AffineForm | None:
    """Reduce (-1)^e: integer coefficients mod 2; returns None when e == 0."""
    coeffs = {}
    for v, c in e.coeffs.items():
        if c.denominator == 1:
            c = Fraction(int(c) % 2)
        if c:
            coeffs[v] = c
    const = e.const
    if const.denominator == 1:
        const = Fraction(int(const) % 2)
    out = AffineForm(const, coeffs)
    if out == 0:
        return None
    return out


def _ratfunc_subst(r: RatFunc, var: str, image_poly: MultiPoly) -> RatFunc:
    return RatFunc(r.num.subst_poly(var, image_poly), r.den.subst_poly(var, image_poly))


def _poch_expand(vars, base: AffineForm, n: int) -> RatFunc:
    """(base)_n for a constant integer n as an explicit rational function."""
    one = RatFunc.from_scalar(vars, 1)
    if n == 0:
        return one
    if n > 0:
        out = one
        for i in range(n):
            out = out * RatFunc((base + i).to_poly(vars))
        return out
    out = one
    for i in range(1, -n + 1):
        out = out * RatFunc((base - i).to_poly(vars))
    return out.reciprocal()


# ---------------------------------------------------------------------------
# Shift ratio
# ---------------------------------------------------------------------------


def _int_coeff(form: AffineForm, var: str, where) -> int:
    c = form.coeff(var)
    if c.denominator != 1:
        raise NotHypergeometricError(
            f"term not hypergeometric in {var}: non-integer shift coefficient {c} in {where}")
    return int(c)


def _affine_range_product(vars, start: AffineForm, count: int) -> RatFunc:
    """product_{i=0}^{count-1} (start + i) as a RatFunc (count >= 0)."""
    out = RatFunc.from_scalar(vars, 1)
    for i in range(count):
        out = out * RatFunc((start + i).to_poly(vars))
    return out


def shift_ratio(t: TermExpr, var: str) -> RatFunc:
    """t(var+1) / t(var) as a reduced rational function."""
    vars = t.vars
    ratio = RatFunc.from_scalar(vars, 1)
    for f in t.factors:
        ratio = ratio * _factor_shift_ratio(vars, f, var)
    return ratio


def _factor_shift_ratio(vars, f, var: str) -> RatFunc:
    one = RatFunc.from_scalar(vars, 1)
    if isinstance(f, Poch):
        cb = _int_coeff(f.base, var, f)
        cl = _int_coeff(f.length, var, f)
        if cb == 0 and cl == 0:
            return one
        b1 = f.base + cb
        part = one
        # (b+cb)_L / (b)_L
        if cb > 0:
            part = part * _affine_range_product(vars, f.base + f.length, cb) \
                / _affine_range_product(vars, f.base, cb)
        elif cb < 0:
            part = part * _affine_range_product(vars, b1, -cb) \
                / _affine_range_product(vars, b1 + f.length, -cb)
        # (b+cb)_{L+cl} / (b+cb)_L
        if cl > 0:
            part = part * _affine_range_product(vars, b1 + f.length, cl)
        elif cl < 0:
            part = part / _affine_range_product(vars, b1 + f.length + cl, -cl)
        return part ** f.power
    if isinstance(f, ConjPochPair):
        for r in (f.u, f.v):
            if r.num.degree_in(var) or r.den.degree_in(var):
                raise NotHypergeometricError(
                    f"radical parameter depends on shift variable {var}")
        if f.radicand.degree_in(var):
            raise NotHypergeometricError(
                f"radicand depends on shift variable {var}")
        cl = _int_coeff(f.length, var, f)
        if cl == 0:
            return one
        part = one
        v2d = f.v * f.v * RatFunc(f.radicand)
        if cl > 0:
            for i in range(cl):
                u_i = f.u + RatFunc((f.length + i).to_poly(vars))
                part = part * (u_i * u_i - v2d)
        else:
            for i in range(1, -cl + 1):
                u_i = f.u + RatFunc((f.length - i).to_poly(vars))
                part = part / (u_i * u_i - v2d)
        return part ** f.power
    if isinstance(f, Fact):
        c = _int_coeff(f.arg, var, f)
        if c == 0:
            return one
        if c > 0:
            part = _affine_range_product(vars, f.arg + 1, c)
        else:
            part = _affine_range_product(vars, f.arg + c + 1, -c).reciprocal()
        return part ** f.power
    if isinstance(f, PowFactor):
        c = _int_coeff(f.exponent, var, f)
        if c == 0:
            return one
        if f.base.num.degree_in(var) or f.base.den.degree_in(var):
            raise NotHypergeometricError(
                f"power base {f.base} depends on shift variable {var}")
        return f.base**c
    if isinstance(f, SignPow):
        c = _int_coeff(f.exponent, var, f)
        return one if c % 2 == 0 else -one
    if isinstance(f, RatFactor):
        return f.value.shift(var, 1) / f.value
    raise TypeError(f"unknown factor {f!r}")


# ---------------------------------------------------------------------------
# Exact evaluation
# ---------------------------------------------------------------------------


def _eval_int(form: AffineForm, assignment, factor, what: str) -> int:
    val = form.eval(assignment)
    if val.denominator != 1:
        raise TermEvalError(factor, f"{what} {val} is not an integer")
    return int(val)


def eval_term(t: TermExpr, assignment: dict):
    """Exact value of the term at a full rational assignment."""
    total = Fraction(1)
    for f in t.factors:
        total = total * _eval_factor(f, assignment)
    return total


def _eval_factor(f, assignment):
    if isinstance(f, Poch):
        n = _eval_int(f.length, assignment, f, "pochhammer length")
        if n < 0:
            raise TermEvalError(f, f"pochhammer length {n} is negative")
        b = f.base.eval(assignment)
        val = Fraction(1)
        for i in range(n):
            val *= b + i
        if f.power < 0 and not val:
            raise TermEvalError(f, "inverse pochhammer vanishes")
        return val**f.power
    if isinstance(f, ConjPochPair):
        n = _eval_int(f.length, assignment, f, "pochhammer length")
        if n < 0:
            raise TermEvalError(f, f"pochhammer length {n} is negative")
        try:
            u = f.u.eval_all(assignment)
            v = f.v.eval_all(assignment)
            d = f.radicand.eval_all(assignment)
        except ZeroDivisionError:
            raise TermEvalError(f, "radical parameter undefined") from None
        val = Fraction(1)
        for i in range(n):
            val *= (u + i) * (u + i) - v * v * d
        if f.power < 0 and not val:
            raise TermEvalError(f, "inverse pochhammer pair vanishes")
        return val**f.power
    if isinstance(f, Fact):
        n = _eval_int(f.arg, assignment, f, "factorial argument")
        if n < 0:
            raise TermEvalError(f, f"factorial argument {n} is negative")
        val = Fraction(1)
        for i in range(2, n + 1):
            val *= i
        return val**f.power
    if isinstance(f, PowFactor):
        e = _eval_int(f.exponent, assignment, f, "exponent")
        try:
            base = f.base.eval_all(assignment)
        except ZeroDivisionError:
            raise TermEvalError(f, "power base undefined") from None
        if not base and e < 0:
            raise TermEvalError(f, "zero base with negative exponent")
        if not base:
            return Fraction(0) if e else Fraction(1)
        return base**e
    if isinstance(f, SignPow):
        e = _eval_int(f.exponent, assignment, f, "exponent")
        return Fraction(-1 if e % 2 else 1)
    if isinstance(f, RatFactor):
        try:
            return f.value.eval_all(assignment)
        except ZeroDivisionError:
            raise TermEvalError(f, "rational factor denominator vanishes") from None
    raise TypeError(f"unknown factor {f!r}")


# ---------------------------------------------------------------------------
# Hypergeometric terms (pFq summands)
# ---------------------------------------------------------------------------


class HyperTerm:
    """Summand of a pFq series: prod (upper)_m / prod (lower)_m * z^m / m!.

    Parameters are affine forms in the parameters or quadratic-extension
    elements (which must come in conjugate pairs).  Matching upper/lower
    parameters cancel at construction.
    """

    __slots__ = ("upper", "lower", "argument", "var", "vars")

    def __init__(self, upper, lower, argument, var: str, vars: tuple):
        upper = list(upper)
        lower = list(lower)
        for u in list(upper):
            for l in list(lower):
                if type(u) is type(l) and u == l:
                    upper.remove(u)
                    lower.remove(l)
                    break
        self.upper = tuple(sorted(upper, key=_param_key))
        self.lower = tuple(sorted(lower, key=_param_key))
        if isinstance(argument, (int, Fraction)):
            argument = RatFunc.from_scalar(vars, _frac(argument))
        elif isinstance(argument, Quad):
            argument = RatFunc.from_scalar(vars, argument)
        elif isinstance(argument, MultiPoly):
            argument = RatFunc(argument)
        self.argument = argument
        self.var = var
        self.vars = vars

    def __eq__(self, other):
        if not isinstance(other, HyperTerm):
            return NotImplemented
        return (self.upper == other.upper and self.lower == other.lower
                and self.argument == other.argument and self.var == other.var)

    def __str__(self):
        up = ",".join(_param_str(p) for p in self.upper)
        lo = ",".join(_param_str(p) for p in self.lower)
        return f"hyperterm([{up}],[{lo}],{_argument_str(self.argument)},{self.var})"

    def __repr__(self):
        return f"HyperTerm({self})"

    def value(self, m: int, assignment: dict):
        """Exact value at integer index m (radical parameters allowed)."""
        if m < 0:
            raise ValueError("negative index")
        assign = dict(assignment)
        assign[self.var] = Fraction(m)
        num, den = Fraction(1), Fraction(1)
        for p in self.upper:
            num = num * _param_poch_value(p, m, assign)
        for p in self.lower:
            v = _param_poch_value(p, m, assign)
            if not v:
                raise TermEvalError(p, "lower parameter pochhammer vanishes")
            den = den * v
        z = self.argument.eval_all(assign)
        fact = Fraction(1)
        for i in range(2, m + 1):
            fact *= i
        return num / den * z**m / fact


def _param_key(p):
    if isinstance(p, AffineForm):
        return (0, p.sort_key())
    return (1, str(p.radicand), str(p.u), str(p.v))


def _param_str(p) -> str:
    return str(p)


def _argument_str(z: RatFunc) -> str:
    return str(z)


def _param_poch_value(p, m: int, assign: dict):
    if isinstance(p, AffineForm):
        b = p.eval(assign)
        val = Fraction(1)
        for i in range(m):
            val *= b + i
        return val
    if isinstance(p, QuadExtElem):
        b = p.eval(assign)
        val = Fraction(1)
        for i in range(m):
            val = (b + i) * val
        return val
    raise TypeError(f"unknown parameter {p!r}")


def hyperterm_factors(upper, lower, argument, index: AffineForm,
                      vars: tuple) -> TermExpr:
    """The pFq summand with the running index replaced by an affine form.

    Matching upper/lower parameters cancel; radical parameters must pair up
    into conjugates (their Pochhammer products stay in the base field).
    """
    upper = list(upper)
    lower = list(lower)
    for u in list(upper):
        for l in list(lower):
            if type(u) is type(l) and u == l:
                upper.remove(u)
                lower.remove(l)
                break
    if isinstance(argument, (int, Fraction, Quad)):
        argument = RatFunc.from_scalar(vars, argument)
    factors: list = []

    def add_side(params, power):
        quads = [p for p in params if isinstance(p, QuadExtElem)]
        used = set()
        for i, p in enumerate(quads):
            if i in used:
                continue
            match = None
            for j in range(i + 1, len(quads)):
                if j not in used and p.is_conjugate_of(quads[j]):
                    match = j
                    break
            if match is None:
                raise ValueError(
                    f"radical parameter {p} has no conjugate partner")
            used.update((i, match))
            v = p.v if str(p.v) >= str(-p.v) else -p.v
            factors.append(ConjPochPair(p.u, v, p.radicand, index, power))
        for p in params:
            if isinstance(p, AffineForm):
                factors.append(Poch(p, index, power))

    add_side(upper, 1)
    add_side(lower, -1)
    if not argument == 1:
        factors.append(PowFactor(argument, index))
    factors.append(Fact(index, -1))
    return TermExpr(vars, factors)


def hyperterm_to_termexpr(h: HyperTerm) -> TermExpr:
    """Convert to the factor language; radical parameters pair up conjugates."""
    return hyperterm_factors(h.upper, h.lower, h.argument,
                             AffineForm.variable(h.var), h.vars)


def binomial_factors(top: AffineForm, bottom: AffineForm, power: int = 1):
    """binomial(top, bottom) = top! / (bottom! (top-bottom)!)."""
    return [Fact(top, power), Fact(bottom, -power), Fact(top - bottom, -power)]


def cauchy_summand(f: TermExpr, g: TermExpr, inner: str, outer: str,
                   even: bool = False) -> TermExpr:
    """f(j) * g(k - j), or f(j) * g(2k - j) for even products."""
    image = AffineForm(0, {outer: 2 if even else 1, inner: -1})
    return f * g.subst_affine(inner, image)
