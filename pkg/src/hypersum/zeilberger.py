"""Creative telescoping: recurrences for definite hypergeometric sums.

For a summand F(n, k), find polynomials sigma_0..sigma_J with
sum_i sigma_i(n) F(n+i, k) = G(n, k+1) - G(n, k) where G = R*F for a rational
certificate R.  Summing over the natural support yields
sum_i sigma_i(n) S(n+i) = 0.  Recurrences are canonically normalized
(common polynomial gcd and integer content removed, leading coefficient of
sigma_J positive) so results can be compared verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gosper import gosper_normal_form, solve_key_equation
from .poly import MultiPoly, poly_div_exact, poly_gcd, poly_lcm
from .ratfunc import RatFunc
from .scalars import scalar_sign
from .terms import TermExpr, shift_ratio


class NoRecurrenceError(ValueError):
    """No recurrence up to the requested order (a legal outcome)."""


@dataclass
class Recurrence:
    """sum_{i=0}^{J} coeffs[i](rec_var) * S(rec_var + i) = 0."""

    rec_var: str
    coeffs: tuple[MultiPoly, ...]

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1].is_zero():
            raise ValueError("leading recurrence coefficient must be nonzero")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        if not isinstance(other, Recurrence):
            return NotImplemented
        return self.rec_var == other.rec_var and self.coeffs == other.coeffs

    def render(self) -> str:
        n = self.rec_var
        parts = []
        for i in range(self.order, -1, -1):
            arg = n if i == 0 else f"{n}+{i}"
            parts.append(f"({self.coeffs[i]})*S({arg})")
        return "+".join(parts) + "=0"

    def __str__(self):
        return self.render()


@dataclass
class Certificate:
    """Rational function R with sum_i sigma_i F(n+i, k) = Delta_k(R * F)."""

    R: RatFunc
    sum_var: str
    rec_var: str


def recurrence_normalize(rec: Recurrence) -> Recurrence:
    """Divide out the common polynomial gcd and integer content; fix the sign."""
    coeffs = list(rec.coeffs)
    g = None
    for c in coeffs:
        if c.is_zero():
            continue
        g = c if g is None else poly_gcd(g, c)
        if g.is_const():
            g = None
            break
    if g is not None and not g.is_const():
        coeffs = [poly_div_exact(c, g) if not c.is_zero() else c for c in coeffs]
    from .scalars import Quad

    lead = coeffs[-1].lead()[1]
    if isinstance(lead, Quad):
        # a common quadratic unit may hide rational coefficients
        inv = lead.inverse()
        coeffs = [c * inv for c in coeffs]
    content = None
    for c in coeffs:
        if c.is_zero():
            continue
        rc = c.rational_content()
        content = rc if content is None else _frac_gcd(content, rc)
    if content:
        inv = 1 / content
        coeffs = [c * inv for c in coeffs]
    if scalar_sign(coeffs[-1].lead()[1]) < 0:
        coeffs = [-c for c in coeffs]
    return Recurrence(rec.rec_var, tuple(coeffs))


def _frac_gcd(a, b):
    from fractions import Fraction
    from math import gcd, lcm

    a, b = abs(Fraction(a)), abs(Fraction(b))
    return Fraction(gcd(a.numerator, b.numerator), lcm(a.denominator, b.denominator))


def first_order_ratio(rec: Recurrence) -> RatFunc:
    """S(n+1)/S(n) = -sigma_0/sigma_1 for a first-order recurrence."""
    if rec.order != 1:
        raise ValueError(f"recurrence has order {rec.order}, expected 1")
    return RatFunc(-rec.coeffs[0], rec.coeffs[1])


def cross_ratios(F: TermExpr, sum_var: str, rec_var: str, order: int) -> list[RatFunc]:
    """[F(n+i, k)/F(n, k) for i = 0..order]."""
    step = shift_ratio(F, rec_var)
    out = [RatFunc.from_scalar(F.vars, 1)]
    for i in range(order):
        out.append(out[-1] * step.shift(rec_var, i))
    return out


def sumrecursion(F: TermExpr, sum_var: str, rec_var: str,
                 max_order: int = 4) -> tuple[Recurrence, Certificate]:
    """Lowest-order telescoped recurrence with its certificate.

    Tries orders J = 1, 2, ... up to max_order; raises NoRecurrenceError when
    none is found (a legal outcome for non-holonomic inputs at small order).
    """
    vars = F.vars
    a = shift_ratio(F, sum_var)
    ratios = cross_ratios(F, sum_var, rec_var, max_order)
    for J in range(1, max_order + 1):
        found = _telescope_at_order(vars, a, ratios[: J + 1], sum_var, rec_var)
        if found is not None:
            rec, cert = found
            return rec, cert
    raise NoRecurrenceError(f"no recurrence of order <= {max_order}")


def _telescope_at_order(vars, a: RatFunc, b: list[RatFunc], sum_var: str,
                        rec_var: str):
    v = MultiPoly.const(vars, 1)
    for bi in b:
        v = poly_lcm(v, bi.den)
    numerators = [bi.num * poly_div_exact(v, bi.den) for bi in b]

    known = a * RatFunc(v, v.shift(sum_var, 1))
    nf = gosper_normal_form(known, sum_var)
    A = nf.q * nf.z.num
    B = nf.r * nf.z.den
    parts = [nf.z.den * nf.p * Ni for Ni in numerators]

    candidates = solve_key_equation(A, B, parts, sum_var, inhomogeneous=False)
    best = None
    for f_part, sigmas in candidates:
        built = _build_result(vars, f_part, sigmas, nf, v, sum_var, rec_var)
        if built is None:
            continue
        rec, cert = built
        lead = rec.coeffs[-1]
        score = (0 if len(rec.coeffs) == len(sigmas) else 1,
                 lead.total_degree(), len(lead), rec.render())
        if best is None or score < best[0]:
            best = (score, rec, cert)
    if best is None:
        return None
    return best[1], best[2]


def _build_result(vars, f_part, sigmas, nf, v, sum_var, rec_var):
    # clear denominators: sigmas are RatFuncs in the coefficient field
    common = MultiPoly.const(vars, 1)
    for s in sigmas:
        common = poly_lcm(common, s.den)
    coeffs = [s.num * poly_div_exact(common, s.den) for s in sigmas]
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    if len(coeffs) < 2:
        return None
    scale = RatFunc(common)
    rec = recurrence_normalize(Recurrence(rec_var, tuple(coeffs)))
    # certificate R = r * f / (p * v), with f rescaled like the sigmas
    f = RatFunc.from_scalar(vars, 0)
    power = RatFunc.from_scalar(vars, 1)
    x = RatFunc.var(vars, sum_var)
    for c in f_part:
        f = f + c * power
        power = power * x
    f = f * scale
    R = RatFunc(nf.r) * f / (RatFunc(nf.p) * RatFunc(v))
    # the normalization above rescaled sigma by a further constant; recompute
    # the exact factor between the cleared sigmas and the canonical recurrence
    for orig, final in zip(coeffs, rec.coeffs):
        if not orig.is_zero():
            factor = RatFunc(final) / RatFunc(orig)
            R = R * factor
            break
    return rec, Certificate(R, sum_var, rec_var)


def verify_certificate(F: TermExpr, rec: Recurrence, cert: Certificate):
    """Check sum_i sigma_i(n) F(n+i,k)/F(n,k) = R(n,k+1) a(k) - R(n,k) exactly.

    Returns (ok, residual) where residual is the nonzero difference on failure.
    """
    a = shift_ratio(F, cert.sum_var)
    b = cross_ratios(F, cert.sum_var, cert.rec_var, rec.order)
    lhs = RatFunc.from_scalar(F.vars, 0)
    for sigma, bi in zip(rec.coeffs, b):
        lhs = lhs + RatFunc(sigma) * bi
    rhs = cert.R.shift(cert.sum_var, 1) * a - cert.R
    residual = lhs - rhs
    return residual.is_zero(), residual
