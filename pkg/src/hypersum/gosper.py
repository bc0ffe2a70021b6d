"""Gosper's algorithm for indefinite hypergeometric summation.

The normal form writes a shift ratio as z * (p(k+1)/p(k)) * (q(k)/r(k+1))
with gcd(q(k), r(k+j)) = 1 for every integer j >= 0; the key equation
q(k)*f(k+1) - r(k)*f(k) = p(k) is solved by degree-bounded undetermined
coefficients.  The parameterized variant (unknown multiples of several
right-hand sides) is what creative telescoping calls into.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import linsolve
from .poly import (MultiPoly, content_primitive, poly_div_exact, poly_gcd,
                   univar_rational_roots)
from .ratfunc import RatFunc
from .terms import TermExpr, shift_ratio


class GosperError(ValueError):
    pass


@dataclass
class GosperForm:
    z: RatFunc  # constant in the summation variable (parameters allowed)
    p: MultiPoly
    q: MultiPoly
    r: MultiPoly
    var: str

    def reconstruct(self) -> RatFunc:
        """z * p(k+1) q(k) / (p(k) r(k+1)); must equal the input ratio."""
        k = self.var
        return (self.z
                * RatFunc(self.p.shift(k, 1) * self.q)
                / RatFunc(self.p * self.r.shift(k, 1)))


def _dispersion_candidates(q: MultiPoly, r: MultiPoly, var: str) -> list[int]:
    """Nonnegative integers j that may satisfy gcd(q(k), r(k+j)) != 1.

    Equivalently the nonnegative integer roots of Res_k(q(k), r(k+j)).  The
    parameters are specialized preserving leading coefficients (so no
    candidate is lost); candidates come from integer differences of rational
    roots, plus integer roots of the resultant of the rootless remainders.
    The caller confirms every candidate with a symbolic gcd.
    """
    if q.degree_in(var) == 0 or r.degree_in(var) == 0:
        return []
    others = [v for v in q.vars if v != var
              and (q.degree_in(v) > 0 or r.degree_in(v) > 0)]
    qq, rr = q, r
    if others:
        from .poly import pick_specialization

        avoid = [q.lead_coeff_in(var), r.lead_coeff_in(var)]
        point = pick_specialization(others, avoid)
        for v, val in point.items():
            qq = qq.subst_scalar(v, val)
            rr = rr.subst_scalar(v, val)
    # quadratic scalars: pass to the rational norm (a root superset)
    from .poly import conj_poly
    from .scalars import Quad

    if any(isinstance(c, Quad) for c in qq.terms.values()):
        qq = qq * conj_poly(qq)
    if any(isinstance(c, Quad) for c in rr.terms.values()):
        rr = rr * conj_poly(rr)
    q_roots, q_rem = univar_rational_roots(qq, var)
    r_roots, r_rem = univar_rational_roots(rr, var)
    cands: set[int] = set()
    for rho_q, _ in q_roots:
        for rho_r, _ in r_roots:
            # common root k0 of q(k) and r(k+j) needs k0 = rho_q, k0 + j = rho_r
            diff = rho_r - rho_q
            if diff.denominator == 1 and diff >= 0:
                cands.add(int(diff))
    if q_rem.degree_in(var) > 0 and r_rem.degree_in(var) > 0:
        cands.update(_remainder_dispersion(q_rem, r_rem, var))
    return sorted(cands)


def _remainder_dispersion(q_rem: MultiPoly, r_rem: MultiPoly, var: str) -> list[int]:
    """Integer roots of Res_v(q(v), r(v+j)) for rational-rootless q, r."""
    from .poly import resultant

    fresh = ("_v", "_j")

    def lift(p):
        coeffs = [MultiPoly.const(fresh, c.const_value())
                  for c in p.univar_coeffs(var)]
        return MultiPoly.from_univar("_v", coeffs)

    qf = lift(q_rem)
    rf = lift(r_rem)
    image = MultiPoly.var(fresh, "_v") + MultiPoly.var(fresh, "_j")
    rf = rf.subst_poly("_v", image)
    res = resultant(qf, rf, "_v")
    if res.is_zero():
        raise GosperError("degenerate dispersion resultant")
    if res.degree_in("_j") == 0:
        return []
    roots, _ = univar_rational_roots(res, "_j")
    return [int(rho) for rho, _ in roots if rho.denominator == 1 and rho >= 0]


def gosper_normal_form(ratio: RatFunc, var: str) -> GosperForm:
    """Normal form of a nonzero shift ratio; deterministic in the shift order."""
    if ratio.is_zero():
        raise GosperError("zero ratio has no normal form")
    vars = ratio.vars
    one = MultiPoly.const(vars, 1)

    def split(poly):
        cont, prim = content_primitive(poly, var)
        s, prim = prim.canonical()
        return RatFunc(cont) * RatFunc.from_scalar(vars, 1) * s, prim

    zn, q = split(ratio.num)
    zd, r0 = split(ratio.den)
    z = zn / zd
    r = r0.shift(var, -1)
    p = one
    for j in _dispersion_candidates(q, r, var):
        g = poly_gcd(q, r.shift(var, j))
        if g.degree_in(var) == 0:
            continue
        q = poly_div_exact(q, g)
        r = poly_div_exact(r, g.shift(var, -j))
        for i in range(1, j + 1):
            p = p * g.shift(var, -i)
    # divisions may have left fresh parameter content; fold it into z
    zq, q = split(q)
    zr, r = split(r)
    z = z * zq / zr
    p = p.normalized()
    return GosperForm(z, p, q, r, var)


def _degree_bound(A: MultiPoly, B: MultiPoly, deg_rhs: int, var: str) -> int:
    """Largest admissible deg f for A(k) f(k+1) - B(k) f(k) = rhs.

    Returns -1 when no polynomial degree is admissible (f = 0 is still a
    candidate in the parameterized setting).
    """
    N, M = A.degree_in(var), B.degree_in(var)
    candidates: set[int] = set()
    if N != M or A.lead_coeff_in(var) != B.lead_coeff_in(var):
        candidates.add(deg_rhs - max(N, M))
    elif N == 0:
        candidates.add(deg_rhs + 1)
        candidates.add(0)
    else:
        candidates.add(deg_rhs - N + 1)
        diff = B.coeff_in(var, N - 1) - A.coeff_in(var, N - 1)
        lead = A.lead_coeff_in(var)
        if diff.is_zero():
            candidates.add(0)
        else:
            quo = _exact_constant_ratio(diff, lead)
            if quo is not None and quo.denominator == 1 and quo >= 0:
                candidates.add(int(quo))
    valid = [c for c in candidates if c >= 0]
    return max(valid) if valid else -1


def _exact_constant_ratio(p: MultiPoly, q: MultiPoly):
    """p/q as a rational constant, or None."""
    from .poly import try_div_exact

    quo = try_div_exact(p, q)
    if quo is not None and quo.is_const():
        c = quo.const_value()
        if isinstance(c, Fraction) or isinstance(c, int):
            return Fraction(c)
    return None


def solve_key_equation(A: MultiPoly, B: MultiPoly, rhs_parts: list[MultiPoly],
                       var: str, inhomogeneous: bool):
    """Solve A f(k+1) - B f(k) = sum_i sigma_i * rhs_parts[i].

    With ``inhomogeneous`` there is a single right-hand side and no sigma
    unknowns.  Returns (f_coeffs, sigmas) as RatFunc lists, or None; in the
    homogeneous case every nullspace candidate is returned.
    """
    vars = A.vars
    K = max((p.degree_in(var) for p in rhs_parts if not p.is_zero()), default=0)
    e = _degree_bound(A, B, K, var)
    nf = e + 1  # number of f coefficients
    ns = 0 if inhomogeneous else len(rhs_parts)

    x = MultiPoly.var(vars, var)
    xp1 = x + 1
    acc_shift = MultiPoly.const(vars, 1)
    acc_plain = MultiPoly.const(vars, 1)
    col_polys = []
    for c in range(nf):
        col_polys.append(A * acc_shift - B * acc_plain)
        acc_shift = acc_shift * xp1
        acc_plain = acc_plain * x

    max_deg = K
    for p in col_polys:
        max_deg = max(max_deg, p.degree_in(var))

    def coeff_rows(poly):
        cs = poly.univar_coeffs(var)
        cs += [MultiPoly.zero(vars)] * (max_deg + 1 - len(cs))
        return cs

    columns = [coeff_rows(p) for p in col_polys]
    if inhomogeneous:
        rhs_col = coeff_rows(rhs_parts[0])
        rows = [[columns[c][d] for c in range(nf)] for d in range(max_deg + 1)]
        rhs = [rhs_col[d] for d in range(max_deg + 1)]
        res = linsolve(rows, rhs)
        if res.status == "inconsistent":
            return None
        return res.solution[:nf], []

    sigma_cols = [coeff_rows(-p) for p in rhs_parts]
    rows = []
    for d in range(max_deg + 1):
        rows.append([columns[c][d] for c in range(nf)]
                    + [sigma_cols[i][d] for i in range(ns)])
    zero = MultiPoly.zero(vars)
    res = linsolve(rows, [zero] * (max_deg + 1))
    out = []
    for vec in res.nullspace:
        f_part = vec[:nf]
        s_part = vec[nf:]
        if any(not s.is_zero() for s in s_part):
            out.append((f_part, s_part))
    return out


def gosper_key_solve(p: MultiPoly, q: MultiPoly, r: MultiPoly, var: str):
    """Polynomial f with q(k) f(k+1) - r(k) f(k) = p(k), or None."""
    solved = solve_key_equation(q, r, [p], var, inhomogeneous=True)
    if solved is None:
        return None
    f_coeffs, _ = solved
    return f_coeffs


def _assemble_poly(coeffs: list[RatFunc], var: str) -> RatFunc:
    if not coeffs:
        return RatFunc.from_scalar((), 0)
    vars = coeffs[0].vars
    x = RatFunc.var(vars, var)
    total = RatFunc.from_scalar(vars, 0)
    power = RatFunc.from_scalar(vars, 1)
    for c in coeffs:
        total = total + c * power
        power = power * x
    return total


def gosper_solve(ratio: RatFunc, var: str) -> RatFunc | None:
    """Antidifference certificate R for a term with the given shift ratio.

    If returned, R satisfies R(k+1)*ratio(k) - R(k) = 1 exactly, so that
    G = R*t telescopes: G(k+1) - G(k) = t(k).  None means the term is
    certified not Gosper-summable.
    """
    nf = gosper_normal_form(ratio, var)
    A = nf.q * nf.z.num
    B = nf.r * nf.z.den
    C = nf.p * nf.z.den
    f_coeffs = gosper_key_solve(C, A, B, var)
    if f_coeffs is None:
        return None
    f = _assemble_poly(f_coeffs, var)
    if f.is_zero():
        return None
    return RatFunc(nf.r) * f / RatFunc(nf.p)


def gosper_sum_term(t: TermExpr, var: str) -> RatFunc | None:
    """Gosper certificate for a term expression (None when not summable)."""
    return gosper_solve(shift_ratio(t, var), var)
