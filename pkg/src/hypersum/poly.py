"""Sparse multivariate polynomials over exact scalars.

A :class:`MultiPoly` maps exponent vectors (one slot per variable of its
variable table) to nonzero coefficients.  Coefficients are ``int``,
``Fraction`` or :class:`~hypersum.scalars.Quad`.  Canonical form clears
denominators to integer content 1 and makes the graded-lexicographic leading
coefficient positive (positive rational part in the quadratic case).

This module also provides gcd (subresultant polynomial remainder sequences),
content/primitive splitting, resultants, and the canonical text rendering
shared by the CLI.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .scalars import (
    Quad,
    Rational,
    ScalarError,
    _frac,
    conj,
    is_rational,
    render_scalar,
    scalar_inverse,
    scalar_sign,
)


class ExactDivisionError(ArithmeticError):
    """Raised when an exact polynomial division leaves a remainder."""


class VarTable:
    """Ordered variable names with summation / recurrence / parameter roles."""

    __slots__ = ("names", "sum_var", "rec_var", "params")

    def __init__(self, sum_var: str | None, rec_var: str | None, params=()):
        names = []
        if sum_var:
            names.append(sum_var)
        if rec_var:
            names.append(rec_var)
        for p in params:
            if p in names:
                raise ValueError(f"duplicate variable {p!r}")
            names.append(p)
        self.names = tuple(names)
        self.sum_var = sum_var
        self.rec_var = rec_var
        self.params = tuple(p for p in params)

    def __repr__(self):
        return f"VarTable(sum={self.sum_var}, rec={self.rec_var}, params={self.params})"


def _grlex_key(exp):
    return (sum(exp), exp)


class MultiPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple[str, ...], terms: dict | None = None):
        self.vars = vars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, vars):
        return cls(vars, {})

    @classmethod
    def const(cls, vars, c):
        p = cls(vars)
        if c:
            p.terms[(0,) * len(vars)] = c
        return p

    @classmethod
    def var(cls, vars, name, power: int = 1):
        i = vars.index(name)
        e = tuple(power if j == i else 0 for j in range(len(vars)))
        return cls(vars, {e: 1})

    def one_like(self):
        return MultiPoly.const(self.vars, 1)

    # -- basic queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def const_value(self):
        if not self.terms:
            return Fraction(0)
        (e, c), = self.terms.items()
        if any(e):
            raise ValueError("not a constant polynomial")
        return c

    def degree_in(self, var: str) -> int:
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def active_vars(self) -> list[str]:
        used = [False] * len(self.vars)
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used[i] = True
        return [v for v, u in zip(self.vars, used) if u]

    def lead(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction, Quad)):
            return (self - MultiPoly.const(self.vars, other)).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError(f"mixed variable tables {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Quad)):
            other = MultiPoly.const(self.vars, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        p = MultiPoly(self.vars)
        p.terms = terms
        return p

    __radd__ = __add__

    def __neg__(self):
        p = MultiPoly(self.vars)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Quad)):
            other = MultiPoly.const(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Quad)):
            if not other:
                return MultiPoly.zero(self.vars)
            p = MultiPoly(self.vars)
            p.terms = {e: c * other for e, c in self.terms.items()}
            return p
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        terms: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        p = MultiPoly(self.vars)
        p.terms = terms
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = MultiPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- substitution and evaluation ----------------------------------------

    def subst_scalar(self, var: str, value):
        """Replace var by an exact scalar value."""
        i = self.vars.index(var)
        terms: dict = {}
        powers = {0: 1}
        for e, c in self.terms.items():
            k = e[i]
            if k not in powers:
                powers[k] = value**k
            ne = e[:i] + (0,) + e[i + 1 :]
            s = terms.get(ne, 0) + c * powers[k]
            if s:
                terms[ne] = s
            else:
                terms.pop(ne, None)
        p = MultiPoly(self.vars)
        p.terms = terms
        return p

    def subst_poly(self, var: str, value: "MultiPoly"):
        """Replace var by a polynomial (Horner in var)."""
        self._check(value)
        i = self.vars.index(var)
        coeffs = self.univar_coeffs(var)
        result = MultiPoly.zero(self.vars)
        for d in range(len(coeffs) - 1, -1, -1):
            result = result * value + coeffs[d]
        return result

    def shift(self, var: str, delta):
        """var -> var + delta for a rational delta."""
        if not delta:
            return self
        image = MultiPoly.var(self.vars, var) + MultiPoly.const(self.vars, delta)
        return self.subst_poly(var, image)

    def eval_all(self, assignment: dict):
        total = Fraction(0)
        idx = [assignment[v] for v in self.vars]
        for e, c in self.terms.items():
            val = c
            for x, k in zip(idx, e):
                if k:
                    val = val * x**k
            total = total + val
        return total

    def derivative(self, var: str):
        i = self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                s = terms.get(ne, 0) + c * e[i]
                if s:
                    terms[ne] = s
        p = MultiPoly(self.vars)
        p.terms = terms
        return p

    # -- univariate views ----------------------------------------------------

    def univar_coeffs(self, var: str) -> list["MultiPoly"]:
        """Coefficients [c_0, ..., c_d] of powers of var (polys in the rest)."""
        i = self.vars.index(var)
        d = self.degree_in(var)
        buckets: list[dict] = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            ne = e[:i] + (0,) + e[i + 1 :]
            buckets[e[i]][ne] = c
        out = []
        for b in buckets:
            p = MultiPoly(self.vars)
            p.terms = b
            out.append(p)
        return out

    @staticmethod
    def from_univar(var: str, coeffs: list["MultiPoly"]):
        if not coeffs:
            raise ValueError("empty coefficient list")
        vars = coeffs[0].vars
        i = vars.index(var)
        terms: dict = {}
        for k, p in enumerate(coeffs):
            for e, c in p.terms.items():
                ne = e[:i] + (e[i] + k,) + e[i + 1 :]
                terms[ne] = c
        out = MultiPoly(vars)
        out.terms = terms
        return out

    def lead_coeff_in(self, var: str) -> "MultiPoly":
        coeffs = self.univar_coeffs(var)
        return coeffs[-1]

    def coeff_in(self, var: str, power: int) -> "MultiPoly":
        coeffs = self.univar_coeffs(var)
        if power >= len(coeffs):
            return MultiPoly.zero(self.vars)
        return coeffs[power]

    # -- normalization -------------------------------------------------------

    def rational_content(self) -> Fraction:
        """Positive rational c with self/c having integer, gcd-1 coefficients."""
        nums: list[int] = []
        dens: list[int] = []
        for c in self.terms.values():
            if isinstance(c, Quad):
                for f in (c.u, c.v):
                    if f:
                        nums.append(f.numerator)
                        dens.append(f.denominator)
            else:
                f = _frac(c)
                nums.append(f.numerator)
                dens.append(f.denominator)
        if not nums:
            return Fraction(1)
        g = 0
        for n in nums:
            g = gcd(g, n)
        m = 1
        for d in dens:
            m = lcm(m, d)
        return Fraction(g, m)

    def canonical(self):
        """(scalar, primitive) with self = scalar * primitive.

        The primitive part has integer content 1 and positive graded-lex
        leading coefficient (positive rational part for quadratic scalars).
        """
        if not self.terms:
            return Fraction(1), self
        c = self.rational_content()
        _, lead = self.lead()
        if scalar_sign(lead) < 0:
            c = -c
        inv = 1 / c
        p = MultiPoly(self.vars)
        p.terms = {e: coef * inv for e, coef in self.terms.items()}
        return c, p

    def normalized(self) -> "MultiPoly":
        return self.canonical()[1]

    # -- rendering -----------------------------------------------------------

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"MultiPoly({render_poly(self)})"


def poly_arith(p: MultiPoly, q: MultiPoly, op: str) -> MultiPoly:
    """Named add/sub/mul entry point over a shared variable table."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def render_poly(p: MultiPoly) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for e in sorted(p.terms, key=_grlex_key, reverse=True):
        c = p.terms[e]
        mono = "*".join(
            v if k == 1 else f"{v}^{k}" for v, k in zip(p.vars, e) if k
        )
        if isinstance(c, Quad):
            cs = f"({render_scalar(c)})"
            text = f"{cs}*{mono}" if mono else cs
            sign = "+"
        else:
            c = _frac(c)
            sign = "-" if c < 0 else "+"
            c = abs(c)
            if mono:
                text = mono if c == 1 else f"{render_scalar(c)}*{mono}"
            else:
                text = render_scalar(c)
        if not pieces:
            pieces.append(text if sign == "+" else f"-{text}")
        else:
            pieces.append(f"{sign}{text}")
    return "".join(pieces)


# ---------------------------------------------------------------------------
# Exact division, pseudo-remainders, gcd
# ---------------------------------------------------------------------------


def poly_div_exact(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """p/q when the division is exact; raises ExactDivisionError otherwise."""
    p._check(q)
    if q.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if q.is_const():
        inv = scalar_inverse(q.const_value())
        return p * inv
    qe, qc = q.lead()
    qc_inv = scalar_inverse(qc)
    rem = MultiPoly(p.vars)
    rem.terms = dict(p.terms)
    quot: dict = {}
    while rem.terms:
        re, rc = rem.lead()
        de = tuple(a - b for a, b in zip(re, qe))
        if any(x < 0 for x in de):
            raise ExactDivisionError("not divisible")
        coef = rc * qc_inv
        quot[de] = coef
        # rem -= coef * x^de * q
        for e2, c2 in q.terms.items():
            e = tuple(a + b for a, b in zip(de, e2))
            s = rem.terms.get(e, 0) - coef * c2
            if s:
                rem.terms[e] = s
            else:
                rem.terms.pop(e, None)
    out = MultiPoly(p.vars)
    out.terms = quot
    return out


def try_div_exact(p: MultiPoly, q: MultiPoly) -> MultiPoly | None:
    try:
        return poly_div_exact(p, q)
    except ExactDivisionError:
        return None


def pseudo_rem(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """prem(p, q) in var: lc(q)^(dp-dq+1) * p = quot*q + rem with deg rem < deg q."""
    dp, dq = p.degree_in(var), q.degree_in(var)
    if dq == 0:
        return MultiPoly.zero(p.vars)
    lc_q = q.lead_coeff_in(var)
    x = MultiPoly.var(p.vars, var)
    rem = p
    n = dp - dq + 1
    while not rem.is_zero() and rem.degree_in(var) >= dq:
        dr = rem.degree_in(var)
        lc_r = rem.lead_coeff_in(var)
        rem = rem * lc_q - q * lc_r * x ** (dr - dq)
        n -= 1
    if n > 0:
        rem = rem * lc_q**n
    return rem


def content_primitive(p: MultiPoly, var: str) -> tuple[MultiPoly, MultiPoly]:
    """p = content * primitive w.r.t. var; content is var-free."""
    if p.is_zero():
        return MultiPoly.const(p.vars, 1), p
    coeffs = [c for c in p.univar_coeffs(var) if not c.is_zero()]
    cont = coeffs[0]
    for c in coeffs[1:]:
        if cont.is_const():
            break
        cont = poly_gcd(cont, c)
    if cont.is_const():
        cont = MultiPoly.const(p.vars, 1)
        return cont, p
    sc, cont = cont.canonical()
    return cont, poly_div_exact(p, cont)


def poly_content(p: MultiPoly, var: str) -> tuple[MultiPoly, MultiPoly]:
    """(content, primitive part) of p with respect to var."""
    return content_primitive(p, var)


def _gcd_pick_main(p: MultiPoly, q: MultiPoly) -> str | None:
    """Variable of lowest degree that is active in both operands."""
    best = None
    for v in p.vars:
        dp, dq = p.degree_in(v), q.degree_in(v)
        if dp == 0 or dq == 0:
            continue
        d = max(dp, dq)
        if best is None or d < best[0]:
            best = (d, v)
    return best[1] if best else None


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Greatest common divisor, canonicalized (content 1, positive lead)."""
    if p.is_zero():
        return q.normalized()
    if q.is_zero():
        return p.normalized()
    if p.is_const() or q.is_const():
        return MultiPoly.const(p.vars, 1)
    if p.terms == q.terms:
        return p.normalized()
    main = _gcd_pick_main(p, q)
    if main is None:
        # no shared active variable: any common divisor is a unit
        return MultiPoly.const(p.vars, 1)
    if _rational_coeffs(p) and _rational_coeffs(q):
        g = _heuristic_gcd(p, q)
        if g is not None:
            # rigor: a verified divisor may miss factors shared by the
            # cofactors; peel them off until the cofactors are coprime
            while not g.is_const():
                extra = poly_gcd(poly_div_exact(p, g), poly_div_exact(q, g))
                if extra.is_const():
                    break
                g = g * extra
            return g.normalized()
    cp, pp = content_primitive(p, main)
    cq, qq = content_primitive(q, main)
    cont = poly_gcd(cp, cq)
    g = _prs_gcd(pp, qq, main)
    return (cont * g).normalized()


def _rational_coeffs(p: MultiPoly) -> bool:
    return all(not isinstance(c, Quad) for c in p.terms.values())


def _int_height(p: MultiPoly) -> int:
    h = 0
    for c in p.terms.values():
        a = abs(int(c)) if isinstance(c, int) else abs(c.numerator)
        if a > h:
            h = a
    return h


def _heuristic_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly | None:
    """Evaluation/reconstruction gcd over the integers, verified by division.

    Both inputs are cleared to primitive integer polynomials; the result is
    exact whenever returned (exact division of both inputs is checked), and
    None signals fallback to the remainder-sequence gcd.
    """
    cp = p.rational_content()
    cq = q.rational_content()
    P = _as_int_poly(p * (1 / cp))
    Q = _as_int_poly(q * (1 / cq))
    try:
        g, _, _ = _heu_gcd_rec(P, Q, 0)
    except _HeuristicFailure:
        return None
    return g


class _HeuristicFailure(Exception):
    pass


def _heu_gcd_rec(f: MultiPoly, g: MultiPoly, depth: int):
    """(gcd, f//gcd, g//gcd) for integer polynomials; divisions verified.

    Mirrors the classic HEUGCD structure: the common integer ground content
    is extracted up front (so the gcd of the reduced pair is primitive and
    primitivizing interpolated candidates is safe) and multiplied back in.
    """
    if depth > 12:
        raise _HeuristicFailure
    vars = f.vars
    active = [v for v in vars if f.degree_in(v) > 0 or g.degree_in(v) > 0]
    if not active:
        a = int(f.const_value())
        b = int(g.const_value())
        h = gcd(abs(a), abs(b))
        return (MultiPoly.const(vars, h),
                MultiPoly.const(vars, a // h if h else 0),
                MultiPoly.const(vars, b // h if h else 0))
    var = active[0]
    cf = int(f.rational_content())
    cg = int(g.rational_content())
    ground = gcd(cf, cg)
    if ground > 1:
        f = _as_int_poly(f * Fraction(1, ground))
        g = _as_int_poly(g * Fraction(1, ground))

    f_norm = _int_height(f)
    g_norm = _int_height(g)
    b_bound = 2 * min(f_norm, g_norm) + 29
    lc_f = abs(_lead_int(f))
    lc_g = abs(_lead_int(g))
    xi = max(min(b_bound, 99 * _isqrt(b_bound)),
             2 * min(f_norm // lc_f, g_norm // lc_g) + 4)
    xi = max(xi, 4)

    def attempt(cand):
        cff = try_div_exact(f, cand)
        if cff is None:
            return None
        cfg = try_div_exact(g, cand)
        if cfg is None:
            return None
        try:
            return _as_int_poly(cff), _as_int_poly(cfg)
        except _HeuristicFailure:
            return None

    for _ in range(6):
        ff = f.subst_scalar(var, xi)
        gg = g.subst_scalar(var, xi)
        if not (ff.is_zero() or gg.is_zero()):
            try:
                h_img, cff_img, cfg_img = _heu_gcd_rec(ff, gg, depth + 1)
            except _HeuristicFailure:
                h_img = None
            if h_img is not None:
                # route 1: the gcd image itself
                cand = _heu_interpolate(h_img, var, xi)
                if not cand.is_zero():
                    cand = _as_int_poly(cand * (1 / cand.rational_content()))
                    ok = attempt(cand)
                    if ok:
                        return cand * ground, ok[0], ok[1]
                # routes 2/3: a cofactor image, divided out of the whole
                for img, whole, other in ((cff_img, f, g), (cfg_img, g, f)):
                    cof = _heu_interpolate(img, var, xi)
                    if cof.is_zero():
                        continue
                    cand = try_div_exact(whole, cof)
                    if cand is None:
                        continue
                    try:
                        cand = _as_int_poly(cand)
                    except _HeuristicFailure:
                        continue
                    if cand.is_zero():
                        continue
                    ok = attempt(cand)
                    if ok:
                        return cand * ground, ok[0], ok[1]
        xi = 73794 * xi * _isqrt(_isqrt(xi)) // 27011
    raise _HeuristicFailure


def _lead_int(p: MultiPoly) -> int:
    c = p.lead()[1]
    v = int(c) if isinstance(c, int) else int(Fraction(c))
    return v if v else 1


def _isqrt(n: int) -> int:
    from math import isqrt

    return max(isqrt(n), 1)


def _heu_interpolate(g: MultiPoly, var: str, xi: int) -> MultiPoly:
    """Recover polynomial digits of g in the balanced base-xi representation."""
    vars = g.vars
    half = xi // 2
    coeffs = []
    current = g
    while not current.is_zero():
        digit_terms = {}
        for e, c in current.terms.items():
            c = int(c)
            r = c % xi
            if r > half:
                r -= xi
            if r:
                digit_terms[e] = r
        digit = MultiPoly(vars)
        digit.terms = digit_terms
        coeffs.append(digit)
        current = (current - digit) * Fraction(1, xi)
        current = _as_int_poly(current)
        if len(coeffs) > 2000:  # safety
            raise _HeuristicFailure
    if not coeffs:
        return MultiPoly.zero(vars)
    return MultiPoly.from_univar(var, coeffs)


def _as_int_poly(p: MultiPoly) -> MultiPoly:
    terms = {}
    for e, c in p.terms.items():
        f = Fraction(c) if not isinstance(c, Fraction) else c
        if f.denominator != 1:
            raise _HeuristicFailure
        terms[e] = int(f)
    out = MultiPoly(p.vars)
    out.terms = terms
    return out


def _prs_gcd(A: MultiPoly, B: MultiPoly, var: str) -> MultiPoly:
    """Subresultant PRS gcd of primitive A, B in var."""
    if A.degree_in(var) < B.degree_in(var):
        A, B = B, A
    g = MultiPoly.const(A.vars, 1)
    h = MultiPoly.const(A.vars, 1)
    while True:
        delta = A.degree_in(var) - B.degree_in(var)
        R = pseudo_rem(A, B, var)
        if R.is_zero():
            _, prim = content_primitive(B, var)
            return prim
        if R.degree_in(var) == 0:
            return MultiPoly.const(A.vars, 1)
        A, B = B, poly_div_exact(R, g * h**delta)
        g = A.lead_coeff_in(var)
        if delta == 0:
            # h unchanged
            pass
        elif delta == 1:
            h = g
        else:
            h = poly_div_exact(g**delta, h ** (delta - 1))


def poly_lcm(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    if p.is_zero() or q.is_zero():
        return MultiPoly.zero(p.vars)
    g = poly_gcd(p, q)
    return (poly_div_exact(p, g) * q).normalized()


def resultant(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Resultant of p and q in var, via Bareiss on the Sylvester matrix."""
    m, n = p.degree_in(var), q.degree_in(var)
    if m == 0 and n == 0:
        return MultiPoly.const(p.vars, 1)
    if p.is_zero() or q.is_zero():
        return MultiPoly.zero(p.vars)
    if m == 0:
        return p**n
    if n == 0:
        return q**m
    pc = p.univar_coeffs(var)
    qc = q.univar_coeffs(var)
    size = m + n
    zero = MultiPoly.zero(p.vars)
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(pc)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(qc)):
            row[i + j] = c
        rows.append(row)
    return _bareiss_det(rows)


def _bareiss_det(mat: list[list[MultiPoly]]) -> MultiPoly:
    n = len(mat)
    vars = mat[0][0].vars
    prev = MultiPoly.const(vars, 1)
    sign = 1
    mat = [row[:] for row in mat]
    for k in range(n - 1):
        if mat[k][k].is_zero():
            for i in range(k + 1, n):
                if not mat[i][k].is_zero():
                    mat[k], mat[i] = mat[i], mat[k]
                    sign = -sign
                    break
            else:
                return MultiPoly.zero(vars)
        piv = mat[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = mat[i][j] * piv - mat[i][k] * mat[k][j]
                mat[i][j] = poly_div_exact(num, prev)
            mat[i][k] = MultiPoly.zero(vars)
        prev = piv
    det = mat[n - 1][n - 1]
    return det if sign > 0 else -det


def poly_sqrt(p: MultiPoly) -> MultiPoly | None:
    """Exact polynomial square root, or None if p is not a perfect square."""
    if p.is_zero():
        return p
    if p.is_const():
        c = p.const_value()
        if isinstance(c, Quad):
            return None
        from .scalars import exact_sqrt_fraction

        r = exact_sqrt_fraction(c) if c >= 0 else None
        return MultiPoly.const(p.vars, r) if r is not None else None
    var = next(v for v in p.vars if p.degree_in(v) > 0)
    d = p.degree_in(var)
    if d % 2:
        return None
    coeffs = p.univar_coeffs(var)
    lead_root = poly_sqrt(coeffs[-1])
    if lead_root is None:
        return None
    half = d // 2
    # long division style: determine root coefficients from the top down
    root = [MultiPoly.zero(p.vars) for _ in range(half + 1)]
    root[half] = lead_root
    two_lead = 2 * lead_root
    for i in range(half - 1, -1, -1):
        # coefficient of var^(i+half) in root^2 must match coeffs[i+half]
        acc = MultiPoly.zero(p.vars)
        for j in range(i + 1, half):
            k = i + half - j
            if half >= k > i:
                acc = acc + root[j] * root[k]
        target = coeffs[i + half] - acc
        ci = try_div_exact(target, two_lead)
        if ci is None:
            return None
        root[i] = ci
    candidate = MultiPoly.from_univar(var, root)
    if candidate * candidate == p:
        return candidate
    if (-candidate) * (-candidate) == p:  # pragma: no cover - same square
        return -candidate
    return None


# ---------------------------------------------------------------------------
# Univariate rational roots (rational root theorem over big integers)
# ---------------------------------------------------------------------------


def conj_poly(p: MultiPoly) -> MultiPoly:
    out = MultiPoly(p.vars)
    out.terms = {e: conj(c) for e, c in p.terms.items()}
    return out


def univar_rational_roots(p: MultiPoly, var: str):
    """All rational roots with multiplicities, plus the rootless cofactor.

    p must be univariate in var with rational coefficients.  Returns
    (roots, remainder) where roots is a list of (Fraction, multiplicity) and
    remainder has no rational roots; p = lc * prod (var - root)^mult * ...
    up to the remainder factor.
    """
    for v in p.vars:
        if v != var and p.degree_in(v) > 0:
            raise ValueError(f"polynomial not univariate in {var}")
    if p.is_zero():
        raise ValueError("zero polynomial")
    c = p.rational_content()
    coeffs = []
    for cp in p.univar_coeffs(var):
        val = cp.const_value() * (1 / c)
        coeffs.append(int(val))
    roots: list[tuple[Fraction, int]] = []
    # deflate powers of var
    v0 = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        v0 += 1
    if v0:
        roots.append((Fraction(0), v0))
    if len(coeffs) <= 1:
        rem = MultiPoly.const(p.vars, 1)
        return roots, rem
    from .scalars import divisors

    c0, cl = abs(coeffs[0]), abs(coeffs[-1])
    num_divs = divisors(c0) if c0 else [0]
    den_divs = divisors(cl)
    seen = set()
    candidates = []
    for n in num_divs:
        for d in den_divs:
            cand = Fraction(n, d)
            if cand not in seen:
                seen.add(cand)
                candidates.append(cand)
                candidates.append(-cand)
    deg = len(coeffs) - 1
    for cand in candidates:
        mult = 0
        while len(coeffs) > 1 and _int_eval_at(coeffs, cand) == 0:
            coeffs = _synthetic_quotient(coeffs, cand)
            mult += 1
        if mult:
            roots.append((cand, mult))
    rem_coeffs = [MultiPoly.const(p.vars, x) for x in coeffs]
    rem = MultiPoly.from_univar(var, rem_coeffs)
    return roots, rem


def _int_eval_at(coeffs: list[int], x: Fraction) -> int:
    """p(n/d) * d^deg, exactly, for an integer coefficient list."""
    n, d = x.numerator, x.denominator
    acc = coeffs[-1]
    power = 1
    for i in range(len(coeffs) - 2, -1, -1):
        power *= d
        acc = acc * n + coeffs[i] * power
    return acc


def _synthetic_quotient(coeffs: list[int], root: Fraction) -> list[int]:
    """coeffs / (var - root) as an integer list (division must be exact)."""
    out = [Fraction(0)] * (len(coeffs) - 1)
    acc = Fraction(0)
    for i in range(len(coeffs) - 1, 0, -1):
        acc = acc * root + coeffs[i]
        out[i - 1] = acc
    g = 0
    m = 1
    for f in out:
        g = gcd(g, f.numerator)
        m = lcm(m, f.denominator)
    ints = [int(f * m) for f in out]
    if m != 1:
        gg = 0
        for x in ints:
            gg = gcd(gg, x)
        if gg > 1:
            ints = [x // gg for x in ints]
    return ints


# ---------------------------------------------------------------------------
# Deterministic specialization points
# ---------------------------------------------------------------------------

SPECIALIZATION_SEQUENCE = (
    Fraction(2), Fraction(3), Fraction(5), Fraction(7), Fraction(11),
    Fraction(13), Fraction(17), Fraction(19), Fraction(23), Fraction(29),
    Fraction(31), Fraction(37), Fraction(41), Fraction(43), Fraction(47),
)


def pick_specialization(fix_vars, avoid: list[MultiPoly], offset: int = 0) -> dict:
    """Deterministic rational values for fix_vars with every poly in `avoid`
    nonzero at the chosen point.  Values come from a fixed prime sequence.
    """
    seq = SPECIALIZATION_SEQUENCE
    for attempt in range(200):
        assignment = {}
        for i, v in enumerate(fix_vars):
            base = seq[(i + offset) % len(seq)]
            assignment[v] = base + attempt
        ok = True
        for p in avoid:
            val = p.eval_all({w: assignment.get(w, Fraction(0)) for w in p.vars})
            if not val:
                ok = False
                break
        if ok:
            return assignment
    raise RuntimeError("could not find a nondegenerate specialization")
