"""Exact linear solving over the field of rational functions.

Forward elimination is fraction-free on denominator-cleared polynomial rows,
stripping each new row's content (which contains the Bareiss divisor) to keep
intermediate entries small.  Back substitution runs in RatFunc arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .poly import MultiPoly, poly_div_exact, poly_gcd, poly_lcm
from .ratfunc import RatFunc


@dataclass
class LinSolveResult:
    status: str  # "unique" | "underdetermined" | "inconsistent"
    solution: list[RatFunc] | None = None
    nullspace: list[list[RatFunc]] = field(default_factory=list)


def _to_poly_rows(rows, rhs):
    """Clear denominators rowwise; returns polynomial rows with rhs appended."""
    out = []
    for row, b in zip(rows, rhs):
        entries = [e if isinstance(e, RatFunc) else RatFunc(e) for e in row]
        entries.append(b if isinstance(b, RatFunc) else RatFunc(b))
        vars = entries[0].vars
        common = MultiPoly.const(vars, 1)
        for e in entries:
            if not e.den.is_const():
                common = poly_lcm(common, e.den)
        prow = []
        for e in entries:
            scaled = e.num * poly_div_exact(common, e.den)
            prow.append(scaled)
        out.append(_strip_content(prow))
    return out


def _strip_content(row: list[MultiPoly]) -> list[MultiPoly]:
    nonzero = [p for p in row if not p.is_zero()]
    if not nonzero:
        return row
    # rational content first (cheap), then polynomial content
    scale = None
    for p in nonzero:
        c = p.rational_content()
        scale = c if scale is None else _frac_gcd(scale, c)
    g = None
    for p in sorted(nonzero, key=len):
        g = p if g is None else poly_gcd(g, p)
        if g.is_const():
            g = None
            break
    out = []
    for p in row:
        if p.is_zero():
            out.append(p)
            continue
        if g is not None:
            p = poly_div_exact(p, g)
        if scale is not None and scale != 1:
            p = p * (1 / scale)
        out.append(p)
    # normalize sign by first nonzero entry
    from .scalars import scalar_sign

    for p in out:
        if not p.is_zero():
            if scalar_sign(p.lead()[1]) < 0:
                out = [-q for q in out]
            break
    return out


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    from math import gcd, lcm

    a, b = abs(Fraction(a)), abs(Fraction(b))
    return Fraction(gcd(a.numerator, b.numerator), lcm(a.denominator, b.denominator))


def linsolve(rows: list[list], rhs: list) -> LinSolveResult:
    """Solve matrix * x = rhs exactly.

    Entries may be MultiPoly or RatFunc over a shared variable table.
    Underdetermined systems return a particular solution (free variables set
    to zero) plus a nullspace basis; inconsistency is a legal result.
    """
    if not rows:
        return LinSolveResult("underdetermined", [], [])
    ncols = len(rows[0])
    mat = _to_poly_rows(rows, rhs)
    nrows = len(mat)
    vars = mat[0][0].vars

    # one-step Bareiss: entries stay minors of the prepared matrix, so the
    # division by the previous pivot is exact and growth is linear per step
    piv_cols: list[int] = []
    prev = MultiPoly.const(vars, 1)
    r = 0
    for col in range(ncols):
        best = None
        for i in range(r, nrows):
            if not mat[i][col].is_zero():
                size = len(mat[i][col])
                if best is None or size < best[0]:
                    best = (size, i)
        if best is None:
            continue
        i = best[1]
        if i != r:
            mat[r], mat[i] = mat[i], mat[r]
        piv = mat[r][col]
        one = prev.is_const() and prev.const_value() == 1
        for i in range(r + 1, nrows):
            factor = mat[i][col]
            if factor.is_zero():
                row = [piv * mat[i][j] for j in range(ncols + 1)]
            else:
                row = [piv * mat[i][j] - factor * mat[r][j] for j in range(ncols + 1)]
            if not one:
                row = [poly_div_exact(p, prev) if not p.is_zero() else p for p in row]
            mat[i] = row
        prev = piv
        piv_cols.append(col)
        r += 1
        if r == nrows:
            break

    rank = len(piv_cols)
    # consistency: a zero coefficient row with nonzero rhs entry
    for i in range(rank, nrows):
        if all(mat[i][j].is_zero() for j in range(ncols)) and not mat[i][ncols].is_zero():
            return LinSolveResult("inconsistent")

    free_cols = [c for c in range(ncols) if c not in piv_cols]

    def back_substitute(rhs_col: list[RatFunc], free_values: dict[int, RatFunc]):
        sol: list[RatFunc] = [RatFunc.from_scalar(vars, 0)] * ncols
        for c, v in free_values.items():
            sol[c] = v
        for i in range(rank - 1, -1, -1):
            c = piv_cols[i]
            acc = rhs_col[i]
            for j in range(c + 1, ncols):
                if not mat[i][j].is_zero():
                    acc = acc - RatFunc(mat[i][j]) * sol[j]
            sol[c] = acc / RatFunc(mat[i][c])
        return sol

    rhs_ratfuncs = [RatFunc(mat[i][ncols]) for i in range(rank)]
    particular = back_substitute(
        rhs_ratfuncs, {c: RatFunc.from_scalar(vars, 0) for c in free_cols}
    )

    nullspace = []
    zero_rhs = [RatFunc.from_scalar(vars, 0)] * rank
    for f in free_cols:
        values = {c: RatFunc.from_scalar(vars, 1 if c == f else 0) for c in free_cols}
        nullspace.append(back_substitute(zero_rhs, values))

    status = "unique" if not free_cols else "underdetermined"
    return LinSolveResult(status, particular, nullspace)
