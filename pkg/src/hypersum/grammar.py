"""Parser for the term grammar (the CLI input syntax).

Grammar: ``hyperterm([p1,...],[q1,...], arg, var)``, ``poch(expr, expr)``,
``binomial(expr, expr)``, ``factorial(expr)`` or ``expr!``, ``(-1)^expr``,
``sqrt(int)``, rational literals, ``+ - * / ^`` and parentheses; whitespace
insensitive.  Precedence: ``^`` > unary minus > ``*``,``/`` > ``+``,``-``;
``^`` is right-associative.  Errors carry the offending position.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import MultiPoly, VarTable
from .ratfunc import RatFunc
from .scalars import Quad, _frac, sqrt_scalar
from .terms import (
    AffineForm,
    Fact,
    HyperTerm,
    Poch,
    PowFactor,
    QuadExtElem,
    RatFactor,
    SignPow,
    TermExpr,
    binomial_factors,
    canonical_radicand,
    hyperterm_factors,
    hyperterm_to_termexpr,
)
from .zeilberger import Recurrence

FUNCTION_NAMES = {"hyperterm", "poch", "pochhammer", "binomial", "factorial", "sqrt", "S"}


class GrammarError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")


# -- tokenizer ---------------------------------------------------------------


@dataclass
class Token:
    kind: str  # "int" | "name" | "op" | "end"
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^()[],!=":
            tokens.append(Token("op", ch, i))
            i += 1
            continue
        raise GrammarError(f"unexpected character {ch!r}", i, text)
    tokens.append(Token("end", "", n))
    return tokens


# -- AST ----------------------------------------------------------------------


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, value: str) -> Token:
        t = self.next()
        if t.value != value:
            raise GrammarError(f"expected {value!r}, found {t.value!r}", t.pos, self.text)
        return t

    def parse_expression(self):
        node = self.parse_sum()
        return node

    def parse_sum(self):
        node = self.parse_product()
        while self.peek().value in ("+", "-"):
            op = self.next().value
            rhs = self.parse_product()
            node = (op, node, rhs)
        return node

    def parse_product(self):
        node = self.parse_unary()
        while self.peek().value in ("*", "/"):
            op = self.next().value
            rhs = self.parse_unary()
            node = (op, node, rhs)
        return node

    def parse_unary(self):
        if self.peek().value == "-":
            self.next()
            return ("neg", self.parse_unary())
        if self.peek().value == "+":
            self.next()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_postfix()
        if self.peek().value == "^":
            self.next()
            # right-associative; exponents may carry a unary sign
            if self.peek().value == "-":
                self.next()
                exp = ("neg", self.parse_power())
            else:
                exp = self.parse_power()
            return ("^", base, exp)
        return base

    def parse_postfix(self):
        node = self.parse_atom()
        while self.peek().value == "!":
            self.next()
            node = ("call", "factorial", [node])
        return node

    def parse_atom(self):
        t = self.next()
        if t.kind == "int":
            return ("int", int(t.value))
        if t.kind == "name":
            if self.peek().value == "(":
                self.next()
                args = []
                if self.peek().value != ")":
                    args.append(self.parse_argument())
                    while self.peek().value == ",":
                        self.next()
                        args.append(self.parse_argument())
                self.expect(")")
                return ("call", t.value, args)
            return ("name", t.value, t.pos)
        if t.value == "(":
            node = self.parse_expression()
            self.expect(")")
            return node
        if t.value == "[":
            items = []
            if self.peek().value != "]":
                items.append(self.parse_expression())
                while self.peek().value == ",":
                    self.next()
                    items.append(self.parse_expression())
            self.expect("]")
            return ("list", items)
        raise GrammarError(f"unexpected token {t.value!r}", t.pos, self.text)

    def parse_argument(self):
        if self.peek().value == "[":
            return self.parse_atom()
        return self.parse_expression()


def parse_ast(text: str):
    p = Parser(text)
    node = p.parse_expression()
    tail = p.peek()
    if tail.kind != "end":
        raise GrammarError(f"trailing input {tail.value!r}", tail.pos, text)
    return node


def collect_names(node, out: set):
    kind = node[0]
    if kind == "name":
        out.add(node[1])
    elif kind == "call":
        for a in node[2]:
            collect_names(a, out)
    elif kind == "list":
        for a in node[1]:
            collect_names(a, out)
    elif kind == "neg":
        collect_names(node[1], out)
    elif kind in "+-*/^":
        collect_names(node[1], out)
        collect_names(node[2], out)


def infer_vartable(texts, sum_var: str | None, rec_var: str | None) -> VarTable:
    """Variables referenced anywhere in the expressions, as a VarTable.

    Names other than the positional summation/recurrence variables are
    inferred as parameters (sorted for determinism).
    """
    names: set[str] = set()
    for text in texts:
        collect_names(parse_ast(text), names)
    params = sorted(n for n in names if n not in (sum_var, rec_var))
    return VarTable(sum_var, rec_var, params)


# -- semantic values -----------------------------------------------------------

# Values during interpretation: Fraction/Quad scalars, AffineForm, RatFunc,
# QuadExtElem (affine + radical), TermExpr, or ("list", [...]).


class _Interp:
    def __init__(self, vars: tuple[str, ...], text: str):
        self.vars = vars
        self.text = text

    def error(self, msg, pos=0):
        return GrammarError(msg, pos, self.text)

    # promotions

    def as_affine(self, val, pos=0) -> AffineForm:
        if isinstance(val, (int, Fraction)):
            return AffineForm(val)
        if isinstance(val, AffineForm):
            return val
        raise self.error("expected an affine expression", pos)

    def as_ratfunc(self, val, pos=0) -> RatFunc:
        if isinstance(val, (int, Fraction, Quad)):
            return RatFunc.from_scalar(self.vars, val)
        if isinstance(val, AffineForm):
            return RatFunc(val.to_poly(self.vars))
        if isinstance(val, RatFunc):
            return val
        raise self.error("expected a rational expression", pos)

    def as_term(self, val) -> TermExpr:
        if isinstance(val, TermExpr):
            return val
        return TermExpr(self.vars, [RatFactor(self.as_ratfunc(val))])

    def eval(self, node):
        kind = node[0]
        if kind == "int":
            return Fraction(node[1])
        if kind == "name":
            name = node[1]
            if name not in self.vars:
                raise self.error(f"unknown variable {name!r}", node[2])
            return AffineForm.variable(name)
        if kind == "neg":
            return self.mul(Fraction(-1), self.eval(node[1]))
        if kind in ("+", "-"):
            a = self.eval(node[1])
            b = self.eval(node[2])
            if kind == "-":
                b = self.mul(Fraction(-1), b)
            return self.add(a, b)
        if kind == "*":
            return self.mul(self.eval(node[1]), self.eval(node[2]))
        if kind == "/":
            return self.div(self.eval(node[1]), self.eval(node[2]))
        if kind == "^":
            return self.power(self.eval(node[1]), self.eval(node[2]))
        if kind == "list":
            return ("list", [self.eval(x) for x in node[1]])
        if kind == "call":
            return self.call(node[1], node[2])
        raise self.error(f"cannot interpret node {kind!r}")

    def add(self, a, b):
        if isinstance(a, TermExpr) or isinstance(b, TermExpr):
            raise self.error("sums of term factors are not supported")
        if isinstance(a, QuadExtElem) or isinstance(b, QuadExtElem):
            return self.radical_add(a, b)
        if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
            return a + b
        if isinstance(a, Quad) or isinstance(b, Quad):
            return a + b
        if isinstance(a, AffineForm) or isinstance(b, AffineForm):
            if isinstance(a, RatFunc) or isinstance(b, RatFunc):
                return self.as_ratfunc(a) + self.as_ratfunc(b)
            return self.as_affine(a) + self.as_affine(b)
        return self.as_ratfunc(a) + self.as_ratfunc(b)

    def radical_add(self, a, b):
        if isinstance(a, QuadExtElem) and isinstance(b, QuadExtElem):
            if a.radicand != b.radicand:
                raise self.error("mixed radicands in one expression")
            u = a.u + b.u
            v = a.v + b.v
            if v.is_zero():
                return u
            return QuadExtElem(u, v, a.radicand)
        if isinstance(b, QuadExtElem):
            a, b = b, a
        return QuadExtElem(a.u + self.as_ratfunc(b), a.v, a.radicand)

    def mul(self, a, b):
        if isinstance(a, TermExpr) or isinstance(b, TermExpr):
            return self.as_term(a) * self.as_term(b)
        if isinstance(a, QuadExtElem) or isinstance(b, QuadExtElem):
            return self.radical_mul(a, b)
        if isinstance(a, (int, Fraction, Quad)) and isinstance(b, (int, Fraction, Quad)):
            return a * b
        if isinstance(a, AffineForm) and isinstance(b, (int, Fraction)):
            return a.scale(b)
        if isinstance(b, AffineForm) and isinstance(a, (int, Fraction)):
            return b.scale(a)
        return self.as_ratfunc(a) * self.as_ratfunc(b)

    def radical_mul(self, a, b):
        if isinstance(a, QuadExtElem) and isinstance(b, QuadExtElem):
            if a.radicand != b.radicand:
                raise self.error("mixed radicands in one expression")
            d = RatFunc(a.radicand)
            u = a.u * b.u + a.v * b.v * d
            v = a.u * b.v + a.v * b.u
            if v.is_zero():
                return u
            return QuadExtElem(u, v, a.radicand)
        if isinstance(b, QuadExtElem):
            a, b = b, a
        c = self.as_ratfunc(b)
        v = a.v * c
        if v.is_zero():
            return a.u * c
        return QuadExtElem(a.u * c, v, a.radicand)

    def div(self, a, b):
        if isinstance(b, TermExpr):
            return self.as_term(a) * b.inverse()
        if isinstance(b, QuadExtElem):
            # multiply by the conjugate: 1/(u+v sqrt D) = conj/(u^2 - v^2 D)
            d = RatFunc(b.radicand)
            denom = b.u * b.u - b.v * b.v * d
            if denom.is_zero():
                raise self.error("division by zero radical expression")
            inv = QuadExtElem(b.u / denom, -b.v / denom, b.radicand)
            return self.mul(a, inv)
        if isinstance(a, TermExpr):
            return a * TermExpr(self.vars, [RatFactor(self.as_ratfunc(b).reciprocal())])
        if isinstance(a, (int, Fraction, Quad)) and isinstance(b, (int, Fraction, Quad)):
            if not b:
                raise self.error("division by zero")
            return a / b
        if isinstance(a, QuadExtElem):
            c = self.as_ratfunc(b).reciprocal()
            return self.mul(a, c)
        return self.as_ratfunc(a) / self.as_ratfunc(b)

    def power(self, base, exp):
        if isinstance(exp, (int, Fraction)) and _frac(exp).denominator == 1:
            e = int(exp)
            if isinstance(base, TermExpr):
                return base**e
            if isinstance(base, (int, Fraction, Quad)):
                if not base and e < 0:
                    raise self.error("zero base with negative exponent")
                return base**e
            if isinstance(base, QuadExtElem):
                out = Fraction(1)
                for _ in range(abs(e)):
                    out = self.mul(out, base)
                if e < 0:
                    return self.div(Fraction(1), out)
                return out
            return self.as_ratfunc(base) ** e
        if isinstance(exp, AffineForm):
            if isinstance(base, (int, Fraction)) and base == -1:
                return TermExpr(self.vars, [SignPow(exp)])
            if isinstance(base, TermExpr) or isinstance(base, QuadExtElem):
                raise self.error("unsupported symbolic power base")
            return TermExpr(self.vars, [PowFactor(self.as_ratfunc(base), exp)])
        raise self.error("unsupported exponent")

    def call(self, name, args):
        if name in ("poch", "pochhammer"):
            if len(args) != 2:
                raise self.error("poch takes two arguments")
            base = self.as_affine(self.eval(args[0]))
            length = self.as_affine(self.eval(args[1]))
            return TermExpr(self.vars, [Poch(base, length)])
        if name == "binomial":
            if len(args) != 2:
                raise self.error("binomial takes two arguments")
            top = self.as_affine(self.eval(args[0]))
            bot = self.as_affine(self.eval(args[1]))
            return TermExpr(self.vars, binomial_factors(top, bot))
        if name == "factorial":
            if len(args) != 1:
                raise self.error("factorial takes one argument")
            return TermExpr(self.vars, [Fact(self.as_affine(self.eval(args[0])))])
        if name == "sqrt":
            if len(args) != 1:
                raise self.error("sqrt takes one argument")
            val = self.eval(args[0])
            if isinstance(val, (int, Fraction)):
                return sqrt_scalar(val)
            rad = self.as_ratfunc(val)
            scale, radicand = canonical_radicand(rad, self.vars)
            if radicand is None:
                return scale  # perfect square
            return QuadExtElem(RatFunc.from_scalar(self.vars, 0), scale, radicand)
        if name == "hyperterm":
            if len(args) != 4:
                raise self.error("hyperterm takes four arguments")
            upper = self.param_list(args[0])
            lower = self.param_list(args[1])
            z = self.eval(args[2])
            if isinstance(z, AffineForm):
                z = self.as_ratfunc(z)
            if isinstance(z, QuadExtElem):
                raise self.error("symbolic radical series argument not supported")
            index = self.as_affine(self.eval(args[3]))
            if index.is_const():
                raise self.error("hyperterm index must involve a variable")
            return hyperterm_factors(upper, lower, z, index, self.vars)
        raise self.error(f"unknown function {name!r}")

    def hyper(self, upper, lower, z, var) -> HyperTerm:
        return HyperTerm(upper, lower, z, var, self.vars)

    def param_list(self, node):
        val = self.eval(node)
        if not (isinstance(val, tuple) and val[0] == "list"):
            raise self.error("expected a parameter list in [...]")
        out = []
        for item in val[1]:
            if isinstance(item, (int, Fraction)):
                out.append(AffineForm(item))
            elif isinstance(item, AffineForm):
                out.append(item)
            elif isinstance(item, QuadExtElem):
                out.append(item)
            else:
                raise self.error("parameter must be affine or a radical element")
        return out


def parse_term(text: str, vars: tuple[str, ...]) -> TermExpr:
    """Parse a summand in the term grammar over the given variables."""
    ast = parse_ast(text)
    interp = _Interp(vars, text)
    return interp.as_term(interp.eval(ast))


def parse_hyperterm(text: str, vars: tuple[str, ...]) -> HyperTerm:
    """Parse a single hyperterm(...) call (used for golden right-hand sides)."""
    ast = parse_ast(text)
    if ast[0] != "call" or ast[1] != "hyperterm":
        raise GrammarError("expected a hyperterm(...) expression", 0, text)
    interp = _Interp(vars, text)
    upper = interp.param_list(ast[2][0])
    lower = interp.param_list(ast[2][1])
    z = interp.eval(ast[2][2])
    if isinstance(z, AffineForm):
        z = interp.as_ratfunc(z)
    var = ast[2][3][1]
    return interp.hyper(upper, lower, z, var)


def parse_ratfunc(text: str, vars: tuple[str, ...]) -> RatFunc:
    ast = parse_ast(text)
    interp = _Interp(vars, text)
    return interp.as_ratfunc(interp.eval(ast))


def parse_poly(text: str, vars: tuple[str, ...]) -> MultiPoly:
    r = parse_ratfunc(text, vars)
    if not r.is_poly():
        raise GrammarError("expected a polynomial", 0, text)
    return r.num * (1 / r.den.const_value() if r.den.const_value() != 1 else 1)


def parse_recurrence(text: str, rec_var: str, vars: tuple[str, ...]) -> Recurrence:
    """Parse ``(poly)*S(n+1)+(poly)*S(n)=0`` into a canonical Recurrence."""
    if "=" in text:
        lhs, rhs = text.split("=", 1)
        if rhs.strip() not in ("0", ""):
            raise GrammarError("recurrence right-hand side must be 0", text.find("="), text)
        text = lhs
    ast = parse_ast(text)
    addends: list = []

    def split_sum(node, sign):
        if node[0] == "+":
            split_sum(node[1], sign)
            split_sum(node[2], sign)
        elif node[0] == "-" and len(node) == 3:
            split_sum(node[1], sign)
            split_sum(node[2], -sign)
        elif node[0] == "neg":
            split_sum(node[1], -sign)
        else:
            addends.append((sign, node))

    split_sum(ast, 1)
    interp = _Interp(vars, text)
    coeffs: dict[int, MultiPoly] = {}

    def extract(node):
        """Split one addend into (shift, coefficient-node-list)."""
        if node[0] == "call" and node[1] == "S":
            arg = node[2][0]
            shift_val = interp.as_affine(interp.eval(arg))
            offset = shift_val - AffineForm.variable(rec_var)
            if not offset.is_const() or offset.const.denominator != 1:
                raise GrammarError(f"bad S() argument", 0, text)
            return int(offset.const), []
        if node[0] == "*":
            s1, f1 = extract(node[1])
            s2, f2 = extract(node[2])
            if s1 is not None and s2 is not None:
                raise GrammarError("multiple S() factors in one addend", 0, text)
            return (s1 if s1 is not None else s2), f1 + f2
        if node[0] == "/":
            s1, f1 = extract(node[1])
            return s1, f1 + [("^", node[2], ("neg", ("int", 1)))]
        return None, [node]

    for sign, node in addends:
        shift, factor_nodes = extract(node)
        if shift is None:
            raise GrammarError("addend without S() factor", 0, text)
        coeff = RatFunc.from_scalar(vars, sign)
        for fn in factor_nodes:
            coeff = coeff * interp.as_ratfunc(interp.eval(fn))
        if not coeff.is_poly():
            raise GrammarError("recurrence coefficients must be polynomial", 0, text)
        poly = coeff.num * (1 / coeff.den.const_value())
        coeffs[shift] = coeffs.get(shift, MultiPoly.zero(vars)) + poly

    if not coeffs:
        raise GrammarError("empty recurrence", 0, text)
    low = min(coeffs)
    order = max(coeffs) - low
    out = []
    for i in range(order + 1):
        out.append(coeffs.get(low + i, MultiPoly.zero(vars)))
    if low != 0:
        # reindex so the lowest shift is S(rec_var)
        out = [c.shift(rec_var, -low) for c in out]
    from .zeilberger import recurrence_normalize

    return recurrence_normalize(Recurrence(rec_var, tuple(out)))
