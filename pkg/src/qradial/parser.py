"""Expression grammar for algebra elements and scalar parameters.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/')? factor)*
    factor := ('-' | '+')? atom ('^' exponent)?
    atom   := 'q' | 'z'idx | number | param | 'E'idx | 'F'idx | 'B'idx
            | 'K[' ints ']' | 'K{' fracs '}' | 'Klam[' ints ']' | '(' expr ')'

K[...] takes doubled coordinates (K[2] = K_α in sl2, K[1,-1] = K_{(α_1-α_2)/2});
K{...} takes ordinary coordinates with halves allowed (K{1/2,-1/2}).
Exponents are signed integers; q and z_t also accept (n/2).
"""

import re
from fractions import Fraction

from .errors import IndexOutOfRange, InvalidConfig, ParseError
from .scalar import RatFunc, as_ratfunc, laurent, param_name_ok, qpow
from .uqg import PBWElement

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<klam>Klam\[)
  | (?P<kbr>K\[)
  | (?P<kcur>K\{)
  | (?P<gen>[EFB]_?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),\]}])
""", re.VERBOSE)


def tokenize(src):
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.take()
        if t[1] != text:
            raise ParseError(f"expected {text!r}, got {t[1] or 'end of input'!r}", t[2])
        return t

    def parse(self):
        node = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"expected one of '+', '-', '*', '/', end of input; got {t[1]!r}", t[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def _starts_factor(self, t):
        return t[0] in ("num", "klam", "kbr", "kcur", "gen", "ident") or t[1] == "("

    def term(self):
        node = self.factor()
        while True:
            t = self.peek()
            if t[1] == "*":
                self.take()
                node = ("mul", node, self.factor())
            elif t[1] == "/":
                self.take()
                node = ("div", node, self.factor())
            elif self._starts_factor(t):
                node = ("mul", node, self.factor())
            else:
                return node

    def factor(self):
        t = self.peek()
        if t[1] in ("-", "+"):
            self.take()
            inner = self.factor()
            return ("neg", inner) if t[1] == "-" else inner
        node = self.atom()
        if self.peek()[1] == "^":
            self.take()
            node = ("pow", node, self.exponent())
        return node

    def signed_int(self):
        sign = 1
        t = self.peek()
        if t[1] in ("-", "+"):
            self.take()
            sign = -1 if t[1] == "-" else 1
        t = self.take()
        if t[0] != "num":
            raise ParseError(f"expected an integer, got {t[1] or 'end of input'!r}", t[2])
        return sign * int(t[1])

    def exponent(self):
        if self.peek()[1] == "(":
            self.take()
            n = self.signed_int()
            d = 1
            if self.peek()[1] == "/":
                self.take()
                t = self.take()
                if t[0] != "num" or int(t[1]) == 0:
                    raise ParseError("expected a positive denominator", t[2])
                d = int(t[1])
            self.expect(")")
            return Fraction(n, d)
        return Fraction(self.signed_int())

    def int_list(self, close):
        vals = [self.signed_int()]
        while self.peek()[1] == ",":
            self.take()
            vals.append(self.signed_int())
        self.expect(close)
        return tuple(vals)

    def frac_list(self):
        vals = []
        while True:
            n = self.signed_int()
            d = 1
            if self.peek()[1] == "/":
                self.take()
                t = self.take()
                if t[0] != "num" or int(t[1]) not in (1, 2):
                    raise ParseError("K{...} entries must be integers or halves", t[2])
                d = int(t[1])
            vals.append(2 * n // d)
            if self.peek()[1] != ",":
                break
            self.take()
        self.expect("}")
        return tuple(vals)

    def atom(self):
        t = self.take()
        kind, text, pos = t
        if kind == "num":
            return ("num", int(text))
        if kind == "kbr":
            return ("K", self.int_list("]"), pos)
        if kind == "kcur":
            return ("K", self.frac_list(), pos)
        if kind == "klam":
            return ("Klam", self.int_list("]"), pos)
        if kind == "gen":
            return ("gen", text[0], int(text.lstrip("EFB_")), pos)
        if kind == "ident":
            if text == "q":
                return ("q",)
            m = re.fullmatch(r"z(\d+)", text)
            if m:
                return ("z", int(m.group(1)), pos)
            if text[0].isupper():
                raise ParseError(f"unknown generator {text!r}", pos)
            return ("param", text)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"expected one of q, number, parameter, E<i>, F<i>, B<i>, K[...], K{{...}}, '('; "
                         f"got {text or 'end of input'!r}", pos)


def parse_expr(src):
    """Text → syntax tree (nested tuples)."""
    return _Parser(src).parse()


# evaluation


class Evaluator:
    """Evaluate syntax trees to RatFunc or PBWElement values.

    ``alg`` enables E/F/K atoms, ``ctx`` (a QSPContext) enables B atoms on
    ``side``.  Without ``alg`` only scalar expressions are accepted.
    """

    def __init__(self, alg=None, ctx=None, side="left"):
        if ctx is not None and alg is None:
            alg = ctx.alg
        self.alg = alg
        self.ctx = ctx
        self.side = side

    def __call__(self, node):
        return getattr(self, "_" + node[0])(node)

    def _need_alg(self, pos, what):
        if self.alg is None:
            raise ParseError(f"{what} is not allowed in a scalar expression", pos)

    def _num(self, node):
        return as_ratfunc(node[1])

    def _q(self, node):
        return qpow(2)

    def _z(self, node):
        _, t, pos = node
        if t < 1:
            raise ParseError("torus symbols are numbered from 1", pos)
        return qpow(0, [0] * (t - 1) + [2])

    def _param(self, node):
        if not param_name_ok(node[1]):
            raise ParseError(f"{node[1]!r} is a reserved name")
        return laurent({node[1]: 1})

    def _gen(self, node):
        _, kind, i, pos = node
        self._need_alg(pos, f"{kind}{i}")
        alg = self.alg
        if not 1 <= i <= alg.n:
            raise IndexOutOfRange(f"{kind}{i}: index outside 1..{alg.n}")
        if kind == "E":
            return alg.E(i)
        if kind == "F":
            return alg.F(i)
        if self.ctx is None:
            raise ParseError("B atoms need a symmetric pair context", pos)
        if i not in self.ctx.nonX:
            raise IndexOutOfRange(f"B{i}: no coideal generator with that index")
        return self.ctx.symbol_element(("B", i), self.side)

    def _K(self, node):
        _, coords, pos = node
        self._need_alg(pos, "K")
        if len(coords) != self.alg.n:
            raise IndexOutOfRange(f"K needs {self.alg.n} coordinates, got {len(coords)}")
        return self.alg.K(coords)

    def _Klam(self, node):
        _, ms, pos = node
        self._need_alg(pos, "Klam")
        alg = self.alg
        if len(ms) != alg.r:
            raise IndexOutOfRange(f"Klam needs {alg.r} torus multiplicities")
        return alg.K((0,) * alg.n, ms)

    def _add(self, node):
        return _combine(self(node[1]), self(node[2]), 1)

    def _sub(self, node):
        return _combine(self(node[1]), self(node[2]), -1)

    def _neg(self, node):
        x = self(node[1])
        return x.scale(-1) if isinstance(x, PBWElement) else -x

    def _mul(self, node):
        a, b = self(node[1]), self(node[2])
        if isinstance(a, PBWElement) and isinstance(b, PBWElement):
            return a * b
        if isinstance(a, PBWElement):
            return a.scale(b)
        if isinstance(b, PBWElement):
            return b.scale(a)
        return a * b

    def _div(self, node):
        a, b = self(node[1]), self(node[2])
        if isinstance(b, PBWElement):
            raise ParseError("division is only by scalars")
        if isinstance(a, PBWElement):
            return a.scale(b.inverse())
        return a / b

    def _pow(self, node):
        base, e = node[1], node[2]
        if e.denominator != 1:
            if (2 * e).denominator != 1:
                raise ParseError("only half-integer exponents are supported")
            if base[0] == "q":
                return qpow(int(2 * e))
            if base[0] == "z":
                t = base[1]
                return qpow(0, [0] * (t - 1) + [int(2 * e)])
            raise ParseError("fractional exponents are only allowed on q and z<t>")
        x = self(base)
        n = int(e)
        if isinstance(x, PBWElement):
            if n < 0:
                raise ParseError("negative powers of algebra elements are not supported")
            out = x.alg.one()
            for _ in range(n):
                out = out * x
            return out
        return x ** n


def _combine(a, b, sign):
    if isinstance(a, PBWElement) or isinstance(b, PBWElement):
        alg = a.alg if isinstance(a, PBWElement) else b.alg
        a = a if isinstance(a, PBWElement) else alg.scalar(a)
        b = b if isinstance(b, PBWElement) else alg.scalar(b)
        return a + b if sign > 0 else a - b
    return a + b if sign > 0 else a - b


def evaluate(src, alg=None, ctx=None, side="left"):
    return Evaluator(alg, ctx, side)(parse_expr(src))


def parse_scalar(src):
    """Scalar expression (parameters, q, z) → RatFunc."""
    if isinstance(src, (int, Fraction)):
        return as_ratfunc(src)
    if isinstance(src, RatFunc):
        return src
    if not isinstance(src, str):
        raise InvalidConfig(f"expected a scalar expression, got {src!r}")
    x = evaluate(src)
    if isinstance(x, PBWElement):
        raise InvalidConfig(f"{src!r} is not a scalar")
    return x


def parse_element(src, alg, ctx=None, side="left"):
    x = evaluate(src, alg, ctx, side)
    if not isinstance(x, PBWElement):
        x = alg.scalar(x)
    return x
