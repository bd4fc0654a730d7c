"""Exact rational functions in q^{1/2}, torus symbols and named parameters.

Generators of the underlying polynomial ring:

* ``u``   stands for q^{1/2};
* ``v<t>`` stands for q^{λ_t/2}, so that z_t = q^{λ_t} = v_t^2;
* any other identifier is a free parameter (``c2``, ``d2``, ...).

Values are kept as num/den over ℤ[generators] with gcd(num, den) = 1 and
the leading coefficient of den positive, which makes equality structural.
"""

import re
import threading
from fractions import Fraction

import flint

from .errors import DivisionByZero

_lock = threading.Lock()
_names = ["u", "v1", "v2", "v3", "v4"]
_ctx = flint.fmpz_mpoly_ctx.get(tuple(_names), "degrevlex")

_RESERVED = re.compile(r"^(u|q|v\d+|z\d+|[EFKB]\d*)$")
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


def _current_ctx():
    return _ctx


def register(name):
    """Make ``name`` a generator of the global ring (idempotent)."""
    global _ctx
    if name in _names:
        return
    if not _IDENT.match(name):
        raise ValueError(f"bad symbol name {name!r}")
    with _lock:
        if name not in _names:
            _names.append(name)
            _ctx = flint.fmpz_mpoly_ctx.get(tuple(_names), "degrevlex")


def torus_var(t):
    """Name of the generator q^{λ_t/2} (t is 1-based)."""
    name = f"v{t}"
    register(name)
    return name


def param_name_ok(name):
    return bool(_IDENT.match(name)) and not _RESERVED.match(name)


def _lift(p):
    ctx = _ctx
    if p.context() is ctx:
        return p
    return p.project_to_context(ctx)


def _gen(name):
    register(name)
    ctx = _ctx
    return ctx.gens()[_names.index(name)]


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num=0, den=None):
        if isinstance(num, RatFunc):
            self.num, self.den = num.num, num.den
            return
        ctx = _ctx
        if isinstance(num, Fraction):
            if den is not None:
                raise TypeError("den given with Fraction numerator")
            num, den = num.numerator, num.denominator
        n = ctx.from_dict({}) + num if isinstance(num, int) else _lift(num)
        if den is None:
            self.num, self.den = n, ctx.from_dict({}) + 1
            return
        d = ctx.from_dict({}) + den if isinstance(den, int) else _lift(den)
        self.num, self.den = _canon(n, d)

    @classmethod
    def _raw(cls, num, den):
        r = object.__new__(cls)
        r.num = num
        r.den = den
        return r

    # construction helpers

    @classmethod
    def symbol(cls, name):
        if name in ("q",):
            return qpow(2)
        return cls._raw(_gen(name), _ctx.from_dict({}) + 1)

    # arithmetic

    def _co(self, other):
        if isinstance(other, RatFunc):
            a, b = self, other
        elif isinstance(other, (int, Fraction)):
            a, b = self, RatFunc(other)
        else:
            return None, None
        if a.num.context() is not b.num.context():
            a = RatFunc._raw(_lift(a.num), _lift(a.den))
            b = RatFunc._raw(_lift(b.num), _lift(b.den))
        return a, b

    def __add__(self, other):
        a, b = self._co(other)
        if a is None:
            return NotImplemented
        if b.num == 0:
            return a
        if a.num == 0:
            return b
        if a.den == b.den:
            if a.den == 1:
                return RatFunc._raw(a.num + b.num, a.den)
            return RatFunc._raw(*_canon(a.num + b.num, a.den))
        if a.den == 1:
            return RatFunc._raw(a.num * b.den + b.num, b.den)
        if b.den == 1:
            return RatFunc._raw(a.num + b.num * a.den, a.den)
        g = a.den.gcd(b.den)
        if g == 1:
            return RatFunc._raw(*_canon(a.num * b.den + b.num * a.den, a.den * b.den))
        bd = b.den / g
        ad = a.den / g
        return RatFunc._raw(*_canon(a.num * bd + b.num * ad, a.den * bd))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        a, b = self._co(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._co(other)
        if a is None:
            return NotImplemented
        return b + (-a)

    def __mul__(self, other):
        a, b = self._co(other)
        if a is None:
            return NotImplemented
        if a.num == 0 or b.num == 0:
            return RatFunc(0)
        if a.den == 1 and b.den == 1:
            return RatFunc._raw(a.num * b.num, a.den)
        g1 = a.num.gcd(b.den)
        g2 = b.num.gcd(a.den)
        n1, d2 = (a.num, b.den) if g1 == 1 else (a.num / g1, b.den / g1)
        n2, d1 = (b.num, a.den) if g2 == 1 else (b.num / g2, a.den / g2)
        return RatFunc._raw(*_sign(n1 * n2, d1 * d2))

    __rmul__ = __mul__

    def inverse(self):
        if self.num == 0:
            raise DivisionByZero("inverse of zero rational function")
        return RatFunc._raw(*_sign(self.den, self.num))

    def __truediv__(self, other):
        a, b = self._co(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._co(other)
        if a is None:
            return NotImplemented
        return b * a.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc._raw(self.num ** n, self.den ** n)

    # comparison

    def __eq__(self, other):
        a, b = self._co(other)
        if a is None:
            return NotImplemented
        return a.num == b.num and a.den == b.den

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self.den == 1 and self.num.is_constant():
            c = int(self.num.leading_coefficient()) if self.num != 0 else 0
            return hash(c)
        return hash((_key(self.num), _key(self.den)))

    def __bool__(self):
        return self.num != 0

    def is_zero(self):
        return self.num == 0

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def as_fraction(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        n = int(self.num.leading_coefficient()) if self.num != 0 else 0
        return Fraction(n, int(self.den.leading_coefficient()))

    def variables(self):
        """Names of generators that actually occur."""
        used = set()
        for p in (self.num, self.den):
            for exps in p.monoms():
                for name, e in zip(_names, exps):
                    if e:
                        used.add(name)
        return used

    def depends_on_torus(self):
        return any(re.match(r"^v\d+$", n) for n in self.variables())

    def conjugate(self):
        # q and all parameters are treated as real
        return self

    # evaluation and substitution

    def evaluate(self, values):
        """Exact value at a point; ``values`` maps generator names to numbers.

        A value for ``q`` may replace one for ``u`` if only even powers of u occur.
        """
        vals = dict(values)
        if "q" in vals and "u" not in vals:
            vals["u"] = None
            qv = Fraction(vals.pop("q"))
        else:
            qv = None
        n = _eval_poly(self.num, vals, qv)
        d = _eval_poly(self.den, vals, qv)
        if d == 0:
            raise DivisionByZero("denominator vanishes at evaluation point")
        return n / d

    def subs_monomial(self, images):
        """Substitute generators by Laurent monomials times rational numbers.

        ``images`` maps a generator name to ``(scale, {name: exponent})``.
        """
        return _subs_poly(self.num, images) / _subs_poly(self.den, images)

    # rendering

    def text(self):
        return render(self)

    def latex(self):
        return render(self, latex=True)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"RatFunc({render(self)!r})"


def _key(p):
    # independent of how many generators the context has
    return tuple(sorted((tuple((n, e) for n, e in zip(_names, exps) if e), int(c))
                        for exps, c in p.terms()))


def _sign(n, d):
    if d.leading_coefficient() < 0:
        return -n, -d
    return n, d


def _canon(n, d):
    if d == 0:
        raise DivisionByZero("zero denominator")
    if n == 0:
        return n, n.context().from_dict({}) + 1
    g = n.gcd(d)
    if g != 1:
        n = n / g
        d = d / g
    return _sign(n, d)


def _mono(ctx, exps):
    vec = [0] * ctx.nvars()
    for k, v in exps.items():
        vec[_names.index(k)] = v
    return ctx.term(exp_vec=vec)


def _eval_poly(p, vals, qv):
    total = Fraction(0)
    names = _names[: p.context().nvars()]
    for exps, c in p.terms():
        exps = [int(e) for e in exps]
        term = Fraction(int(c))
        for name, e in zip(names, exps):
            if not e:
                continue
            if name == "u" and vals.get("u") is None:
                if qv is None:
                    raise KeyError("no value for q")
                if e % 2:
                    raise ValueError("odd power of q^(1/2) needs a value for u")
                term *= qv ** (e // 2)
                continue
            if name not in vals:
                raise KeyError(f"no value for {name}")
            term *= Fraction(vals[name]) ** e
        total += term
    return total


def _subs_poly(p, images):
    names = _names[: p.context().nvars()]
    total = RatFunc(0)
    for exps, c in p.terms():
        exps = [int(e) for e in exps]
        coeff = Fraction(int(c))
        new = {}
        for name, e in zip(names, exps):
            if not e:
                continue
            if name in images:
                scale, mono = images[name]
                coeff *= Fraction(scale) ** e
                for k, v in mono.items():
                    new[k] = new.get(k, 0) + v * e
            else:
                new[name] = new.get(name, 0) + e
        total = total + RatFunc(coeff) * laurent(new)
    return total


def laurent(exps):
    """Monomial Π name^e with possibly negative exponents."""
    for k in exps:
        register(k)
    ctx = _ctx
    up = {k: v for k, v in exps.items() if v > 0}
    down = {k: -v for k, v in exps.items() if v < 0}
    return RatFunc._raw(_mono(ctx, up), _mono(ctx, down))



def one():
    return RatFunc(1)


def zero():
    return RatFunc(0)


def qpow(halves, z_halves=()):
    """q^{halves/2} · Π_t z_t^{z_halves[t]/2} as a monomial."""
    ctx = _ctx
    up = {}
    down = {}
    if halves > 0:
        up["u"] = halves
    elif halves < 0:
        down["u"] = -halves
    for t, m in enumerate(z_halves, start=1):
        if m:
            name = torus_var(t)
            (up if m > 0 else down)[name] = abs(m)
    ctx = _ctx
    return RatFunc._raw(_mono(ctx, up), _mono(ctx, down))


def q_int(n, halves=2):
    """Symmetric quantum integer [n]_{q_i} with q_i = q^{halves/2}."""
    if n == 0:
        return zero()
    num = qpow(n * halves) - qpow(-n * halves)
    return num / (qpow(halves) - qpow(-halves))


def q_binom(n, k, halves=2):
    if k < 0 or k > n:
        return zero()
    r = one()
    for j in range(k):
        r = r * q_int(n - j, halves) / q_int(j + 1, halves)
    return r


def as_ratfunc(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, Fraction)):
        return RatFunc(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")


# text rendering


def _var_text(name, e, latex):
    if name == "u":
        base, frac = "q", True
    elif re.match(r"^v\d+$", name):
        base, frac = "z" + name[1:], True
    else:
        base, frac = name, False
    if frac:
        if e % 2 == 0:
            e //= 2
            ex = str(e)
        else:
            ex = f"({e}/2)" if not latex else f"{e}/2"
    else:
        ex = str(e)
    if latex:
        base = re.sub(r"^([A-Za-z])(\d+)$", r"\1_{\2}", base)
        return base if ex == "1" else f"{base}^{{{ex}}}"
    if ex == "1":
        return base
    return f"{base}^{ex}"


def _poly_text(p, latex=False):
    if p == 0:
        return "0"
    names = _names[: p.context().nvars()]
    parts = []
    for exps, c in p.terms():
        exps = [int(e) for e in exps]
        c = int(c)
        factors = [_var_text(n, e, latex) for n, e in zip(names, exps) if e]
        sgn = "-" if c < 0 else "+"
        c = abs(c)
        sep = " " if latex else "*"
        body = sep.join(([str(c)] if c != 1 or not factors else []) + factors)
        parts.append((sgn, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sgn, body in parts[1:]:
        out += f" {sgn} {body}"
    return out


def render(r, latex=False):
    n = _poly_text(r.num, latex)
    if r.den == 1:
        return n
    d = _poly_text(r.den, latex)
    if latex:
        return f"\\frac{{{n}}}{{{d}}}"
    if len(list(r.num.terms())) > 1:
        n = f"({n})"
    if len(list(r.den.terms())) > 1 or "*" in d:
        d = f"({d})"
    return f"{n}/{d}"
