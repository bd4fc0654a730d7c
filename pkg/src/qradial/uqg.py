"""The quantized enveloping algebra Ǔ_q(g') in a PBW-style normal form.

Every element is a finite sum of monomials E_w K_β F_v with w, v words in
Serre normal form.  A monomial key is the tuple ``(w, kc, ks, v)``:

* ``w``, ``v``  words of 1-based simple-root indices,
* ``kc``        the concrete part of β in doubled coordinates,
* ``ks``        integer multiplicities of the formal torus weights λ_t, so
                that K_β = K_{kc/2} · Π_t K_{ks_t λ_t γ_t}.

The γ_t form the torus basis the algebra was built with; symbolic parts are
only needed for expressions such as K_λ·Y in the radial computations.
"""

from itertools import permutations

from .cartan import CartanMatrix, rv_add, rv_zero
from .errors import ContextMismatch, IndexOutOfRange
from .scalar import RatFunc, as_ratfunc, one, q_binom, qpow, render, zero


def _add_into(acc, key, c):
    old = acc.get(key)
    if old is None:
        if c:
            acc[key] = c
        return
    new = old + c
    if new:
        acc[key] = new
    else:
        del acc[key]


def _words_of_weight(wt):
    letters = []
    for i, k in enumerate(wt, start=1):
        letters += [i] * k
    return sorted(set(permutations(letters)), reverse=True)


def _split_weights(wt):
    """All μ with 0 ≤ μ ≤ wt componentwise."""
    out = [()]
    for k in wt:
        out = [m + (x,) for m in out for x in range(k + 1)]
    return out


class QuantumGroup:
    """Ǔ_q(g') for a Cartan matrix, optionally with formal torus weights."""

    def __init__(self, cartan, torus=()):
        if not isinstance(cartan, CartanMatrix):
            cartan = CartanMatrix(cartan)
        self.cartan = cartan
        self.n = cartan.n
        self.torus = tuple(tuple(g) for g in torus)
        for g in self.torus:
            if len(g) != self.n:
                raise ValueError("torus vector has wrong length")
        self.r = len(self.torus)
        self._zero_k = rv_zero(self.n)
        self._zero_s = (0,) * self.r
        self._nf_tables = {}
        self._nf_cache = {}
        self._straight = {}
        self._kcache = {}
        self._gen_diff = [None] + [
            (qpow(cartan.qi_halves(i)) - qpow(-cartan.qi_halves(i))).inverse()
            for i in range(1, self.n + 1)
        ]

    # basic elements

    def element(self, terms=None):
        return PBWElement(self, terms or {})

    def zero(self):
        return PBWElement(self, {})

    def one(self):
        return self.monomial((), None, None, ())

    def scalar(self, c):
        c = as_ratfunc(c)
        return PBWElement(self, {((), self._zero_k, self._zero_s, ()): c} if c else {})

    def monomial(self, e=(), kc=None, ks=None, f=(), coeff=1):
        kc = self._zero_k if kc is None else tuple(kc)
        ks = self._zero_s if ks is None else tuple(ks)
        for i in tuple(e) + tuple(f):
            self.cartan.check_index(i)
        out = self.zero()
        ew = self.normal_word(tuple(e))
        fw = self.normal_word(tuple(f))
        c = as_ratfunc(coeff)
        terms = {}
        for a, x in ew.items():
            for b, y in fw.items():
                _add_into(terms, (a, kc, ks, b), c * x * y)
        out.terms = terms
        return out

    def E(self, i):
        self.cartan.check_index(i)
        return self.monomial((i,), None, None, ())

    def F(self, i):
        self.cartan.check_index(i)
        return self.monomial((), None, None, (i,))

    def K(self, beta, lam=None):
        """K_β for β in doubled coordinates; ``lam`` adds Σ lam_t λ_t γ_t."""
        beta = tuple(beta)
        if len(beta) != self.n:
            raise IndexOutOfRange("K vector has wrong length")
        if lam is not None and len(lam) != self.r:
            raise IndexOutOfRange("torus multiplicity vector has wrong length")
        return self.monomial((), beta, lam, ())

    def Ki(self, i, power=1):
        """K_i^power."""
        return self.K(tuple(2 * power if j == i else 0 for j in range(1, self.n + 1)))

    # q-power factors

    def kfactor(self, kc, ks, wt, sign=1):
        """q^{sign·(β, wt)} where β = (kc, ks) and wt is an ordinary weight."""
        key = (kc, ks, wt, sign)
        r = self._kcache.get(key)
        if r is None:
            pd = self.cartan.pair_doubled
            u = sign * pd(kc, wt)
            zs = tuple(sign * m * pd(g, wt) if m else 0 for m, g in zip(ks, self.torus))
            r = qpow(u, zs)
            if len(self._kcache) < 200000:
                self._kcache[key] = r
        return r

    def weight(self, word):
        return self.cartan.weight(word)

    # Serre normal form of words

    def serre_relation(self, i, j):
        """The quantum Serre polynomial in letters i, j as {word: coeff}."""
        a = self.cartan.entry(i, j)
        m = 1 - a
        qi = self.cartan.qi_halves(i)
        out = {}
        for k in range(m + 1):
            c = q_binom(m, k, qi)
            if k % 2:
                c = -c
            w = (i,) * (m - k) + (j,) + (i,) * k
            _add_into(out, w, c)
        return out

    def _relations_for(self, wt):
        n = self.n
        rels = []
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                if self.cartan.entry(i, j) == 0 and i > j:
                    continue
                rel = self.serre_relation(i, j)
                rw = self.weight(next(iter(rel)))
                rest = tuple(x - y for x, y in zip(wt, rw))
                if min(rest) < 0:
                    continue
                rels.append((rel, rest))
        rows = []
        for rel, rest in rels:
            for mu in _split_weights(rest):
                nu = tuple(x - y for x, y in zip(rest, mu))
                for x in _words_of_weight(mu):
                    for y in _words_of_weight(nu):
                        rows.append({x + w + y: c for w, c in rel.items()})
        return rows

    def _nf_table(self, wt):
        tab = self._nf_tables.get(wt)
        if tab is not None:
            return tab
        rows = self._relations_for(wt)
        tab = {}
        if rows:
            order = {w: k for k, w in enumerate(_words_of_weight(wt))}
            pivots = []
            for row in rows:
                row = dict(row)
                for p, prow in pivots:
                    c = row.get(p)
                    if c:
                        for w, x in prow.items():
                            _add_into(row, w, -c * x)
                if not row:
                    continue
                p = min(row, key=order.__getitem__)
                inv = row[p].inverse()
                row = {w: x * inv for w, x in row.items()}
                for k, (p2, prow2) in enumerate(pivots):
                    c = prow2.get(p)
                    if c:
                        prow2 = dict(prow2)
                        for w, x in row.items():
                            _add_into(prow2, w, -c * x)
                        pivots[k] = (p2, prow2)
                pivots.append((p, row))
            for p, row in pivots:
                tab[p] = {w: -x for w, x in row.items() if w != p}
        self._nf_tables[wt] = tab
        return tab

    def normal_word(self, w):
        """Serre normal form of the word w as {normal word: coeff}."""
        r = self._nf_cache.get(w)
        if r is not None:
            return r
        if len(w) < 2:
            r = {w: one()}
        else:
            tab = self._nf_table(self.weight(w))
            r = dict(tab[w]) if w in tab else {w: one()}
        self._nf_cache[w] = r
        return r

    def is_normal_word(self, w):
        return len(w) < 2 or w not in self._nf_table(self.weight(w))

    # straightening F-words past E-words

    def straighten(self, f, e):
        """F_f E_e = Σ c · E_a K_b F_c with concrete b; returns {(a, b, c): coeff}."""
        key = (f, e)
        r = self._straight.get(key)
        if r is not None:
            return r
        zk = self._zero_k
        if not f or not e:
            r = {(e, zk, f): one()}
            self._straight[key] = r
            return r
        j = f[-1]
        f0 = f[:-1]
        aj = self.cartan.alpha(j)
        naj = tuple(-x for x in aj)
        diff = self._gen_diff[j]
        inner = {(e, zk, (j,)): one()}
        for p, letter in enumerate(e):
            if letter != j:
                continue
            rest = self.weight(e[p + 1:])
            x = self.cartan.pair_doubled(aj, rest)
            w = e[:p] + e[p + 1:]
            _add_into(inner, (w, aj, ()), -qpow(x) * diff)
            _add_into(inner, (w, naj, ()), qpow(-x) * diff)
        out = {}
        for (a, b, c), x in inner.items():
            for (a2, b2, c2), y in self.straighten(f0, a).items():
                fac = qpow(self.cartan.pair_doubled(b, self.weight(c2)))
                _add_into(out, (a2, rv_add(b2, b), c2 + c), x * y * fac)
        self._straight[key] = out
        return out

    def mul_monomials(self, m1, m2):
        e1, kc1, ks1, f1 = m1
        e2, kc2, ks2, f2 = m2
        kc12 = rv_add(kc1, kc2)
        ks12 = tuple(a + b for a, b in zip(ks1, ks2))
        out = {}
        for (ea, kb, fc), x in self.straighten(f1, e2).items():
            c = x
            if ea:
                c = c * self.kfactor(kc1, ks1, self.weight(ea))
            if fc:
                c = c * self.kfactor(kc2, ks2, self.weight(fc))
            k = rv_add(kc12, kb)
            ew = self.normal_word(e1 + ea)
            fw = self.normal_word(fc + f2)
            for a, y in ew.items():
                cy = c * y
                for b, z in fw.items():
                    _add_into(out, (a, k, ks12, b), cy * z)
        return out


class PBWElement:
    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = terms

    # coercion

    def _other(self, other):
        if isinstance(other, PBWElement):
            if other.alg is not self.alg:
                raise ContextMismatch("elements live in different algebras")
            return other
        if isinstance(other, (int, RatFunc)) or type(other).__name__ == "Fraction":
            return self.alg.scalar(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for k, c in o.terms.items():
            _add_into(terms, k, c)
        return PBWElement(self.alg, terms)

    __radd__ = __add__

    def __neg__(self):
        return PBWElement(self.alg, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c):
        c = as_ratfunc(c)
        if not c:
            return self.alg.zero()
        return PBWElement(self.alg, {k: x * c for k, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, PBWElement):
            if other.alg is not self.alg:
                raise ContextMismatch("elements live in different algebras")
            alg = self.alg
            out = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    c12 = c1 * c2
                    for k, x in alg.mul_monomials(m1, m2).items():
                        _add_into(out, k, c12 * x)
            return PBWElement(alg, out)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __truediv__(self, other):
        try:
            return self.scale(as_ratfunc(other).inverse())
        except TypeError:
            return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, e=(), kc=None, ks=None, f=()):
        kc = self.alg._zero_k if kc is None else tuple(kc)
        ks = self.alg._zero_s if ks is None else tuple(ks)
        return self.terms.get((tuple(e), kc, ks, tuple(f)), zero())

    def map_coefficients(self, fn):
        out = {}
        for k, c in self.terms.items():
            _add_into(out, k, fn(c))
        return PBWElement(self.alg, out)

    def has_symbolic_torus(self):
        return any(any(k[2]) for k in self.terms)

    def __str__(self):
        return render_element(self)

    def __repr__(self):
        return f"PBWElement({render_element(self)!r})"

    def text(self):
        return render_element(self)

    def latex(self):
        return render_element(self, latex=True)


def _sort_key(k):
    e, kc, ks, f = k
    return (len(e) + len(f), e, f, kc, ks)


def monomial_text(key, latex=False):
    e, kc, ks, f = key
    parts = []
    for i in e:
        parts.append(f"E_{{{i}}}" if latex else f"E{i}")
    if any(kc):
        if latex:
            parts.append("K_{" + ",".join(_half(x) for x in kc) + "}")
        else:
            parts.append("K[" + ",".join(str(x) for x in kc) + "]")
    if any(ks):
        if latex:
            parts.append("K_{" + ",".join(f"{m}\\lambda_{{{t}}}" for t, m in enumerate(ks, 1) if m) + "}")
        else:
            parts.append("Klam[" + ",".join(str(m) for m in ks) + "]")
    for i in f:
        parts.append(f"F_{{{i}}}" if latex else f"F{i}")
    return (" " if latex else "*").join(parts)


def _half(x):
    return str(x // 2) if x % 2 == 0 else f"{x}/2"


def coeff_text(c, latex=False):
    s = render(c, latex=latex)
    if latex:
        return s
    if c.den == 1 and len(list(c.num.terms())) == 1:
        return s
    return f"({s})"


def render_element(x, latex=False):
    if not x.terms:
        return "0"
    out = []
    for k in sorted(x.terms, key=_sort_key):
        c = x.terms[k]
        mono = monomial_text(k, latex)
        if not mono:
            out.append(coeff_text(c, latex) if not latex else render(c, latex=True))
            continue
        if c == 1:
            out.append(mono)
        elif c == -1:
            out.append("-" + mono)
        else:
            sep = " " if latex else "*"
            out.append(coeff_text(c, latex) + sep + mono)
    s = out[0]
    for t in out[1:]:
        s += " - " + t[1:] if t.startswith("-") else " + " + t
    return s
