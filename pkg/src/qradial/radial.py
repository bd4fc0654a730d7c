"""Quantum Iwasawa decomposition and radial parts K_λY ∈ B̌ Ǎ B̌.

The torus element is written K_{λ+δ} where λ = Σ λ_t γ_t is symbolic and δ
is a concrete shift given by half-unit coordinates over the torus basis
(δ = Σ m_t/2 γ_t).  Scalars carry λ through the generators v_t = q^{λ_t/2}.

Decomposition terms are keyed by (left word, δ coordinates, right word); a
word is a tuple of coideal symbols as described in :mod:`qradial.qsp`.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from functools import reduce

from .cartan import rv_add, rv_zero
from .errors import IdenticallySingular, InvalidConfig, MissingGeneratorImage
from .scalar import RatFunc, as_ratfunc, one, qpow, render, zero
from .uqg import PBWElement, _add_into, monomial_text


def _memo_on():
    return os.environ.get("QSP_RADIAL_MEMO", "on").lower() not in ("off", "0", "false", "no")


def _merge(acc, terms, c=None):
    for k, x in terms.items():
        _add_into(acc, k, x if c is None else x * c)


# coideal words


def symbol_text(sym, latex=False):
    kind, arg = sym
    if kind == "K":
        if latex:
            return "K_{" + ",".join(str(x // 2) if x % 2 == 0 else f"{x}/2" for x in arg) + "}"
        return "K[" + ",".join(str(x) for x in arg) + "]"
    return f"{kind}_{{{arg}}}" if latex else f"{kind}{arg}"


def word_text(word, latex=False):
    return (" " if latex else "*").join(symbol_text(s, latex) for s in word)


def shift_text(delta, latex=False):
    parts = []
    for t, m in enumerate(delta, 1):
        lam = "\\lambda" if latex else "λ"
        name = lam if len(delta) == 1 else (f"{lam}_{{{t}}}" if latex else f"{lam}{t}")
        if m == 0:
            parts.append(name)
        else:
            val = str(abs(m) // 2) if m % 2 == 0 else (f"\\frac{{{abs(m)}}}{{2}}" if latex else f"{abs(m)}/2")
            parts.append(f"{name}{'+' if m > 0 else '-'}{val}")
    if latex:
        return "A_{" + ",".join(parts) + "}"
    return "A[" + ",".join(parts) + "]"


class BABDecomposition:
    """Σ coeff · (left word) K_{λ+δ} (right word), plus the recorded denominators."""

    def __init__(self, ctx, terms=None, denominators=()):
        self.ctx = ctx
        self.terms = {k: v for k, v in (terms or {}).items() if v}
        dens = []
        for d in denominators:
            if d not in dens:
                dens.append(d)
        self.regularity_denominators = dens

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, BABDecomposition) and self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        t = dict(self.terms)
        _merge(t, other.terms)
        return BABDecomposition(self.ctx, t, self.regularity_denominators + other.regularity_denominators)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = as_ratfunc(c)
        return BABDecomposition(self.ctx, {k: v * c for k, v in self.terms.items()} if c else {},
                                self.regularity_denominators)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0][0]) + len(kv[0][2]), repr(kv[0])))

    def coefficient(self, left, shift, right):
        return self.terms.get((tuple(left), tuple(shift), tuple(right)), zero())

    def tensor(self):
        """Canonical form in U ⊗ Ǎ ⊗ U: each leg expanded to PBW normal form."""
        ctx = self.ctx
        out = {}
        for (left, delta, right), c in self.terms.items():
            a = ctx.expand_coideal(left, "left")
            b = ctx.expand_coideal(right, "right")
            for ka, x in a.terms.items():
                for kb, y in b.terms.items():
                    _add_into(out, (ka, delta, kb), c * x * y)
        return out

    def equivalent(self, other):
        return self.tensor() == other.tensor()

    def text(self, latex=False):
        if not self.terms:
            return "0"
        out = []
        for (left, delta, right), c in self.sorted_terms():
            parts = [p for p in (word_text(left, latex), shift_text(delta, latex), word_text(right, latex)) if p]
            mono = (" " if latex else "*").join(parts)
            coeff = render(c, latex=latex)
            out.append(f"({coeff}){' ' if latex else '*'}{mono}")
        return " + ".join(out)

    def latex(self):
        return self.text(latex=True)

    def __str__(self):
        return self.text()

    def to_json(self):
        return {
            "terms": [
                {"left": [symbol_text(s) for s in left], "shift": list(delta),
                 "right": [symbol_text(s) for s in right], "coeff": render(c)}
                for (left, delta, right), c in self.sorted_terms()
            ],
            "denominators": [render(d) for d in self.regularity_denominators],
        }


class BANDecomposition:
    """Σ coeff · (left word) K_{λ+δ} F_V from the quantum Iwasawa decomposition."""

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, BANDecomposition) and self.terms == other.terms

    __hash__ = None

    def text(self, latex=False):
        if not self.terms:
            return "0"
        out = []
        for (left, delta, f), c in sorted(self.terms.items(), key=lambda kv: repr(kv[0])):
            fw = (" " if latex else "*").join((f"F_{{{i}}}" if latex else f"F{i}") for i in f)
            parts = [p for p in (word_text(left, latex), shift_text(delta, latex), fw) if p]
            out.append(f"({render(c, latex=latex)}){' ' if latex else '*'}{(' ' if latex else '*').join(parts)}")
        return " + ".join(out)

    def __str__(self):
        return self.text()

    def to_json(self):
        return {
            "terms": [
                {"left": [symbol_text(s) for s in left], "shift": list(delta), "fword": list(f),
                 "coeff": render(c)}
                for (left, delta, f), c in sorted(self.terms.items(), key=lambda kv: repr(kv[0]))
            ]
        }


# the engine


class RadialEngine:
    """Per-context recursion state (memo tables) for the two decompositions."""

    def __init__(self, ctx):
        self.ctx = ctx
        alg = ctx.alg
        self.alg = alg
        self.cart = ctx.cartan
        self.lam = (1,) * ctx.r
        self.zero_shift = (0,) * ctx.r
        self._iw = {}
        self._rad = {}
        self._step_cache = {}
        self._left_canon = {}
        self._commute = {}
        n = ctx.n
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                self._commute[(i, j)] = i != j and self.cart.entry(i, j) == 0

    # helpers

    def unit(self, i):
        v = [0] * self.ctx.n
        v[i - 1] = 1
        return tuple(v)

    def qpair(self, x_doubled, word_or_weight):
        """q^{(x, wt)} for x in doubled coordinates."""
        wt = word_or_weight
        return qpow(self.cart.pair_doubled(x_doubled, wt))

    def qlam(self, delta, wt):
        """q^{(λ + δ, wt)}."""
        return self.alg.kfactor(self.ctx.torus_vector(delta), self.lam, tuple(wt))

    def split(self, beta, delta):
        """K_{λ+δ}K_β = K_γ K_{λ+δ'}; returns (γ or None, δ')."""
        gamma, dl = self.ctx.decompose_K(beta)
        d2 = tuple(a + b for a, b in zip(delta, self.ctx.torus_coords(dl)))
        return (gamma if any(gamma) else None), d2

    def canon_word(self, w):
        """Lexicographically least word equal to F_w modulo commuting letters."""
        w = list(w)
        out = []
        while w:
            best = None
            for p, x in enumerate(w):
                if all(self._commute[(y, x)] for y in w[:p]):
                    if best is None or x < w[best]:
                        best = p
            out.append(w.pop(best))
        return tuple(out)

    def canon_left(self, word):
        """Move K symbols to the front where they commute up to a q-power.

        Returns (new word, scalar factor).
        """
        r = self._left_canon.get(word)
        if r is not None:
            return r
        ctx = self.ctx
        syms = list(word)
        fac = one()
        changed = True
        while changed:
            changed = False
            for p in range(1, len(syms)):
                a, b = syms[p - 1], syms[p]
                if b[0] != "K" or a[0] == "K":
                    continue
                gamma = b[1]
                kind, i = a
                if kind == "B":
                    if ctx.left.s[i] and self.cart.pair_doubled(gamma, self.unit(i)):
                        continue
                    # B_i K_γ = q^{(γ, α_i)} K_γ B_i
                    fac = fac * self.qpair(gamma, self.unit(i))
                elif kind == "E":
                    fac = fac * self.qpair(gamma, self.unit(i)).inverse()
                else:
                    fac = fac * self.qpair(gamma, self.unit(i))
                syms[p - 1], syms[p] = b, a
                changed = True
            merged = []
            for s in syms:
                if s[0] == "K" and merged and merged[-1][0] == "K":
                    merged[-1] = ("K", rv_add(merged[-1][1], s[1]))
                    changed = True
                else:
                    merged.append(s)
            syms = [s for s in merged if not (s[0] == "K" and not any(s[1]))]
        r = (tuple(syms), fac)
        self._left_canon[word] = r
        return r

    def _prefix(self, acc, prefix, terms, c):
        """acc += c · prefix · terms (left-multiplication on the left leg)."""
        for (left, d, right), x in terms.items():
            w, f = self.canon_left(prefix + left)
            _add_into(acc, (w, d, right), x * c * f)

    # quantum Iwasawa decomposition

    def iwasawa_word(self, w, beta):
        """E_w K_{λ+β} as Σ coeff · (left) K_{λ+δ} F_prefix with F_prefix to the left of any F-tail."""
        key = (w, beta)
        memo = _memo_on()
        if memo and key in self._iw:
            return self._iw[key]
        ctx, cart, alg = self.ctx, self.cart, self.alg
        out = {}
        if not w:
            gamma, d = self.split(beta, self.zero_shift)
            left = (("K", gamma),) if gamma else ()
            out[(left, d, ())] = one()
        else:
            u1, rest = w[0], w[1:]
            t = ctx.tau[u1 - 1]
            p = ctx.left
            cinv = p.c[t].inverse()
            at = cart.alpha(t)
            base = cinv * self.qpair(at, cart.weight(rest))
            b1 = rv_add(beta, at)
            # F_t K_t part: pull F_t through E_rest and K_{λ+β+α_t}
            fac = self.alg.kfactor(b1, self.lam, self.unit(t))
            for (left, d, f), x in self.iwasawa_word(rest, b1).items():
                _add_into(out, (left, d, f + (t,)), x * base * fac)
            diff = alg._gen_diff[t]
            for pos, letter in enumerate(rest):
                if letter != t:
                    continue
                xx = cart.pair_doubled(at, cart.weight(rest[pos + 1:]))
                w2 = rest[:pos] + rest[pos + 1:]
                _merge(out, self.iwasawa_word(w2, rv_add(b1, at)), -base * qpow(xx) * diff)
                _merge(out, self.iwasawa_word(w2, tuple(a - b for a, b in zip(b1, at))), base * qpow(-xx) * diff)
            # B_t K_t part
            self._prefix(out, (("B", t),), self.iwasawa_word(rest, b1), -base)
            if p.s[t]:
                _merge(out, self.iwasawa_word(rest, beta), p.s[t] * cinv)
            r = p.r(t)
            if r:
                _merge(out, self.iwasawa_word(rest, b1), r * base)
        out = {k: v for k, v in out.items() if v}
        if memo:
            self._iw[key] = out
        return out

    def iwasawa(self, y):
        """K_λ·y as a BANDecomposition."""
        ctx, cart = self.ctx, self.cart
        X = ctx.X
        out = {}
        lam = self.lam
        zs = (0,) * ctx.r
        for (e, kc, ks, f), c in y.terms.items():
            if ks == zs:
                c = c * self.alg.kfactor(rv_zero(ctx.n), lam, cart.weight(e))
            elif ks != lam:
                raise ValueError("element must be free of K_λ or carry exactly one factor K_λ")
            eX = tuple(i for i in e if i in X)
            eN = tuple(i for i in e if i not in X)
            fX = tuple(i for i in f if i in X)
            fN = tuple(i for i in f if i not in X)
            if fX:
                c = c * self.qpair(kc, cart.weight(fX)).inverse()
            prefix = tuple(("E", i) for i in eX) + tuple(("F", i) for i in fX)
            for (left, d, fp), x in self.iwasawa_word(eN, kc).items():
                word, fac = self.canon_left(prefix + left)
                _add_into(out, (word, d, self.canon_word(fp + fN)), c * x * fac)
        return BANDecomposition(ctx, out)

    # radial decomposition of K_{λ+δ} F_U

    def step_identity(self, U, delta):
        """One rotation step, sub-words left unresolved.

        K_{λ+δ}F_U = C·K_{λ+δ}F_{rot U} + Σ coeff · (left) K_{λ+δ'} F_W (right).
        Returns (C, rot U, {(left, δ', W, right): coeff}).
        """
        ctx, cart, alg = self.ctx, self.cart, self.alg
        U = tuple(U)
        u = U[-1]
        Up = U[:-1]
        j = ctx.tau[u - 1]
        pl, pr = ctx.left, ctx.right
        au, aj = cart.alpha(u), cart.alpha(j)
        wUp = cart.weight(Up)
        out = {}

        def add(coeff, left, d, W, right=()):
            W = self.canon_word(W)
            w, f = self.canon_left(left)
            _add_into(out, (w, d, W, right), coeff * f)

        def add_split(coeff, beta, W):
            gamma, d2 = self.split(beta, delta)
            add(coeff, (("K", gamma),) if gamma else (), d2, W)

        add(one(), (), delta, Up, (("B", u),))
        neg_au = tuple(-x for x in au)
        if pr.s[u]:
            add_split(-pr.s[u] * self.qpair(au, wUp).inverse(), neg_au, Up)
        r = pr.r(u)
        if r:
            add(-r, (), delta, Up)
        diff = alg._gen_diff[j]
        du = pr.c[u]
        for p, letter in enumerate(Up):
            if letter != j:
                continue
            W = Up[:p] + Up[p + 1:]
            y = cart.pair_doubled(aj, cart.weight(Up[:p]))
            x = cart.pair_doubled(au, cart.weight(W))
            add_split(-du * diff * qpow(y - x), rv_add(aj, neg_au), W)
            add_split(du * diff * qpow(-y - x), tuple(-a - b for a, b in zip(aj, au)), W)
        M = du * pl.c[u].inverse() * self.qlam(delta, self.unit(j)) * self.qpair(au, wUp).inverse()
        C = M * self.qlam(delta, self.unit(u))
        add(-M, (("B", u),), delta, Up)
        if pl.s[u]:
            add_split(M * pl.s[u], neg_au, Up)
        rl = pl.r(u)
        if rl:
            add(M * rl, (), delta, Up)
        return C, self.canon_word((u,) + Up), {k: v for k, v in out.items() if v}

    def _step(self, U, delta):
        """K_{λ+δ}F_U = C · K_{λ+δ}F_{rot U} + pending terms (resolved)."""
        key = (U, delta)
        hit = self._step_cache.get(key) if _memo_on() else None
        if hit is not None:
            return hit
        C, _, mixed = self.step_identity(U, delta)
        dens = set()
        pend = {}
        for (left, d, W, right), c in mixed.items():
            terms, ds = self.radial(W, d)
            dens |= ds
            for (l2, d2, r2), x in terms.items():
                w, f = self.canon_left(left + l2)
                _add_into(pend, (w, d2, r2 + right), c * x * f)
        pend = {k: v for k, v in pend.items() if v}
        res = (C, pend, frozenset(dens))
        if _memo_on():
            self._step_cache[key] = res
        return res

    def radial(self, U, delta):
        """K_{λ+δ}F_U over I\\X; returns (terms, denominators)."""
        U = self.canon_word(tuple(U))
        key = (U, delta)
        memo = _memo_on()
        if memo and key in self._rad:
            return self._rad[key]
        if not U:
            res = ({((), delta, ()): one()}, frozenset())
            if memo:
                self._rad[key] = res
            return res
        chain = [U]
        steps = []
        while True:
            steps.append(self._step(chain[-1], delta))
            last = chain[-1]
            nxt = self.canon_word((last[-1],) + last[:-1])
            if nxt in chain:
                start = chain.index(nxt)
                break
            chain.append(nxt)
        # solve the cycle chain[start:] and back-substitute
        total = {}
        acc = one()
        dens = set()
        for C, pend, ds in steps[start:]:
            _merge(total, pend, acc)
            dens |= ds
            acc = acc * C
        den = one() - acc
        if not den:
            raise IdenticallySingular(chain[start], "rotation coefficient product is identically 1")
        dens.add(den)
        inv = den.inverse()
        cur = {k: v * inv for k, v in total.items() if v}
        results = {chain[start]: cur}
        for idx in range(start - 1, -1, -1):
            C, pend, ds = steps[idx]
            dens |= ds
            nxt_terms = {}
            _merge(nxt_terms, pend)
            _merge(nxt_terms, cur, C)
            cur = {k: v for k, v in nxt_terms.items() if v}
            results[chain[idx]] = cur
        fd = frozenset(dens)
        if memo:
            for w, terms in results.items():
                self._rad.setdefault((w, delta), (terms, fd))
        return results[U], fd


def engine(ctx):
    eng = ctx.__dict__.get("_engine")
    if eng is None:
        eng = RadialEngine(ctx)
        ctx._engine = eng
    return eng


def _zero_shift(ctx):
    return (0,) * ctx.r


def _shift_arg(ctx, shift):
    if shift is None:
        return _zero_shift(ctx)
    shift = tuple(int(m) for m in shift)
    if len(shift) != ctx.r:
        raise InvalidConfig(f"shift needs {ctx.r} torus coordinates")
    return shift


def iwasawa_decompose(ctx, y):
    """K_λ·y = Σ (left coideal word) K_{λ+δ} F_V."""
    return engine(ctx).iwasawa(y)


def radial_decompose_word(ctx, U, shift=None):
    """K_{λ+δ}F_U ∈ B̌_{c,s} Ǎ B̌_{d,t}."""
    eng = engine(ctx)
    U = tuple(U)
    for i in U:
        ctx.cartan.check_index(i)
    delta = _shift_arg(ctx, shift)
    UX = tuple(i for i in U if i in ctx.X)
    UN = tuple(i for i in U if i not in ctx.X)
    terms, dens = eng.radial(UN, delta)
    if UX:
        out = {}
        eng._prefix(out, tuple(("F", i) for i in UX), terms, one())
        terms = out
    return BABDecomposition(ctx, terms, sorted(dens, key=render))


def pi(ctx, y, parallel=False):
    """Π(y)(K_λ): Iwasawa decomposition followed by the radial recursion.

    With ``parallel`` the distinct (F-word, shift) jobs run on a thread pool;
    results are merged in the sequential order, so the output is identical.
    """
    eng = engine(ctx)
    ban = eng.iwasawa(y)
    jobs = list(dict.fromkeys((f, delta) for (left, delta, f) in ban.terms))
    if parallel and len(jobs) > 1:
        with ThreadPoolExecutor() as pool:
            results = dict(zip(jobs, pool.map(lambda job: eng.radial(*job), jobs)))
    else:
        results = {job: eng.radial(*job) for job in jobs}
    out = {}
    dens = set()
    for (left, delta, f), c in ban.terms.items():
        terms, ds = results[(f, delta)]
        dens |= ds
        eng._prefix(out, left, terms, c)
    return BABDecomposition(ctx, out, sorted(dens, key=render))


# intermediate identities


class Identity:
    """lhs · K_{λ+δ}F_U = Σ coeff · (left) K_{λ+δ'} F_W (right).

    ``terms`` is keyed by (left, δ', W, right).  Sub-words W are left
    unresolved, which is the shape of a single recursion step.
    """

    def __init__(self, ctx, U, delta, lhs, terms):
        self.ctx = ctx
        self.U = tuple(U)
        self.delta = tuple(delta)
        self.lhs = as_ratfunc(lhs)
        eng = engine(ctx)
        self.terms = {}
        for (left, d, W, right), c in terms.items():
            w, f = eng.canon_left(tuple(left))
            _add_into(self.terms, (w, tuple(d), eng.canon_word(tuple(W)), tuple(right)), as_ratfunc(c) * f)

    def normalized(self):
        """(1, terms/lhs') with any K_{λ+δ}F_U term moved to the left side."""
        eng = engine(self.ctx)
        me = ((), self.delta, eng.canon_word(self.U), ())
        lhs = self.lhs - self.terms.get(me, zero())
        if not lhs:
            raise IdenticallySingular(self.U, "identity has no K_λF_U component")
        inv = lhs.inverse()
        return {k: v * inv for k, v in self.terms.items() if k != me}

    def __eq__(self, other):
        return (isinstance(other, Identity) and self.U == other.U and self.delta == other.delta
                and self.normalized() == other.normalized())

    __hash__ = None

    def difference(self, other):
        """Term keys on which two identities disagree after normalizing."""
        a, b = self.normalized(), other.normalized()
        return sorted((k for k in set(a) | set(b) if a.get(k) != b.get(k)), key=repr)

    def residual(self):
        """lhs·K_{λ+δ}F_U − Σ (expanded in Ǔ_q(g')); zero iff the identity holds."""
        ctx, alg = self.ctx, self.ctx.alg
        lam = (1,) * ctx.r

        def fword(W):
            return reduce(lambda x, i: x * alg.F(i), W, alg.one())

        total = (alg.K(ctx.torus_vector(self.delta), lam) * fword(self.U)).scale(self.lhs)
        for (left, d, W, right), c in self.terms.items():
            x = ctx.expand_coideal(left, "left") * alg.K(ctx.torus_vector(d), lam) * fword(W)
            total = total - (x * ctx.expand_coideal(right, "right")).scale(c)
        return total

    def restricted(self):
        """Counit on both coideal legs: {(δ', W): coeff}, normalized to lhs 1."""
        ctx = self.ctx
        out = {}
        for (left, d, W, right), c in self.normalized().items():
            e = c
            for sym in left:
                e = e * ctx.counit_symbol(sym, "left")
            for sym in right:
                e = e * ctx.counit_symbol(sym, "right")
            _add_into(out, (d, W), e)
        return out

    def text(self, latex=False):
        body = " + ".join(
            f"({render(c, latex=latex)})*" + "*".join(
                x for x in (word_text(l, latex), shift_text(d, latex),
                            "F" + "".join(str(i) for i in W) if W else "", word_text(r, latex)) if x)
            for (l, d, W, r), c in sorted(self.terms.items(), key=lambda kv: repr(kv[0])))
        head = f"({render(self.lhs, latex=latex)})*{shift_text(self.delta, latex)}*F" + "".join(str(i) for i in self.U)
        return f"{head} = {body or '0'}"

    def __str__(self):
        return self.text()


def step_identity(ctx, U, shift=None):
    """K_{λ+δ}F_U = C·K_{λ+δ}F_{rot U} + (one-step terms)."""
    eng = engine(ctx)
    delta = _shift_arg(ctx, shift)
    U = eng.canon_word(tuple(U))
    C, rot, mixed = eng.step_identity(U, delta)
    terms = dict(mixed)
    _add_into(terms, ((), delta, rot, ()), C)
    return Identity(ctx, U, delta, one(), terms)


def cycle_identity(ctx, U, shift=None):
    """Follow the rotation steps from U until U recurs and add them up.

    (1 − ΠC)·K_{λ+δ}F_U = Σ_k (C_1⋯C_{k-1})·(terms of step k).
    """
    eng = engine(ctx)
    delta = _shift_arg(ctx, shift)
    U = eng.canon_word(tuple(U))
    acc = one()
    total = {}
    cur = U
    for _ in range(len(U) * len(U) + 2):
        C, rot, mixed = eng.step_identity(cur, delta)
        _merge(total, mixed, acc)
        acc = acc * C
        cur = rot
        if cur == U:
            return Identity(ctx, U, delta, one() - acc, total)
    raise ValueError(f"rotation chain of {U} does not return to it")


# round-trip oracle


def expand_to_uq(ctx, d):
    """Multiply out a BAB or BAN decomposition in Ǔ_q(g') (with symbolic K_λ)."""
    alg = ctx.alg
    lam = (1,) * ctx.r
    total = alg.zero()
    if isinstance(d, BANDecomposition):
        for (left, delta, f), c in d.terms.items():
            k = alg.K(ctx.torus_vector(delta), lam)
            total = total + (ctx.expand_coideal(left, "left") * k * alg.monomial((), None, None, f)).scale(c)
        return total
    for (left, delta, right), c in d.terms.items():
        k = alg.K(ctx.torus_vector(delta), lam)
        total = total + (ctx.expand_coideal(left, "left") * k * ctx.expand_coideal(right, "right")).scale(c)
    return total


def klambda(ctx, y=None, shift=None):
    """K_{λ+δ}·y as a PBW element."""
    alg = ctx.alg
    k = alg.K(ctx.torus_vector(_shift_arg(ctx, shift)), (1,) * ctx.r)
    return k if y is None else k * y


# regular points


class RegularityCondition:
    """c_V/d_V ≠ q^{(λ+δ+μ, Σ α_v + α_τv) − Σ_{i≠j}(α_vi, α_vj)}, stored as the
    nonvanishing function 1 − (d_V/c_V)·q^{…}."""

    def __init__(self, V, mu, value):
        self.V = V
        self.mu = mu
        self.value = value

    @property
    def fatal(self):
        return not self.value

    def text(self):
        return f"{render(self.value)} ≠ 0"

    def to_json(self):
        return {"subsequence": list(self.V), "mu": list(self.mu), "nonzero": render(self.value),
                "fatal": self.fatal}


def _submultisets(U):
    counts = {}
    for x in U:
        counts[x] = counts.get(x, 0) + 1
    keys = sorted(counts)
    out = [()]
    for k in keys:
        out = [s + (k,) * m for s in out for m in range(counts[k] + 1)]
    return [s for s in out if s]


def regularity_conditions(ctx, U, shift=None):
    """All conditions of the regular-point definition for F_U at K_{λ+δ}."""
    U = tuple(U)
    if not U:
        return []
    cart = ctx.cartan
    delta = ctx.torus_vector(_shift_arg(ctx, shift))
    lam = (1,) * ctx.r
    n = ctx.n
    mus = {rv_zero(n)}
    for u in U:
        au = cart.alpha(u)
        mu_u = tuple((a - b) // 2 for a, b in zip(au, ctx.theta(au)))
        mus = {rv_add(m, tuple(k * x for x in mu_u)) for m in mus for k in (-1, 0, 1)}
    out = []
    seen = set()
    for V in _submultisets(U):
        ratio = one()
        wsum = [0] * n
        for v in V:
            ratio = ratio * ctx.right.c[v] / ctx.left.c[v]
            wsum[v - 1] += 1
            wsum[ctx.tau[v - 1] - 1] += 1
        wv = cart.weight(V)
        cross = cart.pair_doubled(tuple(2 * x for x in wv), wv) - sum(2 * cart.form(v, v) for v in V)
        for mu in sorted(mus):
            base = rv_add(delta, mu)
            val = one() - ratio * ctx.alg.kfactor(base, lam, tuple(wsum)) * qpow(-cross)
            key = (V, val)
            if key in seen:
                continue
            seen.add(key)
            out.append(RegularityCondition(V, mu, val))
    return out


def pi_regularity_conditions(ctx, y):
    """Conditions for every Iwasawa term of K_λ·y."""
    out = []
    seen = set()
    for (left, delta, f), c in iwasawa_decompose(ctx, y).terms.items():
        for cond in regularity_conditions(ctx, f, delta):
            if cond.value not in seen:
                seen.add(cond.value)
                out.append(cond)
    return out


def z_factors(r):
    """Irreducible factors of the denominator of r that involve the torus."""
    out = []
    for fac, _ in r.den.factor()[1]:
        if RatFunc(fac).depends_on_torus():
            out.append(fac)
    return out


def divides_some(fac, conditions):
    for cond in conditions:
        num = cond.value.num
        if num.is_zero():
            continue
        g = num.gcd(fac)
        if g == fac or g == -fac:
            return True
    return False


# representations and q-difference operators


def mat_identity(n):
    return tuple(tuple(one() if i == j else zero() for j in range(n)) for i in range(n))


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return tuple(tuple(reduce(lambda s, k: s + a[i][k] * b[k][j], range(m), zero()) for j in range(p))
                 for i in range(n))


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a, c):
    return tuple(tuple(x * c for x in row) for row in a)


def mat_kron(a, b):
    return tuple(tuple(a[i][j] * b[k][l] for j in range(len(a[0])) for l in range(len(b[0])))
                 for i in range(len(a)) for k in range(len(b)))


def mat_transpose(a):
    return tuple(zip(*a))


def as_matrix(rows):
    return tuple(tuple(as_ratfunc(x) for x in row) for row in rows)


class Rep:
    """Finite dimensional representation on coideal symbols."""

    def __init__(self, dim, images=None, k_image=None):
        self.dim = dim
        self.images = {k: as_matrix(v) for k, v in (images or {}).items()}
        self.k_image = k_image
        for k, m in self.images.items():
            if len(m) != dim or any(len(row) != dim for row in m):
                raise ValueError(f"image of {k} is not {dim}×{dim}")

    def symbol(self, sym):
        m = self.images.get(sym)
        if m is not None:
            return m
        if sym[0] == "K" and self.k_image is not None:
            return as_matrix(self.k_image(sym[1]))
        raise MissingGeneratorImage(f"no image for {symbol_text(sym)}")

    def word(self, w):
        m = mat_identity(self.dim)
        for s in w:
            m = mat_mul(m, self.symbol(s))
        return m


def counit_rep(ctx, side):
    images = {}
    for i in ctx.nonX:
        images[("B", i)] = ((ctx.counit_symbol(("B", i), side),),)
    for j in ctx.X:
        images[("E", j)] = ((zero(),),)
        images[("F", j)] = ((zero(),),)
    return Rep(1, images, k_image=lambda beta: ((one(),),))


class QDiffOperator:
    """Σ_δ M_δ T_δ acting on vec(Φ) (row-major) with M_δ = t1(B) ⊗ t2(B')^T."""

    def __init__(self, dims, terms=None, denominators=()):
        self.dims = tuple(dims)
        self.terms = {}
        for k, m in (terms or {}).items():
            if any(x for row in m for x in row):
                self.terms[k] = m
        self.denominators = list(denominators)

    def __eq__(self, other):
        return isinstance(other, QDiffOperator) and self.dims == other.dims and self.terms == other.terms

    __hash__ = None

    def coefficient(self, shift):
        d = self.dims[0] * self.dims[1]
        return self.terms.get(tuple(shift), tuple(tuple(zero() for _ in range(d)) for _ in range(d)))

    def scalar(self, shift):
        """Coefficient of a 1×1 operator."""
        return self.coefficient(shift)[0][0]

    def scale(self, c):
        c = as_ratfunc(c)
        return QDiffOperator(self.dims, {k: mat_scale(m, c) for k, m in self.terms.items()}, self.denominators)

    def __add__(self, other):
        t = dict(self.terms)
        for k, m in other.terms.items():
            t[k] = mat_add(t[k], m) if k in t else m
        return QDiffOperator(self.dims, t, self.denominators + other.denominators)

    def act(self, phi):
        """Apply to a function shift ↦ d1×d2 matrix."""
        d1, d2 = self.dims
        out = [zero()] * (d1 * d2)
        for shift, m in self.terms.items():
            vec = [x for row in phi(shift) for x in row]
            for i in range(d1 * d2):
                s = out[i]
                for k in range(d1 * d2):
                    if m[i][k] and vec[k]:
                        s = s + m[i][k] * vec[k]
                out[i] = s
        return tuple(tuple(out[i * d2:(i + 1) * d2]) for i in range(d1))

    def text(self, latex=False):
        if not self.terms:
            return "0"
        out = []
        for shift in sorted(self.terms):
            m = self.terms[shift]
            if len(m) == 1:
                coeff = render(m[0][0], latex=latex)
            else:
                coeff = "[" + "; ".join(", ".join(render(x, latex=latex) for x in row) for row in m) + "]"
            out.append(f"({coeff})·T{list(shift)}" if not latex else f"\\left({coeff}\\right) T_{{{list(shift)}}}")
        return " + ".join(out)

    def latex(self):
        return self.text(latex=True)

    def __str__(self):
        return self.text()

    def to_json(self):
        return {
            "shifts": [
                {"mu": list(shift), "matrix": [[render(x) for x in row] for row in self.terms[shift]]}
                for shift in sorted(self.terms)
            ],
            "denominators": [render(d) for d in self.denominators],
        }


def apply_reps(d, t1, t2):
    """Π_{t1,t2}: replace each leg by its matrix image and collect by shift."""
    dims = (t1.dim, t2.dim)
    acc = {}
    for (left, delta, right), c in d.terms.items():
        a = t1.word(left)
        b = t2.word(right)
        m = mat_scale(mat_kron(a, mat_transpose(b)), c)
        acc[delta] = mat_add(acc[delta], m) if delta in acc else m
    return QDiffOperator(dims, acc, d.regularity_denominators)


def restrict_counit(d):
    ctx = d.ctx
    return apply_reps(d, counit_rep(ctx, "left"), counit_rep(ctx, "right"))


def check_cm_contract(ctx, y, t1, t2, phi):
    """Operator form versus the raw sum Σ c·t1(B)·φ(shift)·t2(B')."""
    d = pi(ctx, y)
    op = apply_reps(d, t1, t2)
    lhs = op.act(phi)
    rhs = None
    for (left, delta, right), c in d.terms.items():
        m = mat_scale(mat_mul(mat_mul(t1.word(left), phi(delta)), t2.word(right)), c)
        rhs = m if rhs is None else mat_add(rhs, m)
    if rhs is None:
        rhs = tuple(tuple(zero() for _ in range(t2.dim)) for _ in range(t1.dim))
    return lhs == rhs


# automorphisms


def flip_decomposition(d, perm, params=None, target=None):
    """Apply the diagram automorphism i ↦ perm[i-1] termwise.

    ``params`` is a substitution for the scalar generators (see
    RatFunc.subs_monomial); ``target`` is the context of the image.
    """
    ctx = d.ctx
    target = target or ctx
    perm = tuple(perm)

    def pv(beta):
        out = [0] * len(beta)
        for i, b in enumerate(beta):
            out[perm[i] - 1] += b
        return tuple(out)

    for g in ctx.torus:
        if pv(g) != tuple(g):
            raise ValueError("the automorphism must fix the torus basis")

    def word(w):
        return tuple((k, pv(a)) if k == "K" else (k, perm[a - 1]) for k, a in w)

    out = {}
    for (left, delta, right), c in d.terms.items():
        c2 = c.subs_monomial(params) if params else c
        _add_into(out, (word(left), delta, word(right)), c2)
    dens = [x.subs_monomial(params) if params else x for x in d.regularity_denominators]
    return BABDecomposition(target, out, dens)


def flip_element(x, perm, target_alg=None):
    """Diagram automorphism on a PBW element (scalars untouched)."""
    alg = target_alg or x.alg

    def pv(beta):
        out = [0] * len(beta)
        for i, b in enumerate(beta):
            out[perm[i] - 1] += b
        return tuple(out)

    total = alg.zero()
    for (e, kc, ks, f), c in x.terms.items():
        m = alg.monomial(tuple(perm[i - 1] for i in e), pv(kc), ks, tuple(perm[i - 1] for i in f), c)
        total = total + m
    return total
