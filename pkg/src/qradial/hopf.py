"""Hopf structure, the adjoint action and star structures on Ǔ_q(g')."""

from .errors import ContextMismatch
from .scalar import as_ratfunc, one
from .uqg import PBWElement, _add_into


class Tensor:
    """Element of A ⊗ A stored as {(key1, key2): coeff}."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms=None):
        self.alg = alg
        self.terms = terms or {}

    @classmethod
    def pure(cls, x, y):
        t = {}
        for k1, c1 in x.terms.items():
            for k2, c2 in y.terms.items():
                _add_into(t, (k1, k2), c1 * c2)
        return cls(x.alg, t)

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(t, k, c)
        return Tensor(self.alg, t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = as_ratfunc(c)
        return Tensor(self.alg, {k: x * c for k, x in self.terms.items()} if c else {})

    def __mul__(self, other):
        alg = self.alg
        out = {}
        for (a1, a2), c in self.terms.items():
            for (b1, b2), d in other.terms.items():
                left = alg.mul_monomials(a1, b1)
                right = alg.mul_monomials(a2, b2)
                cd = c * d
                for k1, x in left.items():
                    for k2, y in right.items():
                        _add_into(out, (k1, k2), cd * x * y)
        return Tensor(alg, out)

    def __eq__(self, other):
        return isinstance(other, Tensor) and self.terms == other.terms

    __hash__ = None

    def apply(self, f1, f2):
        """Σ f1(x) ⊗ f2(y), with f1/f2 acting on elements."""
        alg = self.alg
        out = Tensor(alg)
        for (k1, k2), c in self.terms.items():
            x = f1(PBWElement(alg, {k1: one()}))
            y = f2(PBWElement(alg, {k2: one()}))
            out = out + Tensor.pure(x, y).scale(c)
        return out

    def multiply(self):
        """m: A ⊗ A → A."""
        alg = self.alg
        out = {}
        for (k1, k2), c in self.terms.items():
            for k, x in alg.mul_monomials(k1, k2).items():
                _add_into(out, k, c * x)
        return PBWElement(alg, out)


def _check(x, y):
    if x.alg is not y.alg:
        raise ContextMismatch("elements live in different algebras")


def _gen_coproduct(alg, kind, i):
    one_ = alg.one()
    if kind == "E":
        return Tensor.pure(alg.E(i), one_) + Tensor.pure(alg.Ki(i), alg.E(i))
    return Tensor.pure(alg.F(i), alg.Ki(i, -1)) + Tensor.pure(one_, alg.F(i))


def coproduct(x):
    """Δ(E)=E⊗1+K⊗E, Δ(F)=F⊗K^{-1}+1⊗F, Δ(K)=K⊗K, extended multiplicatively."""
    alg = x.alg
    cache = alg.__dict__.setdefault("_delta_gen", {})
    out = Tensor(alg)
    for (e, kc, ks, f), c in x.terms.items():
        k = PBWElement(alg, {((), kc, ks, ()): one()})
        t = Tensor.pure(k, k)
        for i in reversed(e):
            g = cache.get(("E", i)) or cache.setdefault(("E", i), _gen_coproduct(alg, "E", i))
            t = g * t
        for i in f:
            g = cache.get(("F", i)) or cache.setdefault(("F", i), _gen_coproduct(alg, "F", i))
            t = t * g
        out = out + t.scale(c)
    return out


def counit(x):
    zk, zs = x.alg._zero_k, x.alg._zero_s
    total = as_ratfunc(0)
    for (e, kc, ks, f), c in x.terms.items():
        if not e and not f:
            total = total + c
    return total


def antipode(x):
    """S(E)=-K^{-1}E, S(F)=-FK, S(K_β)=K_{-β}; an algebra anti-homomorphism."""
    alg = x.alg
    out = alg.zero()
    for (e, kc, ks, f), c in x.terms.items():
        y = alg.scalar(c)
        for i in reversed(f):
            y = y * (alg.F(i) * alg.Ki(i)).scale(-1)
        y = y * PBWElement(alg, {((), tuple(-a for a in kc), tuple(-a for a in ks), ()): one()})
        for i in reversed(e):
            y = y * (alg.Ki(i, -1) * alg.E(i)).scale(-1)
        out = out + y
    return out


def adjoint(x, y):
    """ad(x)(y) = Σ x_(1) y S(x_(2))."""
    _check(x, y)
    alg = x.alg
    out = alg.zero()
    for (k1, k2), c in coproduct(x).terms.items():
        a = PBWElement(alg, {k1: c})
        b = PBWElement(alg, {k2: one()})
        out = out + a * y * antipode(b)
    return out


class StarStructure:
    """K_i* = K_{μ(i)}, E_i* = σ_i K_{μ(i)} F_{μ(i)}, F_i* = σ_i E_{μ(i)} K_{μ(i)}^{-1}.

    ``mu`` is a tuple of images (1-based), ``sigma`` a tuple of ±1.  The map
    is a conjugate-linear anti-automorphism; all scalars are real here.
    """

    def __init__(self, alg, mu=None, sigma=None):
        n = alg.n
        self.alg = alg
        self.mu = tuple(mu) if mu is not None else tuple(range(1, n + 1))
        self.sigma = tuple(sigma) if sigma is not None else (1,) * n
        if sorted(self.mu) != list(range(1, n + 1)):
            raise ValueError("μ must be a permutation")
        for i in range(1, n + 1):
            j = self.mu[i - 1]
            if self.mu[j - 1] != i:
                raise ValueError("μ must be an involution")
            for k in range(1, n + 1):
                if alg.cartan.entry(j, self.mu[k - 1]) != alg.cartan.entry(i, k):
                    raise ValueError("μ must be a diagram automorphism")
            if self.sigma[i - 1] not in (1, -1):
                raise ValueError("σ_i must be ±1")
            if j != i and self.sigma[i - 1] != 1:
                raise ValueError("σ_i must be 1 when μ moves i")

    def permute(self, beta):
        out = [0] * len(beta)
        for i, b in enumerate(beta, start=1):
            out[self.mu[i - 1] - 1] += b
        return tuple(out)

    def gen_E(self, i):
        alg = self.alg
        m = self.mu[i - 1]
        return (alg.Ki(m) * alg.F(m)).scale(self.sigma[i - 1])

    def gen_F(self, i):
        alg = self.alg
        m = self.mu[i - 1]
        return (alg.E(m) * alg.Ki(m, -1)).scale(self.sigma[i - 1])

    def __call__(self, x):
        alg = self.alg
        if x.alg is not alg:
            raise ContextMismatch("star structure belongs to another algebra")
        out = alg.zero()
        for (e, kc, ks, f), c in x.terms.items():
            if any(ks):
                raise ValueError("star of symbolic torus elements is not defined")
            y = alg.scalar(c.conjugate())
            for i in reversed(f):
                y = y * self.gen_F(i)
            y = y * alg.K(self.permute(kc))
            for i in reversed(e):
                y = y * self.gen_E(i)
            out = out + y
        return out


def compact_star(alg):
    return StarStructure(alg)
