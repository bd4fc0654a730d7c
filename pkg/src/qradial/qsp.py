"""Quantum symmetric pairs with simple generators.

A coideal word is a tuple of symbols:

* ``("B", i)``    the generator B_i of the coideal on that side,
* ``("K", beta)`` K_β with Θβ = β (β in doubled coordinates),
* ``("E", j)`` / ``("F", j)`` for j ∈ X.

The left leg uses the parameters (c, s) and the right leg (d, t).
"""

from dataclasses import dataclass, field

from .cartan import CartanMatrix, integer_kernel, rv_add, rv_zero
from .errors import InvalidConfig
from .scalar import as_ratfunc, one, qpow, zero
from .uqg import PBWElement, QuantumGroup


@dataclass(frozen=True)
class AdmissiblePair:
    X: frozenset
    tau: tuple

    def __init__(self, X, tau):
        object.__setattr__(self, "X", frozenset(X))
        object.__setattr__(self, "tau", tuple(tau))


def validate_pair(cartan, pair):
    """Basic admissible-pair axioms; raises InvalidConfig."""
    n = cartan.n
    tau = pair.tau
    if sorted(tau) != list(range(1, n + 1)):
        raise InvalidConfig("τ must be a permutation of 1..n")
    for i in range(1, n + 1):
        if tau[tau[i - 1] - 1] != i:
            raise InvalidConfig("τ must be an involution")
        for j in range(1, n + 1):
            if cartan.entry(tau[i - 1], tau[j - 1]) != cartan.entry(i, j):
                raise InvalidConfig("τ must preserve the Cartan matrix")
    for j in pair.X:
        if not 1 <= j <= n:
            raise InvalidConfig(f"X contains {j}, outside 1..{n}")
        if tau[j - 1] not in pair.X:
            raise InvalidConfig("τ(X) must equal X")


def check_simple(cartan, pair):
    """(α_i, α_j) = 0 for all i ∈ X, j ∉ X.  Returns (ok, witness or None)."""
    for i in sorted(pair.X):
        for j in range(1, cartan.n + 1):
            if j not in pair.X and cartan.form(i, j) != 0:
                return False, (i, j)
    return True, None


@dataclass
class QSPParams:
    c: dict
    s: dict
    offset: bool = False

    def r(self, i):
        # constant term added so that the offset convention has ε(B_i) = 0
        return -self.s[i] if self.offset else zero()


def _param_dict(values, index_set, name):
    if values is None:
        return {i: zero() for i in index_set}
    if isinstance(values, dict):
        out = {int(k): as_ratfunc(v) for k, v in values.items()}
    else:
        values = list(values)
        if len(values) != len(index_set):
            raise InvalidConfig(f"{name} needs {len(index_set)} entries, got {len(values)}")
        out = {i: as_ratfunc(v) for i, v in zip(index_set, values)}
    if set(out) != set(index_set):
        raise InvalidConfig(f"{name} must be indexed by I\\X = {index_set}")
    return out


class QSPContext:
    """Cartan data, admissible pair, both parameter sets and the torus."""

    def __init__(self, cartan, X=(), tau=None, c=None, s=None, d=None, t=None,
                 offset=False, right_offset=None):
        if not isinstance(cartan, CartanMatrix):
            cartan = CartanMatrix(cartan)
        n = cartan.n
        if tau is None:
            tau = tuple(range(1, n + 1))
        pair = AdmissiblePair(X, tau)
        validate_pair(cartan, pair)
        ok, witness = check_simple(cartan, pair)
        if not ok:
            raise InvalidConfig(f"pair has no simple generators: (α_{witness[0]}, α_{witness[1]}) ≠ 0")
        self.cartan = cartan
        self.pair = pair
        self.n = n
        self.X = pair.X
        self.tau = pair.tau
        self.nonX = tuple(i for i in range(1, n + 1) if i not in pair.X)
        cc = _param_dict(c if c is not None else [1] * len(self.nonX), self.nonX, "c")
        dd = _param_dict(d if d is not None else [1] * len(self.nonX), self.nonX, "d")
        for name, vals in (("c", cc), ("d", dd)):
            for i, v in vals.items():
                if not v:
                    raise InvalidConfig(f"{name}_{i} must be nonzero")
        if right_offset is None:
            right_offset = offset
        self.left = QSPParams(cc, _param_dict(s, self.nonX, "s"), offset)
        self.right = QSPParams(dd, _param_dict(t, self.nonX, "t"), right_offset)
        self._theta = self._theta_matrix()
        self.torus = tuple(tuple(2 * x for x in v) for v in
                           integer_kernel([[self._theta[i][j] + (1 if i == j else 0)
                                            for j in range(n)] for i in range(n)], n))
        self.r = len(self.torus)
        self.alg = QuantumGroup(cartan, self.torus)
        self._expand_cache = {}
        self.memo = {}

    # involution on the root lattice

    def _theta_matrix(self):
        n = self.n
        m = [[0] * n for _ in range(n)]
        for i in range(1, n + 1):
            if i in self.X:
                m[i - 1][i - 1] = 1
            else:
                m[self.tau[i - 1] - 1][i - 1] = -1
        return m

    def theta(self, a):
        m = self._theta
        return tuple(sum(m[i][j] * a[j] for j in range(self.n)) for i in range(self.n))

    def is_fixed(self, a):
        return self.theta(a) == tuple(a)

    def is_anti(self, a):
        return self.theta(a) == tuple(-x for x in a)

    def decompose_K(self, alpha, beta=None):
        """γ = ½(α + Θα), δ = ½(α − Θα) + β in doubled coordinates."""
        alpha = tuple(alpha)
        beta = rv_zero(self.n) if beta is None else tuple(beta)
        if not self.is_anti(beta):
            raise ValueError("β must satisfy Θβ = −β")
        th = self.theta(alpha)
        s = [a + b for a, b in zip(alpha, th)]
        dlt = [a - b for a, b in zip(alpha, th)]
        if any(x % 2 for x in s):
            raise ValueError("K_α does not split inside the half lattice")
        gamma = tuple(x // 2 for x in s)
        delta = rv_add(tuple(x // 2 for x in dlt), beta)
        return gamma, delta

    def torus_coords(self, delta):
        """Doubled coordinates of δ over the torus basis (δ = Σ m_t/2 γ_t)."""
        if not self.is_anti(delta):
            raise ValueError("δ is not in the torus lattice")
        rest = list(delta)
        out = []
        for g in self.torus:
            piv = next(k for k, x in enumerate(g) if x)
            m = 2 * rest[piv] // g[piv] if rest[piv] else 0
            if m * g[piv] != 2 * rest[piv]:
                raise ValueError("δ is not in the half torus lattice")
            out.append(m)
            rest = [a - m * b // 2 for a, b in zip(rest, g)]
        if any(rest):
            raise ValueError("δ is not in the torus lattice")
        return tuple(out)

    def torus_vector(self, coords):
        out = rv_zero(self.n)
        for m, g in zip(coords, self.torus):
            out = rv_add(out, tuple(m * x // 2 for x in g))
        return out

    def lambda_ks(self):
        return (1,) * self.r

    # parameters

    def params(self, side):
        return self.left if side == "left" else self.right

    def check_params(self):
        """Membership of (c, s) and (d, t) in the sets C and S."""
        report = {}
        ins = self.nonspecial()
        for side in ("left", "right"):
            p = self.params(side)
            cname, sname = ("c", "s") if side == "left" else ("d", "t")
            viol_c = []
            for i in self.nonX:
                ti = self.tau[i - 1]
                if ti != i and self.cartan.bilinear(self.cartan.alpha(i), self.theta(self.cartan.alpha(i))) == 0:
                    if p.c[i] != p.c[ti]:
                        viol_c.append(f"{cname}_{i} = {cname}_{ti} required")
            viol_s = []
            for i in self.nonX:
                if not p.s[i]:
                    continue
                if i not in ins:
                    viol_s.append(f"{sname}_{i} ≠ 0 but {i} ∉ I_ns")
                    continue
                for j in ins:
                    if j != i:
                        a = self.cartan.entry(i, j)
                        if a > 0 or a % 2:
                            viol_s.append(f"{sname}_{i} ≠ 0 but a_{i}{j} = {a} ∉ −2ℕ₀")
            report[side] = {"in_C": not viol_c, "in_S": not viol_s, "violations": viol_c + viol_s}
        return report

    def nonspecial(self):
        """I_ns = {i ∉ X : τ(i) = i and α_i(h_j) = 0 for all j ∈ X}."""
        out = []
        for i in self.nonX:
            if self.tau[i - 1] != i:
                continue
            if any(self.cartan.entry(j, i) != 0 for j in self.X):
                continue
            out.append(i)
        return tuple(out)

    # coideal generators

    def _k(self, beta):
        return self.alg.K(beta)

    def generator(self, i, side):
        """B_i = F_i − c_i E_{τ(i)} K_i^{-1} + s_i K_i^{-1} (+ offset constant)."""
        p = self.params(side)
        if i not in p.c:
            raise InvalidConfig(f"B_{i} is not defined for i ∈ X")
        alg = self.alg
        kinv = alg.Ki(i, -1)
        out = alg.F(i) - (alg.E(self.tau[i - 1]) * kinv).scale(p.c[i])
        if p.s[i]:
            out = out + kinv.scale(p.s[i])
        r = p.r(i)
        if r:
            out = out + alg.scalar(r)
        return out

    def symbol_element(self, sym, side):
        kind, arg = sym
        alg = self.alg
        if kind == "B":
            return self.generator(arg, side)
        if kind == "K":
            if not self.is_fixed(arg):
                raise InvalidConfig(f"K symbol {arg} is not Θ-fixed")
            return alg.K(arg)
        if kind in ("E", "F"):
            if arg not in self.X:
                raise InvalidConfig(f"{kind}_{arg} is a coideal symbol only for indices in X")
            return alg.E(arg) if kind == "E" else alg.F(arg)
        raise InvalidConfig(f"unknown coideal symbol {sym!r}")

    def expand_coideal(self, word, side="left"):
        word = tuple(word)
        key = (word, side)
        r = self._expand_cache.get(key)
        if r is not None:
            return r
        if not word:
            r = self.alg.one()
        elif len(word) == 1:
            r = self.symbol_element(word[0], side)
        else:
            r = self.expand_coideal(word[:-1], side) * self.symbol_element(word[-1], side)
        self._expand_cache[key] = r
        return r

    def counit_symbol(self, sym, side):
        """ε of a coideal symbol."""
        kind, arg = sym
        if kind == "B":
            p = self.params(side)
            return p.s[arg] + p.r(arg)
        if kind == "K":
            return one()
        return zero()

    # star structures

    def check_star_invariance(self, star):
        """Parameter conditions and, where they hold, B_i* by expansion.

        Returns (ok, details) where details lists per side and index the
        parameter clause results and the expansion check.
        """
        from .hopf import StarStructure

        if not isinstance(star, StarStructure):
            raise TypeError("expected a StarStructure")
        mu, sigma = star.mu, star.sigma
        cart = self.cartan
        details = []
        ok = True
        for side in ("left", "right"):
            p = self.params(side)
            for i in self.nonX:
                mi = mu[i - 1]
                mti = mu[self.tau[i - 1] - 1]
                ti = self.tau[i - 1]
                si, sti = sigma[i - 1], sigma[ti - 1]
                if mti not in p.c:
                    details.append((side, i, "μτ(i) ∈ X", False))
                    ok = False
                    continue
                cbar = p.c[i].conjugate()
                want_c = cbar.inverse() * qpow(2 * (2 - cart.form(mi, mti))) * (si * sti)
                c_ok = p.c[mti] == want_c
                want_s = -cbar.inverse() * p.s[i].conjugate() * si
                s_ok = p.s[mti] == want_s
                entry = {"side": side, "i": i, "c_condition": c_ok, "s_condition": s_ok}
                if c_ok and s_ok:
                    lhs = star(self.generator(i, side))
                    beta = rv_add(cart.alpha(mti), tuple(-x for x in cart.alpha(mi)))
                    rhs = (self.alg.K(beta) * self.generator(mti, side)).scale(-si * cbar)
                    entry["expansion"] = lhs == rhs
                    ok = ok and entry["expansion"]
                else:
                    ok = False
                details.append(entry)
        return ok, details

    # equivalences

    def hopf_rescale(self, a):
        """Parameters of φ(B) for φ: E_i ↦ a_i E_i, F_i ↦ a_i^{-1} F_i.

        φ(B_i) = a_i^{-1}(F_i − c_i a_i a_{τ(i)} E_{τ(i)} K_i^{-1} + a_i s_i K_i^{-1}),
        so the image coideal has c'_i = c_i a_i a_{τ(i)} and s'_i = a_i s_i.
        Returns new (left, right) QSPParams.
        """
        a = {int(k): as_ratfunc(v) for k, v in (a.items() if isinstance(a, dict) else
                                                  zip(range(1, self.n + 1), a))}
        out = []
        for p in (self.left, self.right):
            c2 = {i: p.c[i] * a[i] * a[self.tau[i - 1]] for i in self.nonX}
            s2 = {i: p.s[i] * a[i] for i in self.nonX}
            out.append(QSPParams(c2, s2, p.offset))
        return tuple(out)

    def with_params(self, left=None, right=None):
        l = left or self.left
        r = right or self.right
        return QSPContext(self.cartan, self.X, self.tau, l.c, l.s, r.c, r.s,
                          offset=l.offset, right_offset=r.offset)


def rescale_map(ctx, a):
    """The Hopf automorphism E_i ↦ a_i E_i, F_i ↦ a_i^{-1} F_i on elements."""
    alg = ctx.alg
    a = [None] + [as_ratfunc(x) for x in a]

    def phi(x):
        out = {}
        for key, c in x.terms.items():
            e, kc, ks, f = key
            fac = one()
            for i in e:
                fac = fac * a[i]
            for i in f:
                fac = fac / a[i]
            out[key] = c * fac
        return PBWElement(alg, out)

    return phi
