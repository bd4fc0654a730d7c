"""Cartan data, the symmetric form and half-integral root lattices.

Root lattice vectors are stored in *doubled* coordinates: the tuple ``m``
stands for Σ_i (m_i/2) α_i, so Q̌ = ½ℤ[Q] is exactly ℤ^n.  Indices of simple
roots are 1-based everywhere in the public API.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import IndexOutOfRange, NotSymmetrizable


def _find_symmetrizer(a):
    n = len(a)
    eps = [None] * n
    for start in range(n):
        if eps[start] is not None:
            continue
        eps[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if a[i][j] == 0 and a[j][i] == 0:
                    continue
                if a[i][j] == 0 or a[j][i] == 0:
                    raise NotSymmetrizable(f"a[{i+1}][{j+1}] and a[{j+1}][{i+1}] disagree on zero")
                # eps_i a_ij = eps_j a_ji
                want = eps[i] * a[i][j] / a[j][i]
                if eps[j] is None:
                    eps[j] = want
                    stack.append(j)
                elif eps[j] != want:
                    raise NotSymmetrizable("no symmetrizer exists")
    # scale each connected piece to coprime positive integers
    out = [0] * n
    seen = set()
    for start in range(n):
        if start in seen:
            continue
        comp = _component(a, start)
        seen |= comp
        lcm = 1
        for i in comp:
            lcm = lcm * eps[i].denominator // gcd(lcm, eps[i].denominator)
        vals = {i: eps[i] * lcm for i in comp}
        g = 0
        for v in vals.values():
            g = gcd(g, int(v))
        for i in comp:
            out[i] = int(vals[i]) // g
    return tuple(out)


def _component(a, start):
    comp = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j in range(len(a)):
            if j not in comp and a[i][j] != 0:
                comp.add(j)
                stack.append(j)
    return comp


@dataclass(frozen=True)
class CartanMatrix:
    """Symmetrizable generalized Cartan matrix with symmetrizer ε.

    (α_i, α_j) = ε_i a_ij and q_i = q^{ε_i}.
    """

    a: tuple
    eps: tuple

    def __init__(self, a, eps=None):
        a = tuple(tuple(int(x) for x in row) for row in a)
        n = len(a)
        if any(len(row) != n for row in a):
            raise ValueError("Cartan matrix must be square")
        for i in range(n):
            if a[i][i] != 2:
                raise ValueError("diagonal entries must be 2")
            for j in range(n):
                if i != j and a[i][j] > 0:
                    raise ValueError("off-diagonal entries must be nonpositive")
        if eps is None:
            eps = _find_symmetrizer(a)
        else:
            eps = tuple(int(e) for e in eps)
            if len(eps) != n or any(e <= 0 for e in eps):
                raise NotSymmetrizable("symmetrizer must be positive of length n")
            for i in range(n):
                for j in range(n):
                    if eps[i] * a[i][j] != eps[j] * a[j][i]:
                        raise NotSymmetrizable(f"ε does not symmetrize at ({i+1},{j+1})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "eps", eps)
        form = tuple(tuple(eps[i] * a[i][j] for j in range(n)) for i in range(n))
        object.__setattr__(self, "_form", form)

    @property
    def n(self):
        return len(self.a)

    def form(self, i, j):
        """(α_i, α_j) for 1-based i, j."""
        self.check_index(i)
        self.check_index(j)
        return self._form[i - 1][j - 1]

    def entry(self, i, j):
        self.check_index(i)
        self.check_index(j)
        return self.a[i - 1][j - 1]

    def check_index(self, i):
        if not isinstance(i, int) or not 1 <= i <= self.n:
            raise IndexOutOfRange(f"index {i} outside 1..{self.n}")

    def qi_halves(self, i):
        """q_i = q^{ε_i} expressed as a power of q^{1/2}."""
        self.check_index(i)
        return 2 * self.eps[i - 1]

    # pairings

    def pair_doubled(self, x, y):
        """Σ x_i y_j (α_i, α_j) for integer coordinate vectors.

        With x in doubled coordinates and y an ordinary root-lattice vector
        this is the exponent of q^{1/2} in q^{(x/2, y)}.
        """
        f = self._form
        total = 0
        for i, xi in enumerate(x):
            if xi:
                row = f[i]
                for j, yj in enumerate(y):
                    if yj:
                        total += xi * yj * row[j]
        return total

    def bilinear(self, x, y):
        """(x, y) for doubled coordinate vectors, as a Fraction."""
        return Fraction(self.pair_doubled(x, y), 4)

    def alpha(self, i):
        """α_i in doubled coordinates."""
        self.check_index(i)
        v = [0] * self.n
        v[i - 1] = 2
        return tuple(v)

    def weight(self, word):
        """Σ α_{w_p} as an ordinary (undoubled) count vector."""
        v = [0] * self.n
        for i in word:
            self.check_index(i)
            v[i - 1] += 1
        return tuple(v)

    def is_finite_type(self):
        Fr = Fraction
        # positive definite symmetrized form via leading principal minors
        n = self.n
        m = [[Fr(self._form[i][j]) for j in range(n)] for i in range(n)]
        for k in range(n):
            piv = m[k][k]
            if piv <= 0:
                return False
            for r in range(k + 1, n):
                f = m[r][k] / piv
                for c in range(k, n):
                    m[r][c] -= f * m[k][c]
        return True


def rv_add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def rv_sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def rv_scale(k, x):
    return tuple(k * a for a in x)


def rv_zero(n):
    return (0,) * n


def doubled(word_weight):
    """Ordinary count vector to doubled coordinates."""
    return tuple(2 * a for a in word_weight)


def rho_doubled(cartan):
    """ρ in doubled coordinates, from (ρ, α_i^∨) = 1 (finite type)."""
    c = solve_rational(cartan.a, [1] * cartan.n)
    out = []
    for x in c:
        x = 2 * x
        if x.denominator != 1:
            raise ValueError("ρ is not in the half root lattice")
        out.append(int(x))
    return tuple(out)


def solve_rational(a, b):
    """Solve a x = b exactly for square nonsingular a."""
    n = len(a)
    m = [[Fraction(v) for v in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    for k in range(n):
        p = next((r for r in range(k, n) if m[r][k] != 0), None)
        if p is None:
            raise ValueError("singular system")
        m[k], m[p] = m[p], m[k]
        for r in range(n):
            if r != k and m[r][k] != 0:
                f = m[r][k] / m[k][k]
                m[r] = [x - f * y for x, y in zip(m[r], m[k])]
    return [m[i][n] / m[i][i] for i in range(n)]


def integer_kernel(rows, ncols):
    """Basis of {x ∈ ℤ^ncols : M x = 0} in Hermite normal form."""
    # unimodular column operations on M, tracked in U
    m = [list(r) for r in rows]
    u = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    piv_col = 0
    for r in range(len(m)):
        if piv_col >= ncols:
            break
        while True:
            nz = [c for c in range(piv_col, ncols) if m[r][c] != 0]
            if not nz:
                break
            c0 = min(nz, key=lambda c: abs(m[r][c]))
            _swap_cols(m, u, piv_col, c0)
            done = True
            for c in range(piv_col + 1, ncols):
                if m[r][c]:
                    f = m[r][c] // m[r][piv_col]
                    _addmul_col(m, u, c, piv_col, -f)
                    if m[r][c]:
                        done = False
            if done:
                piv_col += 1
                break
    basis = [tuple(u[i][c] for i in range(ncols)) for c in range(piv_col, ncols)]
    return _hnf_rows(basis)


def _swap_cols(m, u, a, b):
    if a == b:
        return
    for row in m:
        row[a], row[b] = row[b], row[a]
    for row in u:
        row[a], row[b] = row[b], row[a]


def _addmul_col(m, u, dst, src, f):
    for row in m:
        row[dst] += f * row[src]
    for row in u:
        row[dst] += f * row[src]


def _hnf_rows(vectors):
    rows = [list(v) for v in vectors]
    if not rows:
        return []
    ncols = len(rows[0])
    out = []
    col = 0
    while rows and col < ncols:
        nz = [r for r in rows if r[col] != 0]
        if not nz:
            col += 1
            continue
        while len([r for r in rows if r[col] != 0]) > 1:
            nz = [r for r in rows if r[col] != 0]
            p = min(nz, key=lambda r: abs(r[col]))
            for r in nz:
                if r is not p:
                    f = r[col] // p[col]
                    for k in range(ncols):
                        r[k] -= f * p[k]
        p = [r for r in rows if r[col] != 0][0]
        if p[col] < 0:
            for k in range(ncols):
                p[k] = -p[k]
        rows.remove(p)
        out.append(p)
        col += 1
    # reduce entries above pivots
    for i, p in enumerate(out):
        c = next(k for k in range(ncols) if p[k] != 0)
        for j in range(i):
            f = out[j][c] // p[c]
            if f:
                for k in range(ncols):
                    out[j][k] -= f * p[k]
    return [tuple(r) for r in out]
