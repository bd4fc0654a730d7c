"""Built-in quantum symmetric pairs, Casimir elements and a_s elements."""

from dataclasses import dataclass, field

from .cartan import CartanMatrix, rho_doubled
from .errors import InvalidConfig
from .hopf import StarStructure
from .qsp import QSPContext
from .radial import flip_decomposition, flip_element
from .scalar import qpow


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    cartan: tuple
    X: tuple
    tau: tuple
    defaults: dict = field(default_factory=dict)
    flip: tuple = None
    notes: str = ""

    def context(self, **overrides):
        params = dict(self.defaults)
        params.update(overrides)
        return QSPContext(CartanMatrix(self.cartan), self.X, self.tau, **params)


_q = qpow(2)

ENTRIES = {
    "sl2": CatalogEntry(
        "sl2", ((2,),), (), (1,),
        {"c": [-1], "d": [-1], "s": [0], "t": [0], "offset": True},
        None,
        "type AIV, r = 1; every coideal is equivalent to B_{1,s}",
    ),
    "sl2xsl2": CatalogEntry(
        "sl2xsl2", ((2, 0), (0, 2)), (), (2, 1),
        {"c": [1, 1], "d": [1, 1]},
        (2, 1),
        "diagonal pair; every coideal is equivalent to B_{(1,1),0}",
    ),
    "sl3": CatalogEntry(
        "sl3", ((2, -1), (-1, 2)), (), (2, 1),
        {"c": [_q, _q * _q], "d": [_q * _q, _q]},
        (2, 1),
        "type AIV, r = 2; c_1c_2 = q^3 = d_1d_2 for star invariance",
    ),
    "sl3xsl3": CatalogEntry(
        "sl3xsl3", ((2, -1, 0, 0), (-1, 2, 0, 0), (0, 0, 2, -1), (0, 0, -1, 2)), (), (3, 4, 1, 2),
        {"c": [1, 1, 1, 1], "d": [1, 1, 1, 1]},
        None,
        "diagonal pair of rank 2; every coideal is equivalent to B_{1,0}",
    ),
    "affine_sl2": CatalogEntry(
        "affine_sl2", ((2, -2), (-2, 2)), (), (1, 2),
        {"c": [1, _q], "d": [_q, 1]},
        None,
        "q-Onsager coideal, rank 2 torus; no golden radial formulas",
    ),
}


def entry(name):
    try:
        return ENTRIES[name]
    except KeyError:
        raise InvalidConfig(f"unknown catalog entry {name!r}; known: {', '.join(ENTRIES)}") from None


def context(name, **overrides):
    return entry(name).context(**overrides)


# distinguished elements


def _diff2(alg):
    return (qpow(2) - qpow(-2)) ** -2


def casimir_sl2(alg):
    """Ω = (q^{-1}K + qK^{-1} − 2)/(q − q^{-1})² + EF."""
    k = alg.Ki(1)
    ki = alg.Ki(1, -1)
    return (k.scale(qpow(-2)) + ki.scale(qpow(2)) - 2).scale(_diff2(alg)) + alg.E(1) * alg.F(1)


def casimirs_sl2sl2(alg):
    out = []
    for i in (1, 2):
        k = alg.Ki(i)
        ki = alg.Ki(i, -1)
        out.append((k.scale(qpow(-2)) + ki.scale(qpow(2)) - 2).scale(_diff2(alg)) + alg.E(i) * alg.F(i))
    return tuple(out)


def sl3_root_vectors(alg):
    """E_3, Ě_3, F_3, F̌_3 built as q- and q^{-1}-commutators."""
    q, qi = qpow(2), qpow(-2)
    E1, E2, F1, F2 = alg.E(1), alg.E(2), alg.F(1), alg.F(2)
    return {
        "E3": E1 * E2 - (E2 * E1).scale(q),
        "E3check": E1 * E2 - (E2 * E1).scale(qi),
        "F3": F1 * F2 - (F2 * F1).scale(q),
        "F3check": F1 * F2 - (F2 * F1).scale(qi),
    }


def casimirs_sl3(alg):
    """The bracketed parts Ω̃_1, Ω̃_2 of the two q-commuting Casimir elements.

    The q^{±1} weights on the K·E_iF_i terms are the ones that make Ω̃_i
    q-commute with every generator under the relations used here.
    """
    K = alg.K
    rv = sl3_root_vectors(alg)
    d = _diff2(alg)
    t1 = (K((2, 2)).scale(qpow(-4)) + K((-2, 2)) + K((-2, -2)).scale(qpow(4))).scale(d)
    o1 = (t1 + (alg.Ki(2) * alg.E(1) * alg.F(1)).scale(qpow(-2))
          + (alg.Ki(1, -1) * alg.E(2) * alg.F(2)).scale(qpow(2)) - rv["E3check"] * rv["F3"])
    t2 = (K((2, 2)).scale(qpow(-4)) + K((2, -2)) + K((-2, -2)).scale(qpow(4))).scale(d)
    o2 = (t2 + (alg.Ki(2, -1) * alg.E(1) * alg.F(1)).scale(qpow(2))
          + (alg.Ki(1) * alg.E(2) * alg.F(2)).scale(qpow(-2)) - rv["E3"] * rv["F3check"])
    return o1, o2


# Ω̃_i·X = q^{e}·X·Ω̃_i, exponent e in halves of q, per generator (kind, index)
SL3_QCOMMUTATION = (
    {("E", 1): -2, ("E", 2): 2, ("F", 1): 2, ("F", 2): -2},
    {("E", 1): 2, ("E", 2): -2, ("F", 1): -2, ("F", 2): 2},
)


def casimirs(name, alg):
    if name == "sl2":
        return (casimir_sl2(alg),)
    if name == "sl2xsl2":
        return casimirs_sl2sl2(alg)
    if name == "sl3":
        return casimirs_sl3(alg)
    return ()


def a_s_element(alg):
    """a_s = K_{−ρ} (finite type only)."""
    if not alg.cartan.is_finite_type():
        raise InvalidConfig("a_s needs a Cartan matrix of finite type")
    return alg.K(tuple(-x for x in rho_doubled(alg.cartan)))


def compact_star(alg):
    return StarStructure(alg)


# flips


def flip_params(ctx, perm):
    """Scalar substitution exchanging c_i ↔ c_{perm(i)} for symbolic parameters.

    Parameters are looked up by name: a symbolic c_i must be the generator
    ``c{i}`` (similarly d, s, t) or a monomial in such generators.
    """
    images = {}
    for letter in ("c", "d", "s", "t"):
        for i, j in enumerate(perm, 1):
            if i != j:
                images[f"{letter}{i}"] = (1, {f"{letter}{j}": 1})
    return images


def flip(d, perm=(2, 1), params=None, target=None):
    """σ applied termwise to a decomposition.

    σ maps B_{c} to B_{σc}: pass ``target`` (the context with permuted
    numeric parameters) or ``params`` (a substitution for symbolic ones).
    """
    return flip_decomposition(d, perm, params, target)


def flip_y(x, perm=(2, 1), target_alg=None):
    return flip_element(x, perm, target_alg)


# classification


_TABLE = [
    {"type": "diag", "algebra": "g ⊕ g", "X": "∅", "tau": "i ↔ i+m", "simple": True, "equivalent": "B_{1,0}"},
    {"type": "AI", "algebra": "sl_{r+1}", "X": "∅", "tau": "id", "simple": True, "equivalent": "B_{1,0}"},
    {"type": "AIII case 2", "algebra": "sl_{r+1}, r = 2l+1", "X": "∅", "tau": "i ↦ r−i+1", "simple": True,
     "equivalent": "B_{1,s} with s nonzero only at entry l"},
    {"type": "AIV r=1", "algebra": "sl_2", "X": "∅", "tau": "id", "simple": True, "equivalent": "B_{1,s}",
     "catalog": "sl2"},
    {"type": "AIV r=2", "algebra": "sl_3", "X": "∅", "tau": "(1 2)", "simple": True, "equivalent": "B_{(c,c),0}",
     "catalog": "sl3"},
    {"type": "BI", "algebra": "so_{2r+1}", "X": "∅", "tau": "id", "simple": True, "equivalent": "B_{1,0}"},
    {"type": "BII r=1", "algebra": "so_3", "X": "∅", "tau": "id", "simple": True, "equivalent": "B_{1,0}"},
    {"type": "CI", "algebra": "sp_{2r}", "X": "∅", "tau": "id", "simple": True,
     "equivalent": "B_{1,s} with s = (0,…,0,s)"},
    {"type": "DI case 2", "algebra": "so_{2r}, r ≥ 3", "X": "∅", "tau": "(r−1 r)", "simple": True,
     "equivalent": "B_{1,0}"},
    {"type": "DI case 3", "algebra": "so_{2r}, r ≥ 4", "X": "∅", "tau": "id", "simple": True,
     "equivalent": "B_{1,0}"},
    {"type": "EI", "algebra": "e_6", "X": "∅", "tau": "id", "simple": True, "equivalent": "B_{1,0}"},
    {"type": "EII", "algebra": "e_6", "X": "∅", "tau": "(1 6)(3 5)", "simple": True, "equivalent": "B_{1,0}"},
    {"type": "EV", "algebra": "e_7", "X": "∅", "tau": "id", "simple": True, "equivalent": "B_{1,0}"},
    {"type": "EVIII", "algebra": "e_8", "X": "∅", "tau": "id", "simple": True, "equivalent": "B_{1,0}"},
    {"type": "FI", "algebra": "f_4", "X": "∅", "tau": "id", "simple": True, "equivalent": "B_{1,0}"},
    {"type": "G", "algebra": "g_2", "X": "∅", "tau": "id", "simple": True, "equivalent": "B_{1,0}"},
]


def classification_table():
    return [dict(row) for row in _TABLE]


def entry_json(e):
    return {
        "name": e.name,
        "cartan": [list(r) for r in e.cartan],
        "X": list(e.X),
        "tau": list(e.tau),
        "defaults": {k: ([str(x) for x in v] if isinstance(v, list) else v) for k, v in e.defaults.items()},
        "notes": e.notes,
    }
