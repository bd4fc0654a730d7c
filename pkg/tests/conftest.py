import random

import pytest

from qradial import catalog
from qradial.scalar import laurent, qpow

ALGEBRAS = tuple(catalog.ENTRIES)

q = qpow(2)
u = qpow(1)


def sym(name):
    return laurent({name: 1})


def random_element(alg, rng, degree=2, terms=2):
    """Sum of random products of E_i, F_i, K_i^{±1} with small integer coefficients."""
    out = alg.zero()
    for _ in range(terms):
        x = alg.scalar(rng.choice([1, 2, -1, 3]))
        for _ in range(rng.randint(0, degree)):
            kind = rng.choice("EFK")
            i = rng.randint(1, alg.n)
            if kind == "E":
                g = alg.E(i)
            elif kind == "F":
                g = alg.F(i)
            else:
                g = alg.Ki(i, rng.choice([1, -1]))
            x = x * g
        out = out + x.scale(qpow(rng.randint(-2, 2)))
    return out


def generators(alg):
    gens = []
    for i in range(1, alg.n + 1):
        gens += [alg.E(i), alg.F(i), alg.Ki(i), alg.Ki(i, -1)]
    return gens


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(params=ALGEBRAS)
def any_ctx(request):
    return catalog.context(request.param)
