import pytest

from ellfgl.fgl import mu_registry, tate_fgl
from ellfgl.levels import solve_universal
from ellfgl.polyring import PolyRing, VarRegistry


@pytest.fixture(scope="session")
def mu_ring():
    return PolyRing(mu_registry())


@pytest.fixture(scope="session")
def mu_ring_qq():
    return PolyRing(mu_registry(), "QQ")


@pytest.fixture(scope="session")
def tate7(mu_ring):
    return tate_fgl(None, 7, mu_ring)


@pytest.fixture(scope="session")
def beta_ring():
    return PolyRing(VarRegistry([("beta", 1)]), "QQ")


@pytest.fixture(scope="session")
def eps_ring():
    return PolyRing(VarRegistry([("eps", 2)]), "QQ")


@pytest.fixture(scope="session")
def solved():
    cache = {}

    def get(N, order=10):
        if (N, order) not in cache:
            cache[(N, order)] = solve_universal(N, order=order)
        return cache[(N, order)]

    return get
