from pathlib import Path

import pytest

from cleftlab.algebra import Quiver, Relation, field_algebra, path_algebra, type_a
from cleftlab.homology import injective, projective, simple

FIXTURES = Path(__file__).parent / "fixtures"


def kx2(p=2):
    return path_algebra(Quiver(("1",), (("x", "1", "1"),)), [Relation(((1, ("x", "x")),))], 2, p, name="k[x]/x^2")


@pytest.fixture(scope="session")
def k():
    return field_algebra(2)


@pytest.fixture(scope="session")
def a2():
    return type_a(2, 2)


@pytest.fixture(scope="session")
def dual_numbers():
    return kx2(2)


@pytest.fixture(scope="session")
def a2mods(a2):
    """S1, S2, P1, P2, I1, I2 over kA_2 (1 -> 2)."""
    return {"S1": simple(a2, 0), "S2": simple(a2, 1), "P1": projective(a2, 0), "P2": projective(a2, 1),
            "I1": injective(a2, 0), "I2": injective(a2, 1)}


@pytest.fixture
def fixtures():
    return FIXTURES
