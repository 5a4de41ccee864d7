import pytest

from predim.linalg import span, unit
from predim.structure import BilinearStructure

E0, E1, E2 = unit(0, 3), unit(1, 3), unit(2, 3)


def sub(*vectors, n=3, p=2):
    return span(vectors, n, p)


@pytest.fixture
def s1():
    """p=2, n=3, k=1 with the single relation e0∧e1."""
    return BilinearStructure.from_relations(2, 3, 1, [(1, 0, 0)])


@pytest.fixture
def s2():
    """p=2, n=3, k=1 with every bivector a relation."""
    return BilinearStructure.from_relations(2, 3, 1, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
