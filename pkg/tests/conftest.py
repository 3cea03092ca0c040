import random

import pytest

from helpers import from_cycles
from rackbench.utils.algebra import permutation_rack, trivial_quandle
from rackbench.utils.perm import Perm


@pytest.fixture
def ex_not():
    return from_cycles(3, [], [(2, 3)], [(1, 3)])


@pytest.fixture
def ex_3quandle():
    return from_cycles(3, [(2, 3)], [(1, 3)], [(1, 2)])


@pytest.fixture
def ex_different():
    return from_cycles(3, [(1, 2)], [(1, 3)], [(2, 3)])


@pytest.fixture
def ex_conj():
    return from_cycles(4, [], [(1, 2, 3, 4)], [(1, 3), (2, 4)], [(2, 4)])


@pytest.fixture
def ex_5quandle():
    return from_cycles(
        5,
        [(3, 4, 5)],
        [(3, 5, 4)],
        [(1, 2), (4, 5)],
        [(1, 2), (3, 5)],
        [(1, 2), (3, 4)],
    )


@pytest.fixture
def v123():
    return permutation_rack(3, Perm.from_cycles(3, [(1, 2, 3)], one_based=True))


@pytest.fixture
def trivial3():
    return trivial_quandle(3)


@pytest.fixture
def rng():
    return random.Random(20240601)

