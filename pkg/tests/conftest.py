import random
from functools import lru_cache

import pytest

from efftopo import RawTable, boolean_algebra, enumerate_all, horizontal_sum, mo, mv_chain, standard_catalog, validate


@lru_cache(maxsize=None)
def catalog():
    return tuple(standard_catalog())


@lru_cache(maxsize=None)
def small_algebras():
    return tuple(enumerate_all(6))


def corpus():
    """Catalogue instances plus every algebra with at most six elements."""
    return catalog() + small_algebras()


def atomic_lattices(max_n=12):
    return [E for E in corpus() if E.n <= max_n and E.is_lattice and E.is_atomic]


def el(E, *names):
    idx = tuple(E.index(x) for x in names)
    return idx[0] if len(idx) == 1 else idx


def relabelled(E, seed):
    """Random relabelling of ``E``'s carrier."""
    perm = list(range(E.n))
    random.Random(seed).shuffle(perm)
    names = [None] * E.n
    for x in range(E.n):
        names[perm[x]] = E.names[x]
    sums = {(perm[a], perm[b]): perm[c] for (a, b), c in E.table.sums.items()}
    return validate(RawTable(E.n, names, perm[E.zero], perm[E.one], sums), name=E.name)


@pytest.fixture
def C2():
    return mv_chain(2)


@pytest.fixture
def C3():
    return mv_chain(3)


@pytest.fixture
def C4():
    return mv_chain(4)


@pytest.fixture
def B2():
    return boolean_algebra(2)


@pytest.fixture
def B3():
    return boolean_algebra(3)


@pytest.fixture
def MO2():
    return horizontal_sum(boolean_algebra(2), boolean_algebra(2), name="MO2")


@pytest.fixture
def MO3():
    return mo(3)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
