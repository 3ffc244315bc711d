from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efftopo import mv_chain
from efftopo import topo
from efftopo.core import mask_of
from efftopo.errors import CarrierMismatch, DomainMismatch, NotALattice
from efftopo.topo import Topology, topology_from_subbasis

from conftest import el, small_algebras

SIERPINSKI = topology_from_subbasis(2, [{0}])


def closure_oracle(n, subbasis):
    """Open family generated by ``subbasis``, by naive fixpoint iteration."""
    full = (1 << n) - 1
    fam = {0, full} | set(subbasis)
    while True:
        new = {a & b for a in fam for b in fam} | {a | b for a in fam for b in fam}
        if new <= fam:
            return fam
        fam |= new


@st.composite
def subbases(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    sets = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=6))
    return n, sets


# generic finite topologies


def test_subbasis_basic_cases():
    assert topology_from_subbasis(3, []).opens == (0, 7)
    assert topology_from_subbasis(3, [{0}, {1}, {2}]).open_count() == 8
    assert SIERPINSKI.opens == (0, 0b01, 0b11)


def test_hausdorff_and_discrete():
    assert not topo.is_hausdorff(SIERPINSKI)
    D = Topology.discrete(4)
    assert topo.is_hausdorff(D) and topo.is_discrete(D)
    indis = Topology.indiscrete(3)
    assert not topo.is_hausdorff(indis) and not topo.is_discrete(indis)
    assert topo.is_compact(indis)


def test_finer_and_equal():
    D, I = Topology.discrete(3), Topology.indiscrete(3)
    assert topo.finer_than(D, I) and not topo.finer_than(I, D)
    assert topo.topologies_equal(D, D)
    with pytest.raises(CarrierMismatch):
        topo.finer_than(D, Topology.discrete(2))


def test_product_and_subspace():
    D = Topology.discrete(3)
    assert topo.is_discrete(topo.product_topology(D, Topology.discrete(2)))
    assert topo.is_discrete(topo.subspace_topology(D, {0, 2}))
    point = Topology.discrete(1)
    assert topo.topologies_equal(topo.product_topology(SIERPINSKI, point), SIERPINSKI)
    assert topo.subspace_topology(SIERPINSKI, {1}).nbhd == (1,)


def test_continuity_examples(C3):
    T = topo.order_topology(C3)
    assert topo.is_continuous(list(range(C3.n)), T, T)
    assert topo.is_continuous(list(C3.ortho), Topology.discrete(C3.n), T)
    assert topo.is_continuous([0, 1], SIERPINSKI, SIERPINSKI)
    assert not topo.is_continuous([0, 1], SIERPINSKI, Topology.discrete(2))
    with pytest.raises(DomainMismatch):
        topo.is_continuous([0, 5], SIERPINSKI, SIERPINSKI)


def test_partial_map_uses_trace_topology():
    # on the trace {1} of Sierpinski space every map is continuous
    assert topo.is_continuous([None, 0], SIERPINSKI, Topology.discrete(2))
    assert not topo.is_continuous([1, 0, None], topology_from_subbasis(3, [{0}]), Topology.discrete(2))


def test_from_opens_rejects_non_topology():
    with pytest.raises(ValueError):
        Topology.from_opens(3, [0, 0b001, 0b010, 0b111])


@settings(max_examples=150, deadline=None)
@given(subbases())
def test_subbasis_matches_closure_oracle(case):
    n, sets = case
    T = topology_from_subbasis(n, sets)
    assert set(T.opens) == closure_oracle(n, sets)


@settings(max_examples=150, deadline=None)
@given(subbases(max_n=10))
def test_subbasis_idempotent(case):
    n, sets = case
    T = topology_from_subbasis(n, sets)
    assert topology_from_subbasis(n, T.opens) == T


@settings(max_examples=100, deadline=None)
@given(subbases(max_n=5), subbases(max_n=4))
def test_product_matches_rectangles(a, b):
    (n1, s1), (n2, s2) = a, b
    T1, T2 = topology_from_subbasis(n1, s1), topology_from_subbasis(n2, s2)
    rects = [mask_of(i * n2 + j for i in range(n1) for j in range(n2) if U >> i & 1 and V >> j & 1)
             for U in T1.opens for V in T2.opens]
    assert topo.product_topology(T1, T2) == topology_from_subbasis(n1 * n2, rects)


@settings(max_examples=100, deadline=None)
@given(subbases(max_n=6), st.data())
def test_continuity_by_open_preimages(case, data):
    n, sets = case
    T = topology_from_subbasis(n, sets)
    f = data.draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    expected = all(T.is_open(mask_of(x for x in range(n) if U >> f[x] & 1)) for U in T.opens)
    assert topo.is_continuous(f, T, T) == expected


# topologies of an effect algebra


def test_interval_topology_examples(C3, B2):
    assert topo.is_discrete(topo.interval_topology(C3))
    assert topo.is_discrete(topo.interval_topology(B2))


def test_directed_pair_criterion_examples(C3, B2):
    assert topo.lemma22_is_open(C3, {el(C3, "a")})
    assert topo.lemma22_is_open(C3, C3.full)
    assert topo.lemma22_is_open(B2, {el(B2, "p")})


def test_order_topology_examples(C4, MO2, B2):
    for E in (C4, MO2, B2):
        assert topo.is_discrete(topo.order_topology(E))


def test_ideals(C3, B2):
    assert [I.members for I in topo.ideals(C3)] == [C3.down[x] for x in range(C3.n)]
    assert len(topo.ideals(B2)) == 4
    for E in (C3, B2):
        assert topo.Ideal(1 << E.zero) in topo.ideals(E)


def test_completely_irreducible(C3, B2):
    ci = topo.completely_irreducible(C3, topo.ideals(C3))
    assert len(ci) == 4
    assert topo.Ideal(C3.down[el(C3, "2a")]) in ci
    p, q = el(B2, "p", "q")
    ci = {I.members for I in topo.completely_irreducible(B2, topo.ideals(B2))}
    assert B2.down[p] in ci and B2.down[q] in ci
    assert B2.down[B2.zero] not in ci


@pytest.mark.parametrize("n", range(1, 7))
def test_chain_proper_ideals_irreducible(n):
    E = mv_chain(n)
    ci = {I.members for I in topo.completely_irreducible(E, topo.ideals(E))}
    assert all(E.down[x] in ci for x in range(E.n) if x != E.one)


def test_frink_examples(C3, B2, B3):
    for E in (C3, B2, B3):
        assert topo.is_discrete(topo.frink_ideal_topology(E))
    assert topo.finer_than(topo.frink_ideal_topology(C3), topo.interval_topology(C3))


def test_clopen_upper_sets(C3, B2):
    T = topo.order_topology(C3)
    assert C3.interval(el(C3, "a"), C3.one) in topo.clopen_upper_sets(C3, T)
    p, q = el(B2, "p", "q")
    U = B2.interval(p, B2.one)
    assert U in topo.clopen_upper_sets(B2, topo.order_topology(B2))
    assert U >> p & 1 and not U >> q & 1
    assert topo.separation_witness(B2, topo.order_topology(B2)) is None


def test_order_topology_needs_lattice():
    bad = next(E for E in small_algebras() if not E.is_lattice)
    with pytest.raises(NotALattice):
        topo.order_topology(bad)


def test_oplus_domain_and_continuity(MO2):
    T = topo.order_topology(MO2)
    dom = topo.oplus_domain(MO2)
    assert all(MO2.oplus(a, b) is not None for a, b in dom)
    assert topo.oplus_continuous(MO2, T)
    assert topo.oplus_continuous_at(MO2, T, MO2.zero, MO2.zero)


def test_oplus_discontinuous_for_point_topology(C2):
    a = el(C2, "a")
    T = topology_from_subbasis(C2.n, [{a}])
    # (0, a) maps into {a}, but each of its neighbourhoods contains (a, a) -> 1
    assert not topo.oplus_continuous(C2, T)
    assert not topo.oplus_continuous_at(C2, T, C2.zero, a)
    assert topo.oplus_continuous(C2, Topology.indiscrete(C2.n))


def test_all_subsets_open_criterion_small():
    for E in small_algebras():
        if not E.is_lattice:
            continue
        opens = [U for U in range(1 << E.n) if topo.lemma22_is_open(E, U)]
        assert len(opens) == 1 << E.n
        for r in (1, 2):
            for pts in combinations(range(E.n), r):
                assert topo.lemma22_is_open(E, mask_of(pts))
