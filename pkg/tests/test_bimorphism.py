import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from emtensor import fixtures as fx
from emtensor.algebra import enumerate_homs
from emtensor.bimorphism import (
    all_map_tables,
    enumerate_bimorphisms,
    is_bimorphism,
    is_bimorphism_componentwise,
    transform_bimorphism,
)
from emtensor.errors import PreconditionError, ResourceError
from emtensor.finset import FinMap
from oracles import bimorphism_count, f2_bilinear_maps

NAMES = ["C1", "C2", "C3", "D4"]

# [DERIVED] from the order-matrix oracle (maps preserving joins in each variable)
BIM_C3_C3 = {"C1": 1, "C2": 6, "C3": 20, "D4": 36}


def test_frozen_counts(sup_fixtures):
    _, l3 = sup_fixtures["C3"]
    got = {c: bimorphism_count(l3, l3, sup_fixtures[c][1]) for c in NAMES}
    assert got == BIM_C3_C3


@pytest.mark.parametrize("c", NAMES)
def test_enumeration_c3_c3(P, c):
    C = fx.chain(3)
    target = fx.diamond() if c == "D4" else fx.chain(int(c[1]))
    assert len(enumerate_bimorphisms(P, C, C, target)) == BIM_C3_C3[c]


@pytest.mark.parametrize("a,b,c", [("C2", "C3", "C2"), ("C2", "D4", "C2"), ("D4", "C2", "C3"),
                                   ("C3", "C2", "D4")])
def test_enumeration_against_oracle(P, sup_fixtures, a, b, c):
    (A, la), (B, lb), (C, lc) = sup_fixtures[a], sup_fixtures[b], sup_fixtures[c]
    assert len(enumerate_bimorphisms(P, A, B, C)) == bimorphism_count(la, lb, lc)


def test_methods_agree(P):
    C2, C3 = fx.chain(2), fx.chain(3)
    ex = enumerate_bimorphisms(P, C3, C2, C3, method="exhaustive")
    gen = enumerate_bimorphisms(P, C3, C2, C3, method="generators")
    assert ex == gen
    with pytest.raises(PreconditionError):
        enumerate_bimorphisms(P, C2, C2, C2, method="magic")


@pytest.mark.parametrize("dims", [(1, 1, 1), (1, 2, 1), (2, 1, 2), (0, 2, 2)])
def test_f2_bilinear_count(F2, dims):
    A, B, C = (fx.f2_space(d) for d in dims)
    assert len(enumerate_bimorphisms(F2, A, B, C)) == f2_bilinear_maps(*dims)


def test_meet_is_bimorphism_join_is_not(P):
    C2 = fx.chain(2)
    D = P.base.tensor(C2.carrier, C2.carrier)
    meet = FinMap(D, C2.carrier, [0, 0, 0, 1])
    join = FinMap(D, C2.carrier, [0, 1, 1, 1])
    assert is_bimorphism(P, meet, C2, C2, C2).passed
    r = is_bimorphism(P, join, C2, C2, C2)
    assert not r.passed and "element" in r.witness
    rc = is_bimorphism_componentwise(P, join, C2, C2, C2)
    assert not rc.passed and rc.failures()[0].witness


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=9, max_size=9))
def test_random_maps_both_tests_agree(P, table):
    C3 = fx.chain(3)
    f = FinMap(P.base.tensor(C3.carrier, C3.carrier), C3.carrier, table)
    assert is_bimorphism(P, f, C3, C3, C3).passed == is_bimorphism_componentwise(P, f, C3, C3, C3).passed


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_transport_along_homs(P, data):
    C2, C3 = fx.chain(2), fx.chain(3)
    bims = enumerate_bimorphisms(P, C3, C3, C3)
    f = data.draw(st.sampled_from(bims))
    g = data.draw(st.sampled_from(enumerate_homs(P, C2, C3)))
    h = data.draw(st.sampled_from(enumerate_homs(P, C3, C3)))
    k = data.draw(st.sampled_from(enumerate_homs(P, C3, C2)))
    out = transform_bimorphism(P, f, C3, C3, C3, g, C2, h, C3, k, C2)
    assert is_bimorphism(P, out, C2, C3, C2).passed


def test_transport_rejects_non_homs(P):
    C2 = fx.chain(2)
    D = P.base.tensor(C2.carrier, C2.carrier)
    meet = FinMap(D, C2.carrier, [0, 0, 0, 1])
    bad = FinMap(C2.carrier, C2.carrier, [1, 1])
    one = FinMap.identity(C2.carrier)
    with pytest.raises(PreconditionError):
        transform_bimorphism(P, meet, C2, C2, C2, bad, C2, one, C2, one, C2)


def test_map_tables_lexicographic():
    tabs = np.concatenate(list(all_map_tables(2, 3)))
    assert tabs.tolist()[:3] == [[0, 0, 0], [0, 0, 1], [0, 1, 0]]
    assert len(tabs) == 8
    with pytest.raises(ResourceError):
        list(all_map_tables(3, 20, budget=10))
