import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from emtensor import fixtures as fx
from emtensor.algebra import (
    FreeAlgebra,
    TableAlgebra,
    algebra_from_json,
    check_algebra,
    check_compatible,
    coequalizer_pairs,
    congruence_closure,
    enumerate_algebras,
    enumerate_homs,
    is_homomorphism,
    verify_coequalizer_universal,
)
from emtensor.errors import ParseError, ResourceError
from emtensor.finset import FinMap
from emtensor.monads import standard_set
from oracles import join_table, lattice_census, sup_maps

# [DERIVED] lattice counts from the order-matrix oracle: (labeled, up to iso)
SUP_CENSUS = {0: (0, 0), 1: (1, 1), 2: (2, 1), 3: (6, 1)}


def test_census_oracle_frozen():
    assert {n: lattice_census(n) for n in range(4)} == SUP_CENSUS


@pytest.mark.parametrize("n", range(4))
def test_sup_algebra_census(P, n):
    labeled, iso = SUP_CENSUS[n]
    assert len(enumerate_algebras(P, n, up_to_iso=False)) == labeled
    assert len(enumerate_algebras(P, n)) == iso


def test_census_budget(P):
    with pytest.raises(ResourceError):
        enumerate_algebras(P, 4, budget=1000)


def test_f2_census(F2):
    # [TRIVIAL] a vector space over F₂ has 2^d elements; one per size up to iso
    assert [len(enumerate_algebras(F2, n)) for n in range(3)] == [0, 1, 1]
    assert len(enumerate_algebras(F2, 2, up_to_iso=False)) == 2


@pytest.mark.parametrize("name", ["C1", "C2", "C3", "D4"])
def test_fixture_structure_matches_oracle(sup_fixtures, name):
    A, leq = sup_fixtures[name]
    assert A.structure.table.tolist() == join_table(leq)
    assert check_algebra(A.monad, A).passed


@pytest.mark.parametrize("d", range(3))
def test_f2_spaces_are_algebras(F2, d):
    A = fx.f2_space(d)
    assert A.carrier.size == 2**d
    assert check_algebra(F2, A, method="auto").passed


def test_corrupted_table_has_witness(P):
    C3 = fx.chain(3)
    table = C3.structure.table.copy()
    table[0b011] = 0  # a({0,1}) should be 1
    bad = TableAlgebra(P, C3.carrier, FinMap(C3.structure.dom, C3.carrier, table))
    r = check_algebra(P, bad)
    assert not r.passed
    assert r.failures()[0].witness


def test_equational_method_agrees(P):
    for A in (fx.chain(3), fx.diamond()):
        assert check_algebra(P, A, method="equational").passed


@pytest.mark.parametrize("a", ["C1", "C2", "C3", "D4"])
@pytest.mark.parametrize("b", ["C1", "C2", "C3", "D4"])
def test_hom_enumeration_matches_oracle(P, sup_fixtures, a, b):
    A, la = sup_fixtures[a]
    B, lb = sup_fixtures[b]
    homs = enumerate_homs(P, A, B)
    assert sorted(tuple(h.table.tolist()) for h in homs) == sorted(sup_maps(la, lb))
    assert all(is_homomorphism(P, h, A, B).passed for h in homs)


def test_non_homomorphism_rejected(P):
    C2, C3 = fx.chain(2), fx.chain(3)
    f = FinMap(C2.carrier, C3.carrier, [1, 2])  # does not keep the bottom
    r = is_homomorphism(P, f, C2, C3)
    assert not r.passed and r.witness


def test_f2_hom_count(F2):
    for d_in in range(3):
        for d_out in range(3):
            n = len(enumerate_homs(F2, fx.f2_space(d_in), fx.f2_space(d_out)))
            assert n == 2 ** (d_in * d_out)


# -- congruences and coequalizers ---------------------------------------------

def _least_congruence(join_tab, n, pairs):
    """Closure of the pairs under equivalence and x ~ y => x∨z ~ y∨z."""
    rel = {(i, i) for i in range(n)} | set(pairs) | {(b, a) for a, b in pairs}
    changed = True
    while changed:
        changed = False
        new = set()
        for a, b in rel:
            for z in range(n):
                new.add((join_tab[a][z], join_tab[b][z]))
            for c, d in rel:
                if b == c:
                    new.add((a, d))
        if not new <= rel:
            rel |= new
            changed = True
    classes = {}
    for i in range(n):
        classes.setdefault(min(j for j in range(n) if (i, j) in rel), []).append(i)
    return tuple(tuple(c) for c in sorted(classes.values()))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=3))
def test_congruence_closure_is_least(P, pairs):
    A = FreeAlgebra(P, standard_set(3))
    pa = [a for a, _ in pairs]
    pb = [b for _, b in pairs]
    cong = congruence_closure(P, A, pa, pb)
    assert check_compatible(cong).passed
    join_tab = [[i | j for j in range(8)] for i in range(8)]
    assert cong.partition() == _least_congruence(join_tab, 8, pairs)


def test_coequalizer_universal_property(P):
    A = FreeAlgebra(P, standard_set(2))
    # identify {a} with the empty set
    Q, q = coequalizer_pairs(P, A, [1], [0])
    assert Q.carrier.size == 2
    r = verify_coequalizer_universal(P, A, Q, q, [1], [0],
                                     [fx.chain(1), fx.chain(2), fx.chain(3)])
    assert r.passed, r.witness


def test_json_roundtrip(P):
    A = fx.chain(3)
    B = algebra_from_json(P, A.to_json(), name="copy")
    assert B.structure == A.structure
    with pytest.raises(ParseError):
        algebra_from_json(P, {"carrier": ["0", "1"], "structure": {"{}": "0"}})
    with pytest.raises(ParseError):
        algebra_from_json(P, {"carrier": ["0"]})


def test_generators_of_free_algebra(P):
    A = FreeAlgebra(P, standard_set(3))
    assert sorted(A.generators.tolist()) == [1, 2, 4]
    assert np.array_equal(A.presentation().gens.elements(), np.arange(3))
