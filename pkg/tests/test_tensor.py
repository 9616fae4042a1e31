import itertools

import numpy as np
import pytest

from emtensor import fixtures as fx
from emtensor.algebra import FreeAlgebra, check_algebra
from emtensor.errors import PreconditionError
from emtensor.monads import standard_set
from emtensor.tensor import (
    check_coproduct,
    check_free_tensor_identification,
    check_representation,
    classify_bimorphism,
    coproduct_injections,
    free_on,
    tensor_product,
    tensor_product_alt,
    unit_object,
)
from oracles import tensor_size

NAMES = ["C1", "C2", "C3", "D4"]


@pytest.mark.parametrize("a,b", list(itertools.product(NAMES, repeat=2)))
def test_tensor_sizes_match_oracle(P, sup_fixtures, a, b):
    (A, la), (B, lb) = sup_fixtures[a], sup_fixtures[b]
    t = tensor_product(P, A, B)
    assert t.carrier.size == tensor_size(la, lb)
    assert check_algebra(P, t.algebra, method="auto").passed


def test_frozen_tensor_sizes(P):
    # [DERIVED] |A⊗B| = |Sup(A, B^op)| from the oracle
    C2, C3, D4 = fx.chain(2), fx.chain(3), fx.diamond()
    got = [tensor_product(P, A, B).carrier.size for A, B in [(C2, C3), (C3, C3), (C3, D4), (D4, D4)]]
    assert got == [3, 6, 9, 16]


@pytest.mark.parametrize("a,b", [("C2", "C3"), ("C3", "C3"), ("D4", "C2")])
def test_alt_presentation_same_partition(P, sup_fixtures, a, b):
    A, B = sup_fixtures[a][0], sup_fixtures[b][0]
    t1, t2 = tensor_product(P, A, B), tensor_product_alt(P, A, B)
    assert np.array_equal(t1.partition(), t2.partition())


@pytest.mark.parametrize("da,db", [(0, 1), (1, 1), (1, 2), (2, 2)])
def test_f2_tensor_dimension(F2, da, db):
    t = tensor_product(F2, fx.f2_space(da), fx.f2_space(db))
    assert t.carrier.size == 2 ** (da * db)


def test_generator_method_agrees(P):
    C3, D4 = fx.chain(3), fx.diamond()
    t1 = tensor_product(P, C3, D4, method="direct")
    t2 = tensor_product(P, C3, D4, method="generators")
    assert t1.carrier.size == t2.carrier.size
    # u has the same kernel either way
    k1 = t1.u[:, None] == t1.u[None, :]
    k2 = t2.u[:, None] == t2.u[None, :]
    assert np.array_equal(k1, k2)


def test_unknown_method(P):
    with pytest.raises(PreconditionError):
        tensor_product(P, fx.chain(2), fx.chain(2), method="magic")


@pytest.mark.parametrize("nx,ny", list(itertools.product(range(3), repeat=2)))
@pytest.mark.parametrize("which", ["powerset", "f2"])
def test_free_identification(which, nx, ny):
    T = fx.powerset() if which == "powerset" else fx.f2()
    r, iso = check_free_tensor_identification(T, standard_set(nx), standard_set(ny))
    assert r.passed, r.witness
    assert iso.is_bijective()


def test_unit_object_is_shared(P):
    assert unit_object(P) is unit_object(P)
    assert free_on(P, standard_set(2)) is free_on(P, standard_set(2))
    t = tensor_product(P, unit_object(P), fx.chain(3))
    assert t.carrier.size == 3


@pytest.mark.parametrize("a,b,c", [("C2", "C2", "C2"), ("C2", "C3", "C3"), ("C3", "C3", "C2")])
def test_representation(P, sup_fixtures, a, b, c):
    A, B, C = (sup_fixtures[x][0] for x in (a, b, c))
    r = check_representation(P, A, B, C)
    assert r.passed, r.witness


def test_classify_rejects_non_bimorphism(P):
    from emtensor.finset import FinMap

    C2 = fx.chain(2)
    t = tensor_product(P, C2, C2)
    join = FinMap(t.domain, C2.carrier, [0, 1, 1, 1])
    with pytest.raises(PreconditionError):
        classify_bimorphism(P, t, join, C2)


def test_coproduct_on_cocartesian_base(Pco):
    C2, C3 = fx.chain(2, "cocartesian"), fx.chain(3, "cocartesian")
    t = tensor_product(Pco, C2, C3)
    # [DERIVED] the coproduct of chains in Sup is their product: 2·3
    assert t.carrier.size == 6
    iA, iB = coproduct_injections(Pco, t)
    assert iA.is_injective() and iB.is_injective()
    r = check_coproduct(Pco, C2, C3, [fx.chain(n, "cocartesian") for n in (1, 2, 3)])
    assert r.passed, r.witness


def test_coproduct_needs_cocartesian(P):
    with pytest.raises(PreconditionError):
        check_coproduct(P, fx.chain(2), fx.chain(2), [])


def test_free_tensor_of_free_is_free(P):
    A, B = FreeAlgebra(P, standard_set(1)), FreeAlgebra(P, standard_set(2))
    assert tensor_product(P, A, B).carrier.size == 4
