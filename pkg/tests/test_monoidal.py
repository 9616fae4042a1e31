import itertools

import numpy as np
import pytest

from emtensor import fixtures as fx
from emtensor.finset import FinMap
from emtensor.monads import identity_morphism, standard_set, unit_morphism
from emtensor.monoidal import (
    algebraic_functor_monoidal,
    associator,
    braiding,
    braiding_involution,
    check_coherence,
    hexagon,
    kappa_bar,
    pentagon,
    restrict_algebra,
    triangle,
    unitors,
    verify_induced_presentations,
)
from emtensor.algebra import check_algebra, is_homomorphism
from emtensor.tensor import tensor_product


@pytest.fixture(scope="module")
def chains():
    return [fx.chain(1), fx.chain(2), fx.chain(3)]


@pytest.mark.parametrize("idx", list(itertools.product(range(3), repeat=3)))
def test_associator_is_iso_on_generators(P, chains, idx):
    A, B, C = (chains[i] for i in idx)
    cell = associator(P, A, B, C)
    assert cell.report.passed
    assert cell.map.is_bijective()
    assert is_homomorphism(P, cell.map, cell.src, cell.dst).passed
    # α̅ sends u(u(a,b),c) to u(a,u(b,c))
    tAB, tBC = tensor_product(P, A, B), tensor_product(P, B, C)
    left = tensor_product(P, tAB.algebra, C)
    right = tensor_product(P, A, tBC.algebra)
    for a, b, c in itertools.product(*(range(X.carrier.size) for X in (A, B, C))):
        x = left.u[tAB.u[a * B.carrier.size + b] * C.carrier.size + c]
        y = right.u[a * tBC.carrier.size + tBC.u[b * C.carrier.size + c]]
        assert cell.map.table[x] == y


@pytest.mark.parametrize("n", [1, 2, 3])
def test_unitors_are_isos(P, n):
    A = fx.chain(n)
    lam, rho = unitors(P, A)
    assert lam.map.is_bijective() and rho.map.is_bijective()
    assert lam.map.cod is A.carrier and rho.map.cod is A.carrier


def test_f2_unitors(F2):
    A = fx.f2_space(2)
    lam, rho = unitors(F2, A)
    assert lam.map.is_bijective() and rho.map.is_bijective()


@pytest.mark.parametrize("a,b", [(1, 2), (2, 3), (3, 3)])
def test_braiding_squares_to_identity(P, a, b):
    A, B = fx.chain(a), fx.chain(b)
    s = braiding(P, A, B)
    back = braiding(P, B, A)
    assert (back.map @ s.map) == FinMap.identity(s.map.dom)
    assert braiding_involution(P, A, B).passed


def test_pentagon_triangle_hexagon(P, chains):
    C2, C3 = chains[1], chains[2]
    assert pentagon(P, C2, C3, C2, C2).passed
    assert triangle(P, C3, C2).passed
    assert hexagon(P, C2, C3, C2).passed


def test_coherence_small_grid(P, chains):
    r = check_coherence(P, chains[:2])
    assert r.passed, r.witness


def test_coherence_f2_small(F2):
    r = check_coherence(F2, [fx.f2_space(0), fx.f2_space(1)])
    assert r.passed, r.witness


def test_induced_presentations_small(P, chains):
    C2 = chains[1]
    r = verify_induced_presentations(P, C2, C2, C2, None, chains[:2])
    assert r.passed, r.witness


@pytest.mark.parametrize("nx,ny", [(1, 1), (1, 2), (2, 2)])
def test_kappa_bar(P, nx, ny):
    cell = kappa_bar(P, standard_set(nx), standard_set(ny))
    assert cell.report.passed and cell.map.is_bijective()


def test_restriction_along_identity_is_same_algebra(P):
    A = fx.chain(3)
    R = restrict_algebra(identity_morphism(P), A)
    assert np.array_equal(R.structure.table, A.structure.table)


def test_restriction_along_unit(P):
    # C^η(A) is the bare carrier with the identity structure
    R = restrict_algebra(unit_morphism(P), fx.chain(3))
    assert R.structure.table.tolist() == [0, 1, 2]
    assert check_algebra(R.monad, R).passed


@pytest.mark.parametrize("make", [identity_morphism, unit_morphism])
def test_algebraic_functor_is_monoidal(P, chains, make):
    images, cell, rep = algebraic_functor_monoidal(make(P), chains[1], chains[2], chains[1])
    assert rep.passed, rep.witness
    assert cell.map.dom is images["tensor"].carrier


def test_phi_bar_for_unit_is_surjection(P, chains):
    # A⊛B over the identity monad is A×B; φ̄ is u: A×B -> A⊠B
    _, cell, _ = algebraic_functor_monoidal(unit_morphism(P), chains[1], chains[1])
    t = tensor_product(P, chains[1], chains[1])
    assert cell.map.table.tolist() == t.u.tolist()
