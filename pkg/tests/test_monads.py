import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from emtensor.actions import base_monoid_monad, base_monoid_report
from emtensor.algebra import enumerate_algebras
from emtensor.errors import PreconditionError, ResourceError
from emtensor.finset import FinMap, FinSet
from emtensor.monads import (
    check_monad_laws,
    check_monad_morphism,
    check_monoidal_laws,
    check_preserves_reflexive_coeq,
    corrupt_morphism,
    identity_morphism,
    instantiate_monad,
    kleisli_compose,
    kleisli_functor,
    kleisli_roundtrip,
    kleisli_tensor,
    standard_set,
    unit_morphism,
)
from oracles import monoid_actions_on_set

MONADS = [
    ("identity", "cartesian", None),
    ("identity", "cocartesian", None),
    ("powerset", "cartesian", None),
    ("powerset", "cocartesian", None),
    ("vector_space", "cartesian", 2),
    ("vector_space", "cartesian", 3),
]


def _make(spec):
    name, base, p = spec
    return instantiate_monad(name, base, p=p)


@pytest.mark.parametrize("spec", MONADS, ids=lambda s: f"{s[0]}-{s[1]}-{s[2]}")
def test_monad_laws(spec):
    T = _make(spec)
    top = 2 if spec[0] == "vector_space" and spec[2] == 3 else 3
    for n in range(top + 1):
        r = check_monad_laws(T, standard_set(n))
        assert r.passed, r.witness


@pytest.mark.parametrize("spec", MONADS, ids=lambda s: f"{s[0]}-{s[1]}-{s[2]}")
def test_monoidal_conditions(spec):
    T = _make(spec)
    top = 2 if spec[2] == 3 else 3
    for sizes in itertools.product(range(top), repeat=3):
        r = check_monoidal_laws(T, *(standard_set(n) for n in sizes))
        assert r.passed, (sizes, r.witness)


def test_carrier_sizes():
    X = standard_set(3)
    assert instantiate_monad("powerset").obj(X).size == 8
    assert instantiate_monad("vector_space", p=3).obj(X).size == 27
    assert instantiate_monad("identity").obj(X).size == 3


def test_bad_parameters():
    with pytest.raises(PreconditionError):
        instantiate_monad("vector_space", p=4)
    with pytest.raises(PreconditionError):
        instantiate_monad("vector_space", "cocartesian")
    with pytest.raises(PreconditionError):
        instantiate_monad("list")


def test_guard_is_enforced():
    T = instantiate_monad("powerset", guard=16)
    with pytest.raises(ResourceError):
        check_monad_laws(T, standard_set(5))


def test_additive_kappa_is_not_monoidal():
    T = instantiate_monad("vector_space", p=2, kappa="additive")
    X = standard_set(1)
    r = check_monoidal_laws(T, X, X, X)
    assert not r.passed
    assert r.failures()[0].witness is not None


# -- the structure maps against direct computations -------------------------

@given(st.integers(0, 15), st.integers(0, 7))
def test_powerset_kappa_is_cartesian_product(s, t):
    T = instantiate_monad("powerset")
    X, Y = standard_set(4), standard_set(3)
    k = int(T.kappa_apply(X, Y, np.array([s * 8 + t]))[0])
    expect = sum(1 << (i * 3 + j) for i in range(4) for j in range(3) if s >> i & 1 and t >> j & 1)
    assert k == expect


@given(st.integers(0, 3), st.integers(0, 7))
def test_powerset_kappa_cocartesian_is_union(s, t):
    T = instantiate_monad("powerset", "cocartesian")
    X, Y = standard_set(2), standard_set(3)
    # elements of TX + TY: first the 4 subsets of X, then the 8 of Y
    assert int(T.kappa_apply(X, Y, np.array([s]))[0]) == s
    assert int(T.kappa_apply(X, Y, np.array([4 + t]))[0]) == t << 2


@given(st.lists(st.integers(0, 15), max_size=6, unique=True))
def test_powerset_mult_is_union(subsets):
    T = instantiate_monad("powerset")
    X = standard_set(4)
    mask = sum(1 << s for s in subsets)
    union = 0
    for s in subsets:
        union |= s
    assert int(T.mult_apply(X, np.array([mask]))[0]) == union


@given(st.integers(0, 26), st.integers(0, 8))
def test_vector_kappa_is_outer_product(v, w):
    T = instantiate_monad("vector_space", p=3)
    X, Y = standard_set(3), standard_set(2)
    dv = [(v // 3**i) % 3 for i in range(3)]
    dw = [(w // 3**j) % 3 for j in range(2)]
    expect = sum((dv[i] * dw[j] % 3) * 3 ** (i * 2 + j) for i in range(3) for j in range(2))
    assert int(T.kappa_apply(X, Y, np.array([v * 9 + w]))[0]) == expect


@given(st.lists(st.integers(0, 2), min_size=3, max_size=3), st.integers(0, 26))
def test_vector_fmap_sums_coefficients(f, v):
    T = instantiate_monad("vector_space", p=3)
    X = standard_set(3)
    coeff = [(v // 3**i) % 3 for i in range(3)]
    out = [0, 0, 0]
    for i, c in enumerate(coeff):
        out[f[i]] = (out[f[i]] + c) % 3
    expect = sum(c * 3**i for i, c in enumerate(out))
    assert int(T.fmap_apply(np.array(f), X, np.array([v]), X)[0]) == expect


# -- Kleisli structure --------------------------------------------------------

@pytest.mark.parametrize("spec", MONADS[:5], ids=lambda s: f"{s[0]}-{s[1]}")
def test_kleisli_roundtrip(spec):
    r = kleisli_roundtrip(_make(spec), sizes=(0, 1, 2))
    assert r.passed, r.witness


@settings(max_examples=30)
@given(st.data())
def test_kleisli_composition_is_associative(data):
    T = instantiate_monad("powerset")
    X = standard_set(2)
    TX = T.obj(X)
    f, g, h = (FinMap(X, TX, data.draw(st.lists(st.integers(0, 3), min_size=2, max_size=2)))
               for _ in range(3))
    lhs = kleisli_compose(T, h, kleisli_compose(T, g, f, X), X)
    rhs = kleisli_compose(T, kleisli_compose(T, h, g, X), f, X)
    assert lhs == rhs
    eta = T.unit(X)
    assert kleisli_compose(T, eta, f, X) == f == kleisli_compose(T, f, eta, X)


def test_kleisli_tensor_of_units_is_unit():
    T = instantiate_monad("powerset")
    X, Y = standard_set(2), standard_set(1)
    out = kleisli_tensor(T, T.unit(X), T.unit(Y), X, Y)
    assert out == T.unit(T.base.tensor(X, Y))


@pytest.mark.parametrize("make", [identity_morphism, unit_morphism])
def test_kleisli_functor(make):
    phi = make(instantiate_monad("powerset"))
    r = kleisli_functor(phi).check(sizes=(0, 1, 2))
    assert r.passed, r.witness


# -- monad morphisms ----------------------------------------------------------

@pytest.mark.parametrize("name,p", [("powerset", None), ("vector_space", 2)])
def test_unit_is_monoidal_morphism(name, p):
    T = instantiate_monad(name, p=p)
    assert check_monad_morphism(unit_morphism(T), monoidal=True).passed
    assert check_monad_morphism(identity_morphism(T), monoidal=True).passed


def test_corrupted_morphism_is_caught():
    T = instantiate_monad("powerset")
    bad = corrupt_morphism(identity_morphism(T), size=1, element=1, value=0)
    r = check_monad_morphism(bad)
    assert not r.passed
    assert r.failures()[0].witness


# -- T(X⊗−) and reflexive coequalizers ----------------------------------------

def test_reflexive_coequalizer_preserved():
    T = instantiate_monad("powerset")
    Y = standard_set(3)
    R = FinSet.of(["r0", "r1", "r2", "r3"])
    f = FinMap(R, Y, [0, 1, 2, 0])
    g = FinMap(R, Y, [0, 1, 2, 1])
    r = check_preserves_reflexive_coeq(T, standard_set(2), f, g)
    assert r.passed and r.details["quotient_size"] == 2


def test_non_reflexive_pair_rejected():
    T = instantiate_monad("powerset")
    Y = standard_set(2)
    R = standard_set(1)
    with pytest.raises(PreconditionError):
        check_preserves_reflexive_coeq(T, standard_set(1), FinMap(R, Y, [0]), FinMap(R, Y, [1]))


# -- the monad M×(−) of a finite monoid ---------------------------------------

MONOIDS = {
    "idempotent": ([[0, 1], [1, 1]], 0),
    "cyclic2": ([[0, 1], [1, 0]], 0),
}


@pytest.mark.parametrize("which", MONOIDS)
def test_monoid_monad_algebras_are_actions(which):
    mul, e = MONOIDS[which]
    T = base_monoid_monad(standard_set(2), mul, e)
    assert base_monoid_report(T, max_size=2).passed
    for n in range(4):
        found = enumerate_algebras(T, n, up_to_iso=False)
        assert len(found) == monoid_actions_on_set(mul, e, n)


def test_monoid_monad_frozen_counts():
    # [DERIVED] idempotent maps on n points: 1, 1, 3, 10
    T = base_monoid_monad(standard_set(2), MONOIDS["idempotent"][0], 0)
    assert [len(enumerate_algebras(T, n, up_to_iso=False)) for n in range(4)] == [1, 1, 3, 10]


def test_non_monoid_rejected():
    with pytest.raises(PreconditionError):
        base_monoid_monad(standard_set(2), [[1, 0], [0, 1]], 0)
    with pytest.raises(PreconditionError):
        base_monoid_monad(standard_set(2), [[0, 1], [1, 1]], 1)
