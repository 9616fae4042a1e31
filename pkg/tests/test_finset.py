import numpy as np
import pytest
from hypothesis import given, strategies as st

from emtensor.errors import ParseError, PreconditionError
from emtensor.finset import (
    CARTESIAN,
    COCARTESIAN,
    FinMap,
    FinSet,
    MonoidalBase,
    coproduct,
    product,
    structure_iso,
)


def sets(max_size=4):
    return st.integers(0, max_size).map(lambda n: FinSet.range(n, "e"))


@st.composite
def maps(draw, dom=None, cod=None):
    X = dom if dom is not None else draw(sets())
    Y = cod if cod is not None else draw(st.integers(1, 4).map(lambda n: FinSet.range(n, "e")))
    table = draw(st.lists(st.integers(0, Y.size - 1), min_size=X.size, max_size=X.size))
    return FinMap(X, Y, table)


def test_interning_gives_identical_objects():
    assert FinSet.of("ab") is FinSet.of(["a", "b"])
    assert product(FinSet.of("ab"), FinSet.of("c")) is product(FinSet.of("ab"), FinSet.of("c"))
    assert FinSet.fresh(["a"]) is not FinSet.fresh(["a"])


def test_labels_and_index():
    X = FinSet.of("xyz")
    assert X.labels == ("x", "y", "z")
    assert X.index("y") == 1
    with pytest.raises(ParseError):
        X.index("w")
    with pytest.raises(ParseError):
        FinSet.of("aa")


def test_product_and_coproduct_sizes():
    X, Y = FinSet.of("ab"), FinSet.of("xyz")
    assert product(X, Y).size == 6
    assert coproduct(X, Y).size == 5
    assert product(X, Y).label(4) != product(X, Y).label(5)


def test_finmap_validation():
    X, Y = FinSet.of("ab"), FinSet.of("x")
    with pytest.raises(PreconditionError):
        FinMap(X, Y, [0])
    with pytest.raises(PreconditionError):
        FinMap(X, Y, [0, 1])
    with pytest.raises(ParseError):
        FinMap.from_labels(X, Y, {"a": "x"})


def test_inverse_of_bijection():
    X = FinSet.of("abc")
    f = FinMap(X, X, [2, 0, 1])
    assert f.is_bijective()
    assert f @ f.inverse() == FinMap.identity(X)
    with pytest.raises(PreconditionError):
        FinMap(X, X, [0, 0, 1]).inverse()


@given(st.data())
def test_composition_is_associative(data):
    X = data.draw(sets())
    Y, Z, W = (FinSet.range(data.draw(st.integers(1, 4)), "e") for _ in range(3))
    f, g, h = data.draw(maps(X, Y)), data.draw(maps(Y, Z)), data.draw(maps(Z, W))
    assert (h @ g) @ f == h @ (g @ f)
    assert FinMap.identity(Y) @ f == f == f @ FinMap.identity(X)


@pytest.mark.parametrize("kind", [CARTESIAN, COCARTESIAN])
@given(st.data())
def test_tensor_map_is_functorial(kind, data):
    B = MonoidalBase(kind)
    X, Y = data.draw(sets(3)), data.draw(sets(3))
    A, C = FinSet.range(3, "t"), FinSet.range(2, "t")
    f1, f2 = data.draw(maps(X, A)), data.draw(maps(A, A))
    g1, g2 = data.draw(maps(Y, C)), data.draw(maps(C, C))
    assert B.tensor_map(f2, g2) @ B.tensor_map(f1, g1) == B.tensor_map(f2 @ f1, g2 @ g1)


@pytest.mark.parametrize("kind", [CARTESIAN, COCARTESIAN])
@given(st.tuples(sets(3), sets(3), sets(3)))
def test_structure_isos(kind, xyz):
    X, Y, Z = xyz
    B = MonoidalBase(kind)
    s = B.sigma(X, Y)
    assert B.sigma(Y, X) @ s == FinMap.identity(B.tensor(X, Y))
    assert B.alpha(X, Y, Z).is_bijective()
    assert B.lam(X).is_bijective() and B.rho(X).is_bijective()
    assert structure_iso(B, "σ", [X, Y]) == s
    # hexagon for the symmetry
    one = FinMap.identity
    lhs = B.alpha(Y, Z, X) @ B.sigma(X, B.tensor(Y, Z)) @ B.alpha(X, Y, Z)
    rhs = B.tensor_map(one(Y), B.sigma(X, Z)) @ B.alpha(Y, X, Z) @ B.tensor_map(B.sigma(X, Y), one(Z))
    assert lhs == rhs


def test_cartesian_sigma_table():
    B = MonoidalBase(CARTESIAN)
    X, Y = FinSet.of("ab"), FinSet.of("xyz")
    # (a,x)(a,y)(a,z)(b,x)(b,y)(b,z) -> (x,a)(x,b)(y,a)...
    assert B.sigma(X, Y).table.tolist() == [0, 2, 4, 1, 3, 5]


def test_cocartesian_injections():
    B = MonoidalBase(COCARTESIAN)
    X, Y = FinSet.of("ab"), FinSet.of("c")
    assert B.inl(X, Y).table.tolist() == [0, 1]
    assert B.inr(X, Y).table.tolist() == [2]
    assert B.unit.size == 0
    with pytest.raises(PreconditionError):
        B.pair_index(X, Y, 0, 0)


def test_unknown_base():
    with pytest.raises(PreconditionError):
        MonoidalBase("monoidal")


def test_tensor_tables_batch():
    B = MonoidalBase(CARTESIAN)
    f = np.array([[0, 1], [1, 0]])
    g = np.array([2, 0, 1])
    out = B.tensor_tables(f, g, 3)
    assert out.shape == (2, 6)
    assert out[0].tolist() == [2, 0, 1, 5, 3, 4]
