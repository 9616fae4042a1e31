"""Standard small algebras, monoids and maps used by the tests and the CLI."""

from __future__ import annotations

import functools

import numpy as np

from .algebra import FreeAlgebra, TableAlgebra
from .finset import FinMap, FinSet
from .monads import Monad, instantiate_monad, standard_set


@functools.lru_cache(maxsize=None)
def powerset(base: str = "cartesian") -> Monad:
    return instantiate_monad("powerset", base)


@functools.lru_cache(maxsize=None)
def f2() -> Monad:
    return instantiate_monad("vector_space", p=2)


@functools.lru_cache(maxsize=None)
def identity(base: str = "cartesian") -> Monad:
    return instantiate_monad("identity", base)


def chain_algebra(T: Monad, n: int, name: str | None = None) -> TableAlgebra:
    """The chain 0 < 1 < ... < n-1 as a sup-lattice: a(S) = max(S ∪ {0})."""
    carrier = FinSet.of([str(i) for i in range(n)])
    TA = T.obj(carrier)
    masks = TA.elements()
    table = np.zeros(TA.size, dtype=np.int64)
    for i in range(n):
        table[(masks >> i) & 1 == 1] = i
    return TableAlgebra(T, carrier, FinMap(TA, carrier, table), name=name or f"C{n}")


@functools.lru_cache(maxsize=None)
def chain(n: int, base: str = "cartesian") -> TableAlgebra:
    return chain_algebra(powerset(base), n)


@functools.lru_cache(maxsize=None)
def diamond(base: str = "cartesian") -> FreeAlgebra:
    """P({a,b}), the four-element Boolean lattice."""
    return FreeAlgebra(powerset(base), standard_set(2), name="D4")


@functools.lru_cache(maxsize=None)
def f2_space(dim: int) -> FreeAlgebra:
    return FreeAlgebra(f2(), standard_set(dim), name=f"F2^{dim}")


@functools.lru_cache(maxsize=None)
def identity_algebra(n: int, base: str = "cartesian") -> TableAlgebra:
    T = identity(base)
    X = standard_set(n)
    return TableAlgebra(T, X, FinMap.identity(X), name=f"S{n}")


def unit_algebra(T: Monad) -> FreeAlgebra:
    """TE, the unit object for ⊠."""
    from .tensor import unit_object

    return unit_object(T)


# ---------------------------------------------------------------------------
# monoids


@functools.lru_cache(maxsize=None)
def v3():
    """The quantale V3 = ({0,1,2}, min, 2) in Sup."""
    from .actions import make_monoid

    T = powerset()
    V = chain_algebra(T, 3, name="V3")
    xs = np.arange(3)
    return make_monoid(T, V, np.minimum(xs[:, None], xs[None, :]).ravel(), 2, name="V3")


@functools.lru_cache(maxsize=None)
def c2_quantale():
    """The two-element quantale ({0,1}, min, 1) in Sup."""
    from .actions import make_monoid

    T = powerset()
    C = chain_algebra(T, 2, name="C2q")
    xs = np.arange(2)
    return make_monoid(T, C, np.minimum(xs[:, None], xs[None, :]).ravel(), 1, name="C2")


def c2_into_v3() -> FinMap:
    """The sub-quantale inclusion 0 ↦ 0, 1 ↦ 2."""
    return FinMap(c2_quantale().algebra.carrier, v3().algebra.carrier, [0, 2])


@functools.lru_cache(maxsize=None)
def f2_squared():
    """F₂×F₂ with componentwise multiplication; vectors are bitmasks, so the
    product is bitwise and and the unit is (1,1)."""
    from .actions import make_monoid

    A = f2_space(2)
    xs = np.arange(4)
    return make_monoid(f2(), A, (xs[:, None] & xs[None, :]).ravel(), 3, name="F2xF2")


def trivial_monoid(T: Monad):
    from .actions import trivial_monoid as _trivial

    return _trivial(T)
