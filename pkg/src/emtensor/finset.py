"""Finite sets, total maps between them, and the two base monoidal structures.

Elements of a FinSet are the integers ``0..size-1``; labels are computed on
demand.  Composite sets (products, coproducts, monad images) are interned by
a structural key, so building the same object twice returns the same
instance with the same element order.
"""

from __future__ import annotations

import itertools
import threading
import weakref
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import ParseError, PreconditionError

CARTESIAN = "cartesian"
COCARTESIAN = "cocartesian"

_intern: "weakref.WeakValueDictionary[tuple, FinSet]" = weakref.WeakValueDictionary()
_intern_lock = threading.Lock()
_uid = itertools.count()


class FinSet:
    """A finite set with canonically ordered, labeled elements."""

    __slots__ = ("key", "size", "_labeler", "_labels", "_index", "_hash", "__weakref__")

    def __new__(cls, key: tuple, size: int, labeler: Callable[[int], str]):
        with _intern_lock:
            obj = _intern.get(key)
            if obj is not None:
                return obj
            obj = super().__new__(cls)
            obj.key = key
            obj.size = int(size)
            obj._labeler = labeler
            obj._labels = None
            obj._index = None
            obj._hash = hash(key)
            _intern[key] = obj
            return obj

    def __init__(self, key, size, labeler):
        pass

    @classmethod
    def of(cls, labels: Iterable[str]) -> "FinSet":
        """A plain set whose element order is the given label order."""
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise ParseError(f"duplicate labels in {labels!r}")
        return cls(("atoms", labels), len(labels), labels.__getitem__)

    @classmethod
    def range(cls, n: int, prefix: str = "") -> "FinSet":
        return cls.of(f"{prefix}{i}" for i in range(n))

    @classmethod
    def fresh(cls, labels: Sequence[str], tag: str = "quot") -> "FinSet":
        """A new set that is never identified with a previously built one."""
        labels = tuple(labels)
        return cls((tag, next(_uid)), len(labels), labels.__getitem__)

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return self is other

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if self.size <= 8:
            return "FinSet{" + ",".join(self.labels) + "}"
        return f"FinSet<{self.size} elements>"

    def label(self, i: int) -> str:
        if self._labels is not None:
            return self._labels[int(i)]
        return self._labeler(int(i))

    @property
    def labels(self) -> tuple[str, ...]:
        if self._labels is None:
            self._labels = tuple(self._labeler(i) for i in range(self.size))
        return self._labels

    def index(self, label: str) -> int:
        if self._index is None:
            self._index = {lab: i for i, lab in enumerate(self.labels)}
        try:
            return self._index[label]
        except KeyError:
            raise ParseError(f"{label!r} is not an element of {self!r}") from None

    def elements(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)


def _pair_labeler(X: FinSet, Y: FinSet) -> Callable[[int], str]:
    n = Y.size
    return lambda i: f"({X.label(i // n)},{Y.label(i % n)})"


def _sum_labeler(X: FinSet, Y: FinSet) -> Callable[[int], str]:
    n = X.size
    return lambda i: f"inl:{X.label(i)}" if i < n else f"inr:{Y.label(i - n)}"


def product(X: FinSet, Y: FinSet) -> FinSet:
    """Cartesian product; element (i, j) sits at index i*|Y| + j."""
    return FinSet(("prod", X, Y), X.size * Y.size, _pair_labeler(X, Y))


def coproduct(X: FinSet, Y: FinSet) -> FinSet:
    """Disjoint union; the left summand comes first."""
    return FinSet(("sum", X, Y), X.size + Y.size, _sum_labeler(X, Y))


class FinMap:
    """A total function dom -> cod stored as an integer table."""

    __slots__ = ("dom", "cod", "table")

    def __init__(self, dom: FinSet, cod: FinSet, table, check: bool = True):
        t = np.asarray(table, dtype=np.int64)
        if check:
            if t.shape != (dom.size,):
                raise PreconditionError(
                    f"table of length {t.shape} does not cover domain of size {dom.size}"
                )
            if t.size and (t.min() < 0 or t.max() >= cod.size):
                raise PreconditionError("table value outside the codomain")
        t.setflags(write=False)
        self.dom = dom
        self.cod = cod
        self.table = t

    @classmethod
    def identity(cls, X: FinSet) -> "FinMap":
        return cls(X, X, np.arange(X.size), check=False)

    @classmethod
    def from_labels(cls, dom: FinSet, cod: FinSet, mapping: Mapping[str, str]) -> "FinMap":
        missing = [lab for lab in dom.labels if lab not in mapping]
        if missing:
            raise ParseError(f"map is not total; missing {missing[:3]}")
        return cls(dom, cod, [cod.index(str(mapping[lab])) for lab in dom.labels])

    @classmethod
    def constant(cls, dom: FinSet, cod: FinSet, value: int) -> "FinMap":
        return cls(dom, cod, np.full(dom.size, value, dtype=np.int64))

    def __call__(self, i):
        return self.table[i]

    def __matmul__(self, other: "FinMap") -> "FinMap":
        """Composition: ``g @ f`` is g·f (apply f first)."""
        if other.cod != self.dom:
            raise PreconditionError("composition of non-composable maps")
        return FinMap(other.dom, self.cod, self.table[other.table], check=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinMap)
            and self.dom == other.dom
            and self.cod == other.cod
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, self.table.tobytes()))

    def __repr__(self) -> str:
        if self.dom.size <= 8:
            body = ", ".join(f"{k}->{v}" for k, v in self.to_labels().items())
            return f"FinMap({body})"
        return f"FinMap<{self.dom.size} -> {self.cod.size}>"

    def to_labels(self) -> dict[str, str]:
        return {self.dom.label(i): self.cod.label(v) for i, v in enumerate(self.table)}

    def image(self) -> np.ndarray:
        return np.unique(self.table)

    def is_injective(self) -> bool:
        return np.unique(self.table).size == self.dom.size

    def is_surjective(self) -> bool:
        return np.unique(self.table).size == self.cod.size

    def is_bijective(self) -> bool:
        return self.dom.size == self.cod.size and self.is_injective()

    def inverse(self) -> "FinMap":
        if not self.is_bijective():
            raise PreconditionError("map is not a bijection")
        inv = np.empty(self.dom.size, dtype=np.int64)
        inv[self.table] = np.arange(self.dom.size)
        return FinMap(self.cod, self.dom, inv, check=False)


def first_difference(lhs, rhs) -> int | None:
    """Index of the first position where two arrays differ, or None."""
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    bad = np.flatnonzero(lhs != rhs)
    return int(bad[0]) if bad.size else None


class MonoidalBase:
    """(FinSet, ⊗, E) for ⊗ the cartesian product or the disjoint union.

    In both cases the canonical element orders make α, λ, ρ identity tables
    between differently labeled sets; only σ permutes indices.
    """

    def __init__(self, kind: str):
        if kind not in (CARTESIAN, COCARTESIAN):
            raise PreconditionError(f"unknown base kind {kind!r}")
        self.kind = kind
        self.unit = FinSet.of(["*"]) if kind == CARTESIAN else FinSet.of([])

    def __repr__(self) -> str:
        return f"MonoidalBase({self.kind})"

    def __eq__(self, other) -> bool:
        return isinstance(other, MonoidalBase) and other.kind == self.kind

    def __hash__(self) -> int:
        return hash(self.kind)

    @property
    def symmetric(self) -> bool:
        return True

    def tensor(self, X: FinSet, Y: FinSet) -> FinSet:
        return product(X, Y) if self.kind == CARTESIAN else coproduct(X, Y)

    def tensor_tables(self, f: np.ndarray, g: np.ndarray, g_cod: int) -> np.ndarray:
        """Table of f⊗g from raw tables; f may carry leading batch axes."""
        f = np.asarray(f, dtype=np.int64)
        g = np.asarray(g, dtype=np.int64)
        if self.kind == CARTESIAN:
            out = f[..., :, None] * g_cod + g[..., None, :]
            return out.reshape(f.shape[:-1] + (-1,))
        raise PreconditionError("use tensor_map for the cocartesian base")

    def tensor_map(self, f: FinMap, g: FinMap) -> FinMap:
        dom = self.tensor(f.dom, g.dom)
        cod = self.tensor(f.cod, g.cod)
        if self.kind == CARTESIAN:
            table = (f.table[:, None] * g.cod.size + g.table[None, :]).ravel()
        else:
            table = np.concatenate([f.table, g.table + f.cod.size])
        return FinMap(dom, cod, table, check=False)

    def pair_index(self, X: FinSet, Y: FinSet, i, j):
        """Index of (i, j) in X⊗Y (cartesian base only)."""
        self._need_cartesian()
        return np.asarray(i) * Y.size + np.asarray(j)

    def split_index(self, X: FinSet, Y: FinSet, k):
        self._need_cartesian()
        k = np.asarray(k)
        return k // Y.size, k % Y.size

    def inl(self, X: FinSet, Y: FinSet) -> FinMap:
        self._need_cocartesian()
        return FinMap(X, coproduct(X, Y), np.arange(X.size), check=False)

    def inr(self, X: FinSet, Y: FinSet) -> FinMap:
        self._need_cocartesian()
        return FinMap(Y, coproduct(X, Y), np.arange(Y.size) + X.size, check=False)

    def _need_cartesian(self):
        if self.kind != CARTESIAN:
            raise PreconditionError("operation needs the cartesian base")

    def _need_cocartesian(self):
        if self.kind != COCARTESIAN:
            raise PreconditionError("operation needs the cocartesian base")

    def alpha(self, X: FinSet, Y: FinSet, Z: FinSet) -> FinMap:
        """α: (X⊗Y)⊗Z -> X⊗(Y⊗Z)."""
        dom = self.tensor(self.tensor(X, Y), Z)
        cod = self.tensor(X, self.tensor(Y, Z))
        return FinMap(dom, cod, np.arange(dom.size), check=False)

    def lam(self, X: FinSet) -> FinMap:
        """λ: E⊗X -> X."""
        dom = self.tensor(self.unit, X)
        return FinMap(dom, X, np.arange(X.size), check=False)

    def rho(self, X: FinSet) -> FinMap:
        """ρ: X⊗E -> X."""
        dom = self.tensor(X, self.unit)
        return FinMap(dom, X, np.arange(X.size), check=False)

    def sigma(self, X: FinSet, Y: FinSet) -> FinMap:
        """σ: X⊗Y -> Y⊗X."""
        dom = self.tensor(X, Y)
        cod = self.tensor(Y, X)
        if self.kind == CARTESIAN:
            i, j = np.divmod(np.arange(dom.size), max(Y.size, 1))
            table = j * X.size + i
        else:
            k = np.arange(dom.size)
            table = np.where(k < X.size, k + Y.size, k - X.size)
        return FinMap(dom, cod, table, check=False)


def build_monoidal_base(kind: str) -> MonoidalBase:
    return MonoidalBase(kind)


def tensor_map(base: MonoidalBase, f: FinMap, g: FinMap) -> FinMap:
    return base.tensor_map(f, g)


def structure_iso(base: MonoidalBase, which: str, objects: Sequence[FinSet]) -> FinMap:
    """Return α, λ, ρ or σ (also accepted: alpha, lambda, rho, sigma)."""
    names = {"α": "alpha", "λ": "lam", "ρ": "rho", "σ": "sigma", "lambda": "lam"}
    attr = names.get(which, which)
    arity = {"alpha": 3, "lam": 1, "rho": 1, "sigma": 2}
    if attr not in arity:
        raise PreconditionError(f"unknown structure isomorphism {which!r}")
    if len(objects) != arity[attr]:
        raise PreconditionError(f"{which} takes {arity[attr]} objects, got {len(objects)}")
    return getattr(base, attr)(*objects)
