"""Bimorphisms A⊗B -> C: recognition, the two one-variable tests, transport
along homomorphisms, and enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_BUDGET, Algebra, is_homomorphism
from .errors import PreconditionError, ResourceError
from .finset import CARTESIAN, FinMap, FinSet
from .monads import Monad
from .report import Report

_BATCH = 2048


@dataclass
class BimorphismCandidate:
    f: FinMap
    A: Algebra
    B: Algebra
    C: Algebra


def _dom(T: Monad, A: Algebra, B: Algebra) -> FinSet:
    return T.base.tensor(A.carrier, B.carrier)


def _as_tables(f, D: FinSet) -> np.ndarray:
    t = f.table if isinstance(f, FinMap) else np.asarray(f, dtype=np.int64)
    if t.shape[-1] != D.size:
        raise PreconditionError("map table does not match the domain A⊗B")
    return t


def _mismatch(lhs, rhs) -> np.ndarray:
    """Per batch row: index of the first disagreement, or -1."""
    bad = lhs != rhs
    any_bad = bad.any(axis=-1)
    first = bad.argmax(axis=-1)
    return np.where(any_bad, first, -1)


def bimorphism_mask(T: Monad, tables, A: Algebra, B: Algebra, C: Algebra) -> np.ndarray:
    """For a batch of map tables (k, |A⊗B|), first failing element of TA⊗TB
    for c·Tf·κ = f·(a⊗b), or -1 where the square commutes."""
    D = _dom(T, A, B)
    W = T.base.tensor(T.obj(A.carrier), T.obj(B.carrier))
    T.require(W.size, "TA⊗TB")
    w = W.elements()
    k = T.kappa_apply(A.carrier, B.carrier, w)
    ab = T.base.tensor_map(A.structure, B.structure).table
    tables = np.atleast_2d(tables)
    lhs = C.structure_apply(T.fmap_apply(tables, C.carrier, k, D))
    rhs = tables[:, ab]
    return _mismatch(lhs, rhs)


def is_bimorphism(T: Monad, f: FinMap, A: Algebra, B: Algebra, C: Algebra) -> Report:
    """c·T(f)·κ_{A,B} = f·(a⊗b), elementwise on TA⊗TB."""
    D = _dom(T, A, B)
    if f.dom != D or f.cod != C.carrier:
        return Report("bimorphism", False, {"reason": "map does not go A⊗B -> C"})
    pos = int(bimorphism_mask(T, f.table, A, B, C)[0])
    if pos < 0:
        return Report("bimorphism", True)
    W = T.base.tensor(T.obj(A.carrier), T.obj(B.carrier))
    return Report("bimorphism", False, {"element": W.label(pos)})


def _one_variable_masks(T: Monad, tables, A: Algebra, B: Algebra, C: Algebra):
    base = T.base
    D = _dom(T, A, B)
    tables = np.atleast_2d(tables)
    TA, TB = T.obj(A.carrier), T.obj(B.carrier)
    idA, idB = FinMap.identity(A.carrier), FinMap.identity(B.carrier)
    # A⊗TB: f·(1⊗b) = c·Tf·κ·(η⊗1)
    left_dom = base.tensor(A.carrier, TB)
    v = left_dom.elements()
    k = T.kappa_apply(A.carrier, B.carrier, base.tensor_map(T.unit(A.carrier), FinMap.identity(TB)).table[v])
    lhs = C.structure_apply(T.fmap_apply(tables, C.carrier, k, D))
    rhs = tables[:, base.tensor_map(idA, B.structure).table[v]]
    m1 = _mismatch(lhs, rhs)
    # TA⊗B: f·(a⊗1) = c·Tf·κ·(1⊗η)
    right_dom = base.tensor(TA, B.carrier)
    v = right_dom.elements()
    k = T.kappa_apply(A.carrier, B.carrier, base.tensor_map(FinMap.identity(TA), T.unit(B.carrier)).table[v])
    lhs = C.structure_apply(T.fmap_apply(tables, C.carrier, k, D))
    rhs = tables[:, base.tensor_map(A.structure, idB).table[v]]
    m2 = _mismatch(lhs, rhs)
    return (m1, left_dom), (m2, right_dom)


def is_bimorphism_componentwise(T: Monad, f: FinMap, A: Algebra, B: Algebra, C: Algebra) -> Report:
    """The two one-variable squares on A⊗TB and TA⊗B."""
    D = _dom(T, A, B)
    if f.dom != D or f.cod != C.carrier:
        return Report("bimorphism (componentwise)", False, {"reason": "map does not go A⊗B -> C"})
    (m1, d1), (m2, d2) = _one_variable_masks(T, f.table, A, B, C)
    children = [
        Report("homomorphism in the second variable", m1[0] < 0,
               None if m1[0] < 0 else {"element": d1.label(int(m1[0]))}),
        Report("homomorphism in the first variable", m2[0] < 0,
               None if m2[0] < 0 else {"element": d2.label(int(m2[0]))}),
    ]
    return Report.combine("bimorphism (componentwise)", children)


def componentwise_mask(T: Monad, tables, A: Algebra, B: Algebra, C: Algebra) -> np.ndarray:
    """Batch version: True where both one-variable squares commute."""
    (m1, _), (m2, _) = _one_variable_masks(T, tables, A, B, C)
    return (m1 < 0) & (m2 < 0)


def transform_bimorphism(T: Monad, f: FinMap, A: Algebra, B: Algebra, C: Algebra,
                         g: FinMap, A2: Algebra, h: FinMap, B2: Algebra,
                         k: FinMap, C2: Algebra) -> FinMap:
    """k·f·(g⊗h) for homomorphisms g: A2 -> A, h: B2 -> B, k: C -> C2."""
    for name, m, src, dst in (("g", g, A2, A), ("h", h, B2, B), ("k", k, C, C2)):
        r = is_homomorphism(T, m, src, dst)
        if not r.passed:
            raise PreconditionError(f"{name} is not a homomorphism: {r.witness}")
    r = is_bimorphism(T, f, A, B, C)
    if not r.passed:
        raise PreconditionError(f"f is not a bimorphism: {r.witness}")
    out = k @ f @ T.base.tensor_map(g, h)
    r = is_bimorphism(T, out, A2, B2, C2)
    if not r.passed:
        raise PreconditionError(f"transported map is not a bimorphism: {r.witness}")
    return out


def _lex_tables(m: int, n: int, start: int, stop: int) -> np.ndarray:
    ks = np.arange(start, stop, dtype=np.int64)
    pw = m ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (ks[:, None] // pw[None, :]) % m


def all_map_tables(m: int, n: int, budget: int = DEFAULT_BUDGET):
    """Yield every table range(n) -> range(m) in lexicographic order, batched."""
    total = m**n if n else 1
    if total > budget:
        raise ResourceError(f"{total} candidate maps exceed the budget {budget}")
    if m == 0:
        if n == 0:
            yield np.zeros((1, 0), dtype=np.int64)
        return
    for start in range(0, total, _BATCH):
        yield _lex_tables(m, n, start, min(total, start + _BATCH))


def _generator_candidates(T: Monad, A: Algebra, B: Algebra, C: Algebra, budget: int):
    """Tables of the maps A⊗B -> C that are homomorphisms in each variable
    separately on generator rows; every bimorphism is among them."""
    base = T.base
    D = _dom(T, A, B)
    m = C.carrier.size
    pA, pB = A.presentation(), B.presentation()
    if base.kind == CARTESIAN:
        sa, sb = pA.gens.size, pB.gens.size
        total = m ** (sa * sb)
        if total > budget:
            raise ResourceError(f"{total} candidate bimorphisms exceed the budget {budget}")
        out = []
        for vals in itertools.product(range(m), repeat=sa * sb):
            v = np.array(vals, dtype=np.int64).reshape(sa, sb)
            # f(g, -) on B for each generator g of A, then f(-, y) on A
            rows = np.stack([T.evaluate(pB.gens, C, v[i], pB.rep) for i in range(sa)]) \
                if sa else np.zeros((0, B.carrier.size), dtype=np.int64)
            cols = np.stack([T.evaluate(pA.gens, C, rows[:, y], pA.rep)
                             for y in range(B.carrier.size)], axis=1) \
                if B.carrier.size else np.zeros((A.carrier.size, 0), dtype=np.int64)
            out.append(cols.reshape(-1))
        return np.array(out, dtype=np.int64).reshape(len(out), D.size)
    # on the cocartesian base a bimorphism A+B -> C is a pair of homomorphisms
    from .algebra import enumerate_homs

    left = enumerate_homs(T, A, C, budget)
    right = enumerate_homs(T, B, C, budget)
    rows = [np.concatenate([f.table, g.table]) for f in left for g in right]
    return np.array(rows, dtype=np.int64).reshape(len(rows), D.size)


def enumerate_bimorphisms(T: Monad, A: Algebra, B: Algebra, C: Algebra,
                          budget: int = DEFAULT_BUDGET, method: str = "generators") -> list[FinMap]:
    """All bimorphisms A⊗B -> C in lexicographic table order.

    ``exhaustive`` tests every map A⊗B -> C.  ``generators`` tests only the
    maps that are homomorphisms in each variable once their values on pairs
    of generators are fixed; a bimorphism is determined by those values, so
    both methods return the same list.
    """
    D = _dom(T, A, B)
    if method == "exhaustive":
        keep = []
        for tables in all_map_tables(C.carrier.size, D.size, budget):
            keep.append(tables[bimorphism_mask(T, tables, A, B, C) < 0])
        found = np.concatenate(keep) if keep else np.zeros((0, D.size), dtype=np.int64)
    elif method == "generators":
        cand = _generator_candidates(T, A, B, C, budget)
        found = cand[bimorphism_mask(T, cand, A, B, C) < 0] if len(cand) else cand
        found = np.unique(found, axis=0) if len(found) else found
    else:
        raise PreconditionError(f"unknown enumeration method {method!r}")
    order = np.lexsort(found.T[::-1]) if len(found) and D.size else np.arange(len(found))
    return [FinMap(D, C.carrier, found[i], check=False) for i in order]
