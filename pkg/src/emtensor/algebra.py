"""Eilenberg-Moore algebras, homomorphisms, congruences and coequalizers.

A T-algebra is stored through its operations: table algebras keep the
structure map a: T(A) -> A and derive the operations from it, free algebras
compute them arithmetically, and quotients compute them on class
representatives.  The structure map of any algebra can be tabulated from
its operations when T(A) is within the guard.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._closure import close_pairs
from .errors import InvariantViolation, ParseError, PreconditionError, ResourceError
from .finset import FinMap, FinSet
from .monads import Monad, MonoidMonad
from .report import Report

DEFAULT_BUDGET = 10**7
_TABLE_OPS_LIMIT = 1 << 16
_TRANSLATION_LIMIT = 1 << 26


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=np.int64)


@dataclass
class Presentation:
    """An algebra as a quotient of the free algebra on a set of its elements.

    ``proj`` maps T(gens) onto the carrier; ``rep`` picks the least preimage.
    """

    gens: FinSet
    images: np.ndarray
    proj: np.ndarray
    rep: np.ndarray

    def relations(self) -> tuple[np.ndarray, np.ndarray]:
        """Pairs (t, rep(proj t)) with t ≠ rep(proj t); they generate the kernel."""
        r = self.rep[self.proj]
        moved = np.flatnonzero(r != np.arange(self.proj.size))
        return moved, r[moved]


class Algebra:
    """Base class for T-algebras on a finite carrier."""

    def __init__(self, monad: Monad, carrier: FinSet, name: str | None = None):
        self.monad = monad
        self.carrier = carrier
        self.name = name
        self._structure: FinMap | None = None
        self._generators: np.ndarray | None = None
        self._presentation: Presentation | None = None
        self._tables: dict = {}

    def __repr__(self) -> str:
        nm = self.name or type(self).__name__
        return f"<{nm}: {self.carrier.size} elements over {self.monad!r}>"

    @property
    def size(self) -> int:
        return self.carrier.size

    @property
    def free_on(self) -> FinSet | None:
        return None

    def op(self, name: str, *args):
        raise NotImplementedError

    def _tabulated_op(self, name: str, compute, *args):
        """Serve small binary/unary operations from cached tables."""
        n = self.carrier.size
        arity = len(args)
        if arity == 0 or n**arity > _TABLE_OPS_LIMIT:
            return compute(*args)
        key = name
        if key not in self._tables:
            grid = np.meshgrid(*([np.arange(n)] * arity), indexing="ij")
            self._tables[key] = _arr(compute(*grid))
        return self._tables[key][tuple(_arr(a) for a in args)]

    # -- structure map -------------------------------------------------
    @property
    def structure(self) -> FinMap:
        if self._structure is None:
            T = self.monad
            TA = T.obj(self.carrier)
            T.require(TA.size, f"T({self.carrier.size})")
            table = T.extend(self.carrier, self, self.carrier.elements())
            self._structure = FinMap(TA, self.carrier, table, check=False)
        return self._structure

    def structure_apply(self, ts) -> np.ndarray:
        return self.monad.evaluate(self.carrier, self, self.carrier.elements(), ts)

    def has_structure_table(self) -> bool:
        return self.monad.size_of(self.carrier.size) <= self.monad.guard if self.carrier.size < 63 else False

    # -- generators and presentations ------------------------------------
    @property
    def generators(self) -> np.ndarray:
        if self._generators is None:
            self._generators = self._compute_generators()
        return self._generators

    def _compute_generators(self) -> np.ndarray:
        return irredundant_generators(self)

    def presentation(self) -> Presentation:
        if self._presentation is None:
            self._presentation = present(self, self.generators)
        return self._presentation

    def to_json(self) -> dict:
        s = self.structure
        return {
            "carrier": list(self.carrier.labels),
            "structure": {s.dom.label(t): self.carrier.label(v) for t, v in enumerate(s.table)},
        }


class TableAlgebra(Algebra):
    """An algebra given by its structure table a: T(A) -> A."""

    def __init__(self, monad: Monad, carrier: FinSet, structure: FinMap, name: str | None = None):
        super().__init__(monad, carrier, name)
        if structure.dom != monad.obj(carrier) or structure.cod != carrier:
            raise PreconditionError("structure map must be T(A) -> A")
        self._structure = structure

    def op(self, name, *args):
        T = self.monad
        A = self.carrier
        a = self._structure.table

        def compute(*xs):
            return a[T.free_op(A, name, *[T.unit_apply(A, x) for x in xs])]

        return self._tabulated_op(name, compute, *args)

    def structure_apply(self, ts):
        return self._structure.table[_arr(ts)]


class FreeAlgebra(Algebra):
    """(T(X), μ_X)."""

    def __init__(self, monad: Monad, X: FinSet, name: str | None = None):
        super().__init__(monad, monad.obj(X), name or f"T({X.size})")
        self.X = X

    @property
    def free_on(self):
        return self.X

    def op(self, name, *args):
        return self.monad.free_op(self.X, name, *args)

    @property
    def structure(self) -> FinMap:
        if self._structure is None:
            self._structure = self.monad.mult(self.X)
        return self._structure

    def structure_apply(self, ts):
        return self.monad.mult_apply(self.X, ts)

    def _compute_generators(self):
        return self.monad.unit_apply(self.X, self.X.elements())

    def presentation(self):
        if self._presentation is None:
            n = self.carrier.size
            self._presentation = Presentation(
                self.X, self.generators, np.arange(n, dtype=np.int64), np.arange(n, dtype=np.int64)
            )
        return self._presentation


class Congruence:
    """A partition of an algebra's carrier, classes ordered by least element."""

    def __init__(self, algebra: Algebra, labels, reps):
        self.algebra = algebra
        self.labels = _arr(labels)
        self.reps = _arr(reps)

    @classmethod
    def from_roots(cls, algebra: Algebra, roots) -> "Congruence":
        roots = _arr(roots)
        reps, labels = np.unique(roots, return_inverse=True)
        return cls(algebra, labels.ravel(), reps)

    @property
    def n_classes(self) -> int:
        return int(self.reps.size)

    def classes(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        bounds = np.searchsorted(self.labels[order], np.arange(self.n_classes + 1))
        return [order[bounds[i]:bounds[i + 1]] for i in range(self.n_classes)]

    def same(self, x, y) -> np.ndarray:
        return self.labels[_arr(x)] == self.labels[_arr(y)]

    def partition(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in c) for c in self.classes())

    def __eq__(self, other) -> bool:
        return isinstance(other, Congruence) and np.array_equal(self.labels, other.labels)


class QuotientAlgebra(Algebra):
    """A/θ; elements are classes labeled by their least representative."""

    def __init__(self, congruence: Congruence, name: str | None = None, labels=None):
        parent = congruence.algebra
        labs = labels if labels is not None else [parent.carrier.label(r) for r in congruence.reps]
        super().__init__(parent.monad, FinSet.fresh(labs), name)
        self.parent = parent
        self.congruence = congruence
        self.verification: Report | None = None

    def op(self, name, *args):
        cong = self.congruence
        p = self.parent

        def compute(*xs):
            return cong.labels[p.op(name, *[cong.reps[_arr(x)] for x in xs])]

        return self._tabulated_op(name, compute, *args)

    def _compute_generators(self):
        g = np.unique(self.congruence.labels[self.parent.generators])
        consts = [int(np.asarray(self.op(c))) for c in self.monad.nullary_ops]
        return g[~np.isin(g, consts)] if g.size > 1 else g

    def presentation(self):
        parent = self.parent
        if self._presentation is None and parent.free_on is not None:
            gens_idx = self.congruence.labels[parent.generators]
            if np.array_equal(np.unique(gens_idx), np.sort(self.generators)) and gens_idx.size == np.unique(gens_idx).size:
                pp = parent.presentation()
                self._presentation = Presentation(
                    parent.free_on, gens_idx, self.congruence.labels[pp.proj],
                    self.congruence.reps,
                )
        return super().presentation()


# ---------------------------------------------------------------------------
# generators


def subalgebra_closure(A: Algebra, seeds: Iterable[int]) -> np.ndarray:
    """Boolean mask of the subalgebra generated by ``seeds``."""
    n = A.carrier.size
    T = A.monad
    inside = np.zeros(n, dtype=bool)
    for c in T.nullary_ops:
        inside[int(np.asarray(A.op(c)))] = True
    seeds = list(seeds)
    inside[_arr(seeds)] = True
    while True:
        cur = np.flatnonzero(inside)
        new = inside.copy()
        for u in T.unary_ops:
            new[_arr(A.op(u, cur))] = True
        for b in T.binary_ops:
            x, y = np.meshgrid(cur, cur, indexing="ij")
            new[_arr(A.op(b, x.ravel(), y.ravel()))] = True
        if new.sum() == inside.sum():
            return inside
        inside = new


def irredundant_generators(A: Algebra) -> np.ndarray:
    """A generating set chosen greedily in element order, then pruned."""
    n = A.carrier.size
    if n > 4096:
        raise ResourceError(f"generator search on a carrier of size {n}")
    gens: list[int] = []
    covered = subalgebra_closure(A, [])
    for x in range(n):
        if not covered[x]:
            gens.append(x)
            covered = subalgebra_closure(A, gens)
    for g in list(gens):
        rest = [h for h in gens if h != g]
        if subalgebra_closure(A, rest)[g]:
            gens = rest
    return _arr(sorted(gens))


def generator_set(A: Algebra, gens) -> FinSet:
    gens = tuple(int(g) for g in gens)
    C = A.carrier
    return FinSet(("gens", C, gens), len(gens), lambda i: C.label(gens[i]))


def present(A: Algebra, gens) -> Presentation:
    """Present A as a quotient of T(gens); fails if gens do not generate."""
    T = A.monad
    gens = _arr(gens)
    G = generator_set(A, gens)
    proj = _arr(T.extend(G, A, gens))
    values, first = np.unique(proj, return_index=True)
    if values.size != A.carrier.size:
        raise PreconditionError("the chosen elements do not generate the algebra")
    rep = np.empty(A.carrier.size, dtype=np.int64)
    rep[values] = first
    return Presentation(G, gens, proj, rep)


# ---------------------------------------------------------------------------
# checks


def check_algebra(T: Monad, A: Algebra, method: str = "elementwise") -> Report:
    """Unit and associativity laws of (A, a).

    ``elementwise`` compares a·Ta with a·μ on all of TTA and raises a
    resource error when TTA is over the guard.  ``equational`` checks that a
    is the extension of its own operations (so a is determined by them) and
    that the operations satisfy the equations of the theory; ``auto`` picks
    elementwise when it fits.
    """
    A_set = A.carrier
    TA = T.obj(A_set)
    T.require(TA.size, f"T({A_set.size})")
    a = A.structure.table
    xs = A_set.elements()
    reports = [Report.compare("a·η = 1", a[T.unit_apply(A_set, xs)], xs, A_set, A_set)]
    use_elementwise = method == "elementwise" or (
        method == "auto" and TA.size < 63 and T.size_of(TA.size) <= T.guard
    )
    if use_elementwise:
        T.require(T.size_of(TA.size) if TA.size < 63 else TA.size * T.guard + 1, f"TT({A_set.size})")
        TTA = T.obj(TA)
        t = TTA.elements()
        lhs = a[T.fmap_apply(a, A_set, t, TA)]
        rhs = a[T.mult_apply(A_set, t)]
        reports.append(Report.compare("a·Ta = a·μ", lhs, rhs, TTA, A_set, method="elementwise"))
    else:
        ops = _StructureOps(T, A_set, a)
        ext = T.extend(A_set, ops, xs)
        reports.append(Report.compare("a is generated by its operations", a, ext, TA, A_set,
                                      method="equational"))
        T.require(A_set.size**3, "A³")
        reports.append(T.check_equations(ops, xs))
    return Report.combine("algebra laws", reports, carrier=A_set.size)


class _StructureOps:
    """Operations read off a raw structure table (used before trusting it)."""

    def __init__(self, T: Monad, A: FinSet, a: np.ndarray):
        self.T, self.A, self.a = T, A, a

    def op(self, name, *args):
        T, A = self.T, self.A
        return self.a[T.free_op(A, name, *[T.unit_apply(A, x) for x in args])]


def free_algebra(T: Monad, X: FinSet) -> FreeAlgebra:
    T.require(T.size_of(X.size) if X.size < 63 else math.inf, f"T({X.size})")
    return FreeAlgebra(T, X)


def translations(A: Algebra) -> np.ndarray:
    """Rows generating all unary polynomial maps of A under composition.

    Unary operations are taken as they are; each binary operation is taken
    with its second argument fixed to a generator.  This suffices because the
    binary operations of the builtin theories are associative and
    commutative and every element is a term in the generators.
    """
    T = A.monad
    n = A.carrier.size
    xs = A.carrier.elements()
    rows = []
    for u in T.unary_ops:
        rows.append(_arr(A.op(u, xs)))
    for b in T.binary_ops:
        for g in A.generators:
            rows.append(_arr(A.op(b, xs, g)))
    keep = []
    for r in rows:
        r = np.broadcast_to(r, (n,))
        if np.array_equal(r, xs) or (n and np.all(r == r[0])):
            continue
        keep.append(r)
    if len(keep) * n > _TRANSLATION_LIMIT:
        raise ResourceError(f"translation table of {len(keep)}×{n} entries")
    if not keep:
        return np.zeros((0, n), dtype=np.int64)
    return np.stack(keep)


def congruence_closure(T: Monad, A: Algebra, pairs_a, pairs_b) -> Congruence:
    """The least congruence on A containing the given pairs."""
    n = A.carrier.size
    pa, pb = _arr(pairs_a).ravel(), _arr(pairs_b).ravel()
    if pa.shape != pb.shape:
        raise PreconditionError("pair arrays differ in length")
    roots = close_pairs(n, pa, pb, translations(A))
    return Congruence.from_roots(A, roots)


def check_compatible(cong: Congruence) -> Report:
    """The partition is preserved by every generating translation."""
    A = cong.algebra
    lab = cong.labels
    rep_of = cong.reps[lab]
    for i, t in enumerate(translations(A)):
        bad = np.flatnonzero(lab[t] != lab[t[rep_of]])
        if bad.size:
            x = int(bad[0])
            return Report("congruence compatibility", False,
                          {"element": A.carrier.label(x), "translation": i})
    return Report("congruence compatibility", True)


def quotient_algebra(T: Monad, cong: Congruence, name: str | None = None,
                     labels=None) -> tuple[QuotientAlgebra, FinMap]:
    """A/θ with its projection; well-definedness is re-verified."""
    A = cong.algebra
    Q = QuotientAlgebra(cong, name, labels)
    pi = FinMap(A.carrier, Q.carrier, cong.labels, check=False)
    checks = [check_compatible(cong)]
    if (A.carrier.size < 63 and Q.carrier.size < 63
            and T.size_of(A.carrier.size) <= T.guard and T.size_of(Q.carrier.size) <= T.guard
            and A.free_on is None):
        TA = T.obj(A.carrier)
        t = TA.elements()
        lhs = cong.labels[A.structure.table]
        rhs = Q.structure.table[T.fmap_apply(cong.labels, Q.carrier, t, A.carrier)]
        checks.append(Report.compare("π·a = ā·T(π)", lhs, rhs, TA, Q.carrier))
    report = Report.combine("quotient well-defined", checks)
    Q.verification = report
    if not report.passed:
        raise InvariantViolation(f"quotient is not well defined: {report.witness}")
    return Q, pi


def coequalizer_pairs(T: Monad, B: Algebra, pairs_a, pairs_b, name: str | None = None):
    cong = congruence_closure(T, B, pairs_a, pairs_b)
    return quotient_algebra(T, cong, name)


def coequalizer_em(T: Monad, P: Algebra, B: Algebra, f: FinMap, g: FinMap,
                   use_generators: bool | None = None, name: str | None = None):
    """Coequalizer of homomorphisms f, g: P -> B, as the quotient of B by the
    congruence generated by {(f x, g x)}; for free P only generators are used."""
    if f.dom != P.carrier or g.dom != P.carrier or f.cod != B.carrier or g.cod != B.carrier:
        raise PreconditionError("f and g must be parallel maps P -> B")
    if use_generators is None:
        use_generators = P.free_on is not None
    if use_generators:
        xs = P.generators
    else:
        xs = P.carrier.elements()
    return coequalizer_pairs(T, B, f.table[xs], g.table[xs], name)


# ---------------------------------------------------------------------------
# homomorphisms


def is_homomorphism(T: Monad, f: FinMap, A: Algebra, B: Algebra, method: str = "auto") -> Report:
    """f·a = b·T(f), elementwise when TA is within guard, otherwise by
    preservation of the generating operations."""
    if f.dom != A.carrier or f.cod != B.carrier:
        return Report("homomorphism", False, {"reason": "map does not go A -> B"})
    n = A.carrier.size
    if method == "elementwise" or (method == "auto" and n < 63 and T.size_of(n) <= T.guard
                                   and B.carrier.size < 63 and T.size_of(B.carrier.size) <= T.guard):
        TA = T.obj(A.carrier)
        t = TA.elements()
        lhs = f.table[A.structure.table]
        rhs = B.structure_apply(T.fmap_apply(f.table, B.carrier, t, A.carrier))
        return Report.compare("f·a = b·Tf", lhs, rhs, TA, B.carrier, method="elementwise")
    xs = A.carrier.elements()
    ft = f.table
    for c in T.nullary_ops:
        if ft[int(np.asarray(A.op(c)))] != int(np.asarray(B.op(c))):
            return Report("homomorphism", False, {"operation": c}, {"method": "operations"})
    for u in T.unary_ops:
        r = Report.compare(f"preserves {u}", ft[_arr(A.op(u, xs))], _arr(B.op(u, ft)), A.carrier)
        if not r.passed:
            return r
    for b in T.binary_ops:
        for g in A.generators:
            lhs = ft[_arr(A.op(b, xs, g))]
            rhs = _arr(B.op(b, ft, ft[g]))
            r = Report.compare(f"preserves {b}", lhs, rhs, A.carrier)
            if not r.passed:
                r.witness["generator"] = A.carrier.label(g)
                return r
    return Report("homomorphism", True, details={"method": "operations"})


def _prefix_closed(T: Monad) -> bool:
    return not isinstance(T, MonoidMonad)


def enumerate_homs(T: Monad, A: Algebra, C: Algebra, budget: int = DEFAULT_BUDGET,
                   extra_pairs=None, verify: bool | None = None) -> list[FinMap]:
    """All homomorphisms A -> C, optionally restricted to those identifying
    each pair in ``extra_pairs`` (two arrays of elements of A).

    A homomorphism is determined by its values on a generating set of A;
    assignments are extended generator by generator and pruned as soon as a
    relation of the presentation, or an extra pair, is violated.  The budget
    bounds the number of search nodes.
    """
    pres = A.presentation()
    G = pres.gens
    s = G.size
    m = C.carrier.size
    r_of = pres.rep[pres.proj]
    extra = None
    if extra_pairs is not None:
        ea = pres.rep[_arr(extra_pairs[0])]
        eb = pres.rep[_arr(extra_pairs[1])]
        extra = (ea, eb, np.maximum(ea, eb))
    results: list[np.ndarray] = []
    nodes = 0

    if not _prefix_closed(T):
        total = m**s
        if total > budget:
            raise ResourceError(f"{total} candidate homomorphisms exceed the budget {budget}")
        for images in itertools.product(range(m), repeat=s):
            ext = T.extend(G, C, _arr(images))
            if np.array_equal(ext, ext[r_of]) and (
                extra is None or np.array_equal(ext[extra[0]], ext[extra[1]])
            ):
                results.append(ext[pres.rep])
    else:
        sizes = [T.size_of(k) for k in range(s + 1)]
        images = np.zeros(s, dtype=np.int64)
        ext = np.zeros(sizes[-1], dtype=np.int64)
        if sizes[0]:
            ext[:sizes[0]] = T.evaluate(G, C, images, np.arange(sizes[0]))

        def ok_range(lo, hi) -> bool:
            seg = ext[lo:hi]
            if not np.array_equal(seg, ext[r_of[lo:hi]]):
                return False
            if extra is not None:
                sel = (extra[2] >= lo) & (extra[2] < hi)
                if sel.any() and not np.array_equal(ext[extra[0][sel]], ext[extra[1][sel]]):
                    return False
            return True

        if not ok_range(0, sizes[0]):
            return []

        def search(k: int):
            nonlocal nodes
            if k == s:
                results.append(ext[pres.rep].copy())
                return
            lo, hi = sizes[k], sizes[k + 1]
            idx = np.arange(lo, hi)
            for v in range(m):
                nodes += 1
                if nodes > budget:
                    raise ResourceError(f"homomorphism search exceeded the budget of {budget} nodes")
                images[k] = v
                ext[lo:hi] = T.evaluate(G, C, images, idx)
                if ok_range(lo, hi):
                    search(k + 1)

        search(0)

    results.sort(key=lambda t: tuple(t.tolist()))
    maps = [FinMap(A.carrier, C.carrier, t, check=False) for t in results]
    if verify is None:
        verify = A.carrier.size <= 4096
    if verify:
        for f in maps:
            r = is_homomorphism(T, f, A, C)
            if not r.passed:
                raise InvariantViolation(f"enumerated map is not a homomorphism: {r.witness}")
    return maps


def verify_coequalizer_universal(T: Monad, B: Algebra, Q: Algebra, q: FinMap, pairs_a, pairs_b,
                                 test_codomains: Sequence[Algebra],
                                 budget: int = DEFAULT_BUDGET) -> Report:
    """Every homomorphism h: B -> C identifying the pairs factors uniquely
    through q, and every k: Q -> C arises this way."""
    out = []
    surj = q.is_surjective()
    out.append(Report("q surjective", surj))
    qa, qb = q.table[_arr(pairs_a)], q.table[_arr(pairs_b)]
    out.append(Report.compare("q coequalizes", qa, qb))
    for C in test_codomains:
        hs = enumerate_homs(T, B, C, budget, extra_pairs=(pairs_a, pairs_b))
        ks = enumerate_homs(T, Q, C, budget)
        rep = np.unique(q.table, return_index=True)[1]
        factored = set()
        ok = True
        witness = None
        for h in hs:
            k = h.table[rep] if surj else None
            if k is None or not np.array_equal(k[q.table], h.table):
                ok, witness = False, {"h": h.table[:16].tolist()}
                break
            factored.add(tuple(k.tolist()))
        khs = {tuple(k.table.tolist()) for k in ks}
        if ok and factored != khs:
            ok, witness = False, {"factored": len(factored), "homs_from_Q": len(khs)}
        out.append(Report(f"universal property against |C|={C.carrier.size}", ok, witness,
                          {"coequalizing_homs": len(hs), "homs_from_Q": len(ks)}))
    return Report.combine("coequalizer universal property", out)


# ---------------------------------------------------------------------------
# census


def relabel_structure(T: Monad, A: Algebra, perm) -> np.ndarray:
    """Structure table of A transported along the bijection perm: A -> A'."""
    perm = _arr(perm)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size)
    TA = T.obj(A.carrier)
    t_inv = T.fmap_apply(inv, A.carrier, TA.elements(), A.carrier)
    return perm[A.structure.table[t_inv]]


def canonical_form(T: Monad, A: Algebra) -> tuple:
    n = A.carrier.size
    return min(tuple(relabel_structure(T, A, p).tolist()) for p in itertools.permutations(range(n)))


def enumerate_algebras(T: Monad, n: int, budget: int = DEFAULT_BUDGET,
                       up_to_iso: bool = True) -> list[TableAlgebra]:
    """All T-algebras on the carrier {0,..,n-1}, found by enumerating
    operation tables and keeping those that satisfy the equations."""
    carrier = FinSet.range(n)
    shapes = [(o.name, (n,) * o.arity) for o in T.signature]
    counts = [n ** int(np.prod(sh)) if sh else n for _, sh in shapes]
    total = int(np.prod(counts)) if counts else 1
    if total > budget:
        raise ResourceError(f"{total} candidate operation tables exceed the budget {budget}")
    xs = carrier.elements()
    found: dict[tuple, TableAlgebra] = {}
    from .monads import TableOps

    for combo in itertools.product(*[itertools.product(range(n), repeat=int(np.prod(sh)) if sh else 1)
                                     for _, sh in shapes]):
        tables = {name: np.array(vals, dtype=np.int64).reshape(sh) for (name, sh), vals in
                  zip(shapes, combo)}
        ops = TableOps(carrier, tables)
        if not T.check_equations(ops, xs).passed:
            continue
        a = T.extend(carrier, ops, xs)
        if not np.array_equal(a[T.unit_apply(carrier, xs)], xs):
            continue
        alg = TableAlgebra(T, carrier, FinMap(T.obj(carrier), carrier, a, check=False))
        key = canonical_form(T, alg) if up_to_iso else tuple(a.tolist())
        if key not in found:
            found[key] = alg
    return [found[k] for k in sorted(found)]


# ---------------------------------------------------------------------------
# JSON


def algebra_from_json(T: Monad, data: dict, name: str | None = None) -> TableAlgebra:
    try:
        carrier = FinSet.of(data["carrier"])
        table = data["structure"]
    except (KeyError, TypeError) as e:
        raise ParseError(f"algebra needs 'carrier' and 'structure': {e}") from None
    TA = T.obj(carrier)
    T.require(TA.size, "T(carrier)")
    values = np.full(TA.size, -1, dtype=np.int64)
    for lab, v in table.items():
        values[parse_element(T, carrier, lab)] = carrier.index(str(v))
    if (values < 0).any():
        missing = TA.label(int(np.flatnonzero(values < 0)[0]))
        raise ParseError(f"structure table has no entry for {missing}")
    return TableAlgebra(T, carrier, FinMap(TA, carrier, values), name=name or data.get("name"))


def parse_element(T: Monad, X: FinSet, label: str) -> int:
    """Index in T(X) of a canonical label; subset and vector labels are also
    accepted with their entries in any order."""
    TX = T.obj(X)
    try:
        return TX.index(label)
    except ParseError:
        pass
    s = label.strip()
    from .monads import PowersetMonad, VectorSpaceMonad

    if isinstance(T, PowersetMonad) and s.startswith("{") and s.endswith("}"):
        body = s[1:-1].strip()
        parts = [p.strip() for p in body.split(",")] if body else []
        mask = 0
        for p in parts:
            mask |= 1 << X.index(p)
        return mask
    if isinstance(T, VectorSpaceMonad) and s.startswith("<") and s.endswith(">"):
        body = s[1:-1].strip()
        digits = [0] * X.size
        for p in (body.split(",") if body else []):
            k, _, c = p.rpartition(":")
            digits[X.index(k.strip())] = int(c) % T.p
        return int(sum(d * T.p**i for i, d in enumerate(digits)))
    raise ParseError(f"cannot read {label!r} as an element of T({X!r})")
