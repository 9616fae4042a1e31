"""The tensor product A⊠B of T-algebras, computed as a coequalizer.

Two constructions are available.  The direct one quotients the free algebra
T(A⊗B) by the congruence generated by {(κ(w), η((a⊗b)(w))) : w ∈ TA⊗TB}
(or by the alternative pair of one-sided maps).  When T(A⊗B) is too large it
is replaced by T(S_A⊗S_B) for generating sets S_A, S_B, with the relations of
A and B tensored with the generators of the other side; the result is the
same algebra and the two are cross-checked on every instance where both fit.

Every result records the universal bimorphism u = q·η: A⊗B -> A⊠B, and
chooses u(S_A⊗S_B) as the generators of A⊠B.
"""

from __future__ import annotations

import threading
import weakref

import numpy as np

from .algebra import (
    Algebra,
    FreeAlgebra,
    congruence_closure,
    generator_set,
    is_homomorphism,
    quotient_algebra,
)
from .bimorphism import is_bimorphism
from .errors import InvariantViolation, PreconditionError
from .finset import CARTESIAN, FinMap, FinSet
from .monads import Monad
from .report import Report


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=np.int64)


def _name(A: Algebra) -> str:
    return A.name or f"<{A.carrier.size}>"


class TensorResult:
    """A⊠B together with u: A⊗B -> A⊠B and, when it was tabulated, q."""

    def __init__(self, monad: Monad, left: Algebra, right: Algebra, algebra: Algebra,
                 u: np.ndarray, kind: str, q: FinMap | None = None):
        self.monad = monad
        self.left = left
        self.right = right
        self.algebra = algebra
        self.kind = kind
        self.domain = monad.base.tensor(left.carrier, right.carrier)
        self.u = _arr(u)
        self._q = q
        self._section: FinMap | None = None
        self.gen_pairs: dict[int, int] = {}

    def __repr__(self):
        return f"<{self.algebra.name}: {self.carrier.size} elements, {self.kind}>"

    @property
    def carrier(self) -> FinSet:
        return self.algebra.carrier

    @property
    def embedding(self) -> FinMap:
        """The universal bimorphism q·η_{A⊗B}."""
        return FinMap(self.domain, self.carrier, self.u, check=False)

    def q_apply(self, ts) -> np.ndarray:
        if self._q is not None:
            return self._q.table[_arr(ts)]
        return self.monad.evaluate(self.domain, self.algebra, self.u, ts)

    @property
    def q(self) -> FinMap:
        if self._q is None:
            T = self.monad
            TD = T.obj(self.domain)
            T.require(TD.size, "T(A⊗B)")
            self._q = FinMap(TD, self.carrier, self.q_apply(TD.elements()), check=False)
        return self._q

    def has_q_table(self) -> bool:
        T = self.monad
        return self._q is not None or (self.domain.size < 63 and T.size_of(self.domain.size) <= T.guard)

    @property
    def structure(self) -> FinMap:
        return self.algebra.structure

    @property
    def section(self) -> FinMap:
        """Least representative in T(A⊗B) of every class."""
        if self._section is None:
            q = self.q
            self._section = FinMap(self.carrier, q.dom, np.unique(q.table, return_index=True)[1],
                                   check=False)
        return self._section

    def partition(self) -> np.ndarray:
        """Class number of every element of T(A⊗B), classes ranked by least element."""
        _, first, inv = np.unique(self.q.table, return_index=True, return_inverse=True)
        rank = np.argsort(np.argsort(first))
        return rank[inv.ravel()]

    def to_json(self, table_limit: int = 1 << 16) -> dict:
        out = {
            "carrier": list(self.carrier.labels),
            "size": self.carrier.size,
            "construction": self.kind,
            "universal_bimorphism": self.embedding.to_labels(),
        }
        T = self.monad
        if self.has_q_table() and T.size_of(self.domain.size) <= table_limit:
            out["q"] = self.q.table.tolist()
        if self.carrier.size < 63 and T.size_of(self.carrier.size) <= table_limit:
            out["structure"] = self.structure.table.tolist()
        return out


# ---------------------------------------------------------------------------
# cache: tensors are built once per (monad, A, B, construction)

_cache_lock = threading.Lock()
_caches: "weakref.WeakKeyDictionary[Monad, dict]" = weakref.WeakKeyDictionary()


def _cache(T: Monad) -> dict:
    with _cache_lock:
        c = _caches.get(T)
        if c is None:
            c = _caches[T] = {}
        return c


def _generator_positions(T: Monad, A: Algebra, B: Algebra) -> np.ndarray:
    """Indices in A⊗B of the pairs of generators (or the injected generators)."""
    if T.base.kind == CARTESIAN:
        return (A.generators[:, None] * B.carrier.size + B.generators[None, :]).ravel()
    return np.concatenate([A.generators, A.carrier.size + B.generators])


def _finish(T: Monad, A: Algebra, B: Algebra, Q: Algebra, u: np.ndarray, kind: str,
            q: FinMap | None) -> TensorResult:
    res = TensorResult(T, A, B, Q, u, kind, q)
    pos = _generator_positions(T, A, B)
    consts = {int(np.asarray(Q.op(c))) for c in T.nullary_ops}
    pairs: dict[int, int] = {}
    for d in pos:
        g = int(u[d])
        if g not in consts and g not in pairs:
            pairs[g] = int(d)
    if not pairs and Q.carrier.size > len(consts):
        raise InvariantViolation("tensor generators do not cover the carrier")
    Q._generators = _arr(sorted(pairs))
    res.gen_pairs = pairs
    return res


def _direct(T: Monad, A: Algebra, B: Algebra, alt: bool) -> TensorResult:
    base = T.base
    D = base.tensor(A.carrier, B.carrier)
    F = FreeAlgebra(T, D)
    T.require(F.carrier.size, "T(A⊗B)")
    TA, TB = T.obj(A.carrier), T.obj(B.carrier)
    W = base.tensor(TA, TB)
    T.require(W.size, "TA⊗TB")
    w = W.elements()
    if not alt:
        lhs = T.kappa_apply(A.carrier, B.carrier, w)
        rhs = T.unit_apply(D, base.tensor_map(A.structure, B.structure).table[w])
    else:
        eta_a = FinMap(TA, TA, T.unit_apply(A.carrier, A.structure.table), check=False)
        eta_b = FinMap(TB, TB, T.unit_apply(B.carrier, B.structure.table), check=False)
        lhs = T.kappa_apply(A.carrier, B.carrier,
                            base.tensor_map(eta_a, FinMap.identity(TB)).table[w])
        rhs = T.kappa_apply(A.carrier, B.carrier,
                            base.tensor_map(FinMap.identity(TA), eta_b).table[w])
    cong = congruence_closure(T, F, lhs, rhs)
    Q, pi = quotient_algebra(T, cong, name=f"{_name(A)}⊠{_name(B)}")
    u = pi.table[T.unit_apply(D, D.elements())]
    return _finish(T, A, B, Q, u, "alt" if alt else "direct", pi)


def _relation_pairs(T: Monad, GA: FinSet, GB: FinSet, rel, left: bool):
    """κ(r ⊗ ηg) ~ κ(r' ⊗ ηg) for each relation (r, r') of one side and each
    generator g of the other."""
    base = T.base
    ra, rb = rel
    nTA, nTB = T.size_of(GA.size), T.size_of(GB.size)
    if base.kind == CARTESIAN:
        if left:
            g = T.unit_apply(GB, GB.elements())
            wa = (ra[:, None] * nTB + g[None, :]).ravel()
            wb = (rb[:, None] * nTB + g[None, :]).ravel()
        else:
            g = T.unit_apply(GA, GA.elements())
            wa = (g[None, :] * nTB + ra[:, None]).ravel()
            wb = (g[None, :] * nTB + rb[:, None]).ravel()
    else:
        shift = 0 if left else nTA
        wa, wb = ra + shift, rb + shift
    return T.kappa_apply(GA, GB, wa), T.kappa_apply(GA, GB, wb)


def _via_generators(T: Monad, A: Algebra, B: Algebra) -> TensorResult:
    base = T.base
    pA, pB = A.presentation(), B.presentation()
    GA, GB = pA.gens, pB.gens
    DG = base.tensor(GA, GB)
    F = FreeAlgebra(T, DG)
    T.require(F.carrier.size, "T(S_A⊗S_B)")
    la, lb = _relation_pairs(T, GA, GB, pA.relations(), left=True)
    ra, rb = _relation_pairs(T, GA, GB, pB.relations(), left=False)
    cong = congruence_closure(T, F, np.concatenate([la, ra]), np.concatenate([lb, rb]))
    Q, pi = quotient_algebra(T, cong, name=f"{_name(A)}⊠{_name(B)}")
    D = base.tensor(A.carrier, B.carrier)
    x = D.elements()
    if base.kind == CARTESIAN:
        i, j = base.split_index(A.carrier, B.carrier, x)
        w = pA.rep[i] * T.size_of(GB.size) + pB.rep[j]
    else:
        w = np.where(x < A.carrier.size, pA.rep[np.minimum(x, max(A.carrier.size - 1, 0))],
                     T.size_of(GA.size) + pB.rep[np.clip(x - A.carrier.size, 0, None)])
    u = pi.table[T.kappa_apply(GA, GB, w)] if x.size else np.zeros(0, dtype=np.int64)
    return _finish(T, A, B, Q, u, "generators", None)


def tensor_product(T: Monad, A: Algebra, B: Algebra, method: str = "auto") -> TensorResult:
    """A⊠B as the coequalizer of (μ·Tκ, T(a⊗b)).

    ``method`` is ``direct`` (quotient of T(A⊗B)), ``generators`` (quotient
    of T(S_A⊗S_B)) or ``auto`` (direct when T(A⊗B) is within the guard).
    """
    if A.monad is not T or B.monad is not T:
        if A.monad.base != T.base or B.monad.base != T.base:
            raise PreconditionError("algebras belong to a different base")
    if method == "auto":
        n = T.base.tensor(A.carrier, B.carrier).size
        fits = n < 63 and T.size_of(n) <= T.guard and A.carrier.size < 63 and B.carrier.size < 63
        if fits:
            w = T.base.tensor(T.obj(A.carrier), T.obj(B.carrier)).size
            fits = w <= T.guard
        method = "direct" if fits else "generators"
    key = (id(A), id(B), method)
    cache = _cache(T)
    hit = cache.get(key)
    if hit is not None and hit.left is A and hit.right is B:
        return hit
    if method == "direct":
        res = _direct(T, A, B, alt=False)
    elif method == "generators":
        res = _via_generators(T, A, B)
    elif method == "alt":
        res = _direct(T, A, B, alt=True)
    else:
        raise PreconditionError(f"unknown tensor method {method!r}")
    cache[key] = res
    return res


def tensor_product_alt(T: Monad, A: Algebra, B: Algebra) -> TensorResult:
    """A⊠B as the coequalizer of μ·T(κ·(η·a⊗1)) and μ·T(κ·(1⊗η·b))."""
    return tensor_product(T, A, B, method="alt")


# ---------------------------------------------------------------------------
# maps out of tensors


def induced_hom(T: Monad, src: Algebra, dst: Algebra, gen_values: dict[int, int]) -> tuple[FinMap, Report]:
    """The homomorphism src -> dst with prescribed values on src's generators.

    The candidate is extended over all of T(S) for the presentation
    T(S) -> src and accepted only if it is constant on every fiber.
    """
    pres = src.presentation()
    images = _arr([gen_values[int(g)] for g in pres.images])
    ext = T.extend(pres.gens, dst, images)
    r_of = pres.rep[pres.proj]
    bad = np.flatnonzero(ext != ext[r_of])
    table = ext[pres.rep]
    f = FinMap(src.carrier, dst.carrier, table, check=False)
    if bad.size:
        t = int(bad[0])
        witness = {"element": T.obj(pres.gens).label(t),
                   "value": dst.carrier.label(int(ext[t])),
                   "representative_value": dst.carrier.label(int(ext[r_of[t]]))}
        return f, Report("well defined on fibers", False, witness, {"preimages": int(ext.size)})
    return f, Report("well defined on fibers", True, details={"preimages": int(ext.size)})


def classify_bimorphism(T: Monad, t: TensorResult, f: FinMap, C: Algebra) -> FinMap:
    """The homomorphism f̄: A⊠B -> C with f̄·u = f."""
    r = is_bimorphism(T, f, t.left, t.right, C)
    if not r.passed:
        raise PreconditionError(f"not a bimorphism: {r.witness}")
    fbar, wd = induced_hom(T, t.algebra, C, {g: int(f.table[d]) for g, d in t.gen_pairs.items()})
    if not wd.passed:
        raise InvariantViolation(f"classifying map is not well defined: {wd.witness}")
    checks = [Report.compare("f̄·u = f", fbar.table[t.u], f.table, t.domain, C.carrier)]
    if t.has_q_table() and t._q is not None:
        TD = T.obj(t.domain)
        rhs = C.structure_apply(T.fmap_apply(f.table, C.carrier, TD.elements(), t.domain))
        checks.append(Report.compare("f̄·q = c·Tf", fbar.table[t.q.table], rhs, TD, C.carrier))
    checks.append(is_homomorphism(T, fbar, t.algebra, C))
    rep = Report.combine("classifying map", checks)
    if not rep.passed:
        raise InvariantViolation(f"classifying map failed verification: {rep.witness}")
    return fbar


def bimorphism_of_hom(T: Monad, t: TensorResult, g: FinMap, C: Algebra) -> FinMap:
    """g·q·η: A⊗B -> C for a homomorphism g: A⊠B -> C."""
    r = is_homomorphism(T, g, t.algebra, C)
    if not r.passed:
        raise PreconditionError(f"not a homomorphism: {r.witness}")
    return g @ t.embedding


def tensor_of_homs(T: Monad, t: TensorResult, t2: TensorResult, g: FinMap, h: FinMap) -> FinMap:
    """g⊠h: A⊠B -> A'⊠B', determined by (g⊠h)·u = u'·(g⊗h)."""
    for name, m, src, dst in (("g", g, t.left, t2.left), ("h", h, t.right, t2.right)):
        r = is_homomorphism(T, m, src, dst)
        if not r.passed:
            raise PreconditionError(f"{name} is not a homomorphism: {r.witness}")
    gh = T.base.tensor_map(g, h)
    vals = {k: int(t2.u[gh.table[d]]) for k, d in t.gen_pairs.items()}
    m, wd = induced_hom(T, t.algebra, t2.algebra, vals)
    if not wd.passed:
        raise InvariantViolation(f"g⊠h is not well defined: {wd.witness}")
    checks = [Report.compare("(g⊠h)·u = u'·(g⊗h)", m.table[t.u], t2.u[gh.table], t.domain)]
    if t._q is not None and t2.has_q_table():
        TD = T.obj(t.domain)
        Tgh = T.fmap_apply(gh.table, t2.domain, TD.elements(), t.domain)
        checks.append(Report.compare("(g⊠h)·q = q'·T(g⊗h)", m.table[t.q.table], t2.q_apply(Tgh), TD))
    rep = Report.combine("g⊠h", checks)
    if not rep.passed:
        raise InvariantViolation(f"g⊠h failed verification: {rep.witness}")
    return m


def kappa_map(T: Monad, X: FinSet, Y: FinSet) -> FinMap:
    return T.kappa(X, Y)


def check_free_tensor_identification(T: Monad, X: FinSet, Y: FinSet) -> tuple[Report, FinMap]:
    """TX⊠TY ≅ T(X⊗Y), with q_{TX,TY} corresponding to μ·Tκ.

    Returns the report and the explicit isomorphism κ̄: TX⊠TY -> T(X⊗Y),
    the classifying map of the bimorphism κ_{X,Y}.
    """
    base = T.base
    A, B = FreeAlgebra(T, X), FreeAlgebra(T, Y)
    XY = base.tensor(X, Y)
    target = FreeAlgebra(T, XY)
    t = tensor_product(T, A, B)
    kappa = T.kappa(X, Y)
    checks = []
    # μ·Tκ coequalizes (μ·Tκ, T(μ⊗μ)); both sides are homomorphisms out of a
    # free algebra, so agreement on its generators suffices
    TX, TY = A.carrier, B.carrier
    W2 = base.tensor(T.obj(TX), T.obj(TY))
    T.require(W2.size, "TTX⊗TTY")
    w = W2.elements()
    inner = T.kappa_apply(TX, TY, w)
    mu_tk = lambda ts: T.mult_apply(XY, T.fmap_apply(kappa.table, target.carrier, ts, kappa.dom))  # noqa: E731
    mm = base.tensor_map(T.mult(X), T.mult(Y)).table[w]
    checks.append(Report.compare("μ·Tκ coequalizes (μ·Tκ, T(μ⊗μ))", mu_tk(inner),
                                 kappa.table[mm], W2, target.carrier))
    iso = classify_bimorphism(T, t, kappa, target)
    checks.append(Report("κ̄ bijective", iso.is_bijective(),
                         None if iso.is_bijective() else {"image": int(np.unique(iso.table).size)}))
    if iso.is_bijective():
        checks.append(is_homomorphism(T, iso.inverse(), target, t.algebra))
        if t.has_q_table():
            TD = T.obj(t.domain)
            checks.append(Report.compare("κ̄·q = μ·Tκ", iso.table[t.q.table], mu_tk(TD.elements()), TD))
    return Report.combine(f"free tensor identification ({X.size},{Y.size})", checks,
                          size=t.carrier.size), iso


def tensor_generator_set(t: TensorResult) -> FinSet:
    return generator_set(t.algebra, t.algebra.generators)


_units: "weakref.WeakKeyDictionary[Monad, FreeAlgebra]" = weakref.WeakKeyDictionary()


def unit_object(T: Monad) -> FreeAlgebra:
    """TE, the unit for ⊠ (one shared instance per monad)."""
    with _cache_lock:
        U = _units.get(T)
        if U is None:
            U = _units[T] = FreeAlgebra(T, T.base.unit, name="TE")
        return U


_free: "weakref.WeakKeyDictionary[Monad, dict]" = weakref.WeakKeyDictionary()


def free_on(T: Monad, X: FinSet) -> FreeAlgebra:
    """(T(X), μ_X), one shared instance per (monad, X) so tensors are reused."""
    with _cache_lock:
        d = _free.get(T)
        if d is None:
            d = _free[T] = {}
        F = d.get(X)
        if F is None:
            F = d[X] = FreeAlgebra(T, X, name=f"T{X.size}")
        return F


def coproduct_injections(T: Monad, t: TensorResult) -> tuple[FinMap, FinMap]:
    """u·inl: A -> A⊠B and u·inr: B -> A⊠B on the cocartesian base."""
    base = T.base
    A, B = t.left.carrier, t.right.carrier
    iA = FinMap(A, t.carrier, t.u[base.inl(A, B).table], check=False)
    iB = FinMap(B, t.carrier, t.u[base.inr(A, B).table], check=False)
    return iA, iB


def check_coproduct(T: Monad, A: Algebra, B: Algebra, codomains, budget: int | None = None) -> Report:
    """A⊠B with u·inl, u·inr is a coproduct: for every codomain C, h ↦ (h·iA, h·iB)
    is a bijection Hom(A⊠B, C) -> Hom(A, C) × Hom(B, C)."""
    from .algebra import enumerate_homs

    if T.base.kind == CARTESIAN:
        raise PreconditionError("the coproduct comparison needs the cocartesian base")
    kw = {} if budget is None else {"budget": budget}
    t = tensor_product(T, A, B)
    iA, iB = coproduct_injections(T, t)
    checks = [is_homomorphism(T, iA, A, t.algebra), is_homomorphism(T, iB, B, t.algebra)]
    for C in codomains:
        hs = enumerate_homs(T, t.algebra, C, **kw)
        pairs = {(f.table.tobytes(), g.table.tobytes())
                 for f in enumerate_homs(T, A, C, **kw) for g in enumerate_homs(T, B, C, **kw)}
        images = [((h @ iA).table.tobytes(), (h @ iB).table.tobytes()) for h in hs]
        ok = len(set(images)) == len(images) and set(images) == pairs
        checks.append(Report(f"universal property against {_name(C)}", ok,
                             None if ok else {"homs_out": len(hs), "pairs": len(pairs),
                                              "distinct_restrictions": len(set(images))},
                             {"homs": len(hs)}))
    return Report.combine(f"{_name(A)}⊠{_name(B)} is a coproduct", checks, size=t.carrier.size)


def check_representation(T: Monad, A: Algebra, B: Algebra, C: Algebra,
                         budget: int | None = None, method: str = "generators") -> Report:
    """Bimorphisms A⊗B -> C correspond to homomorphisms A⊠B -> C: counts
    agree, f ↦ f̄ ↦ f̄·u and g ↦ g·u ↦ (g·u)‾ are both the identity."""
    from .algebra import enumerate_homs
    from .bimorphism import enumerate_bimorphisms

    kw = {} if budget is None else {"budget": budget}
    t = tensor_product(T, A, B)
    bims = enumerate_bimorphisms(T, A, B, C, method=method, **kw)
    homs = enumerate_homs(T, t.algebra, C, **kw)
    hom_keys = {h.table.tobytes() for h in homs}
    bad_bim = next((f for f in bims if (classify_bimorphism(T, t, f, C) @ t.embedding) != f), None)
    bad_cls = next((f for f in bims if classify_bimorphism(T, t, f, C).table.tobytes() not in hom_keys), None)
    bad_hom = next((g for g in homs
                    if classify_bimorphism(T, t, bimorphism_of_hom(T, t, g, C), C) != g), None)
    checks = [
        Report("counts agree", len(bims) == len(homs),
               None if len(bims) == len(homs) else {"bimorphisms": len(bims), "homomorphisms": len(homs)}),
        Report("f̄·u = f", bad_bim is None, None if bad_bim is None else {"bimorphism": bad_bim.to_labels()}),
        Report("f̄ is among the homomorphisms", bad_cls is None,
               None if bad_cls is None else {"bimorphism": bad_cls.to_labels()}),
        Report("(g·u)‾ = g", bad_hom is None, None if bad_hom is None else {"hom": bad_hom.to_labels()}),
    ]
    return Report.combine(f"Bim({_name(A)},{_name(B)};{_name(C)}) ≅ Hom({_name(A)}⊠{_name(B)},{_name(C)})",
                          checks, count=len(bims))
