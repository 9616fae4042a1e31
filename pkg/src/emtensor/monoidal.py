"""The monoidal structure of the category of T-algebras under ⊠.

Every structure map is induced on classes: a surjective homomorphism
s1: T(D) -> X and a second homomorphism s2: T(D) -> Y are tabulated over the
whole of T(D), and the cell X -> Y is accepted only if s2 is constant on
every fiber of s1.  D is the literal domain (e.g. (A⊗B)⊗C) whenever T(D) is
within the guard and is otherwise cut down to the generators of A, B, C.
"""

from __future__ import annotations

import itertools
import threading
import weakref
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import (
    Algebra,
    FreeAlgebra,
    TableAlgebra,
    enumerate_homs,
    generator_set,
    is_homomorphism,
    subalgebra_closure,
    verify_coequalizer_universal,
)
from .errors import InvariantViolation, PreconditionError
from .finset import FinMap, FinSet
from .monads import Monad, MonadMorphism, check_monad_morphism, check_monoidal_laws, standard_set
from .report import Report
from .tensor import TensorResult, induced_hom, tensor_of_homs, tensor_product, unit_object


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=np.int64)


@dataclass
class CoherenceCell:
    kind: str
    map: FinMap
    src: Algebra
    dst: Algebra
    report: Report
    inverse_map: FinMap | None = None
    extra: dict = field(default_factory=dict)

    @property
    def inverse(self) -> FinMap:
        if self.inverse_map is None:
            self.inverse_map = self.map.inverse()
        return self.inverse_map


_lock = threading.Lock()
_cells: "weakref.WeakKeyDictionary[Monad, dict]" = weakref.WeakKeyDictionary()


def _cell_cache(T: Monad) -> dict:
    with _lock:
        c = _cells.get(T)
        if c is None:
            c = _cells[T] = {}
        return c


def ten(T: Monad, A: Algebra, B: Algebra) -> TensorResult:
    return tensor_product(T, A, B)


def _inclusion(S: np.ndarray, X: FinSet) -> FinMap:
    G = FinSet(("incl", X, tuple(int(s) for s in S)), len(S), lambda i: X.label(int(S[i])))
    return FinMap(G, X, _arr(S), check=False)


def induce_cell(T: Monad, kind: str, D: FinSet, i1: np.ndarray, X: Algebra,
                i2: np.ndarray, Y: Algebra) -> tuple[FinMap, Report]:
    """The map X -> Y with s2 = cell·s1, where s1, s2: T(D) -> X, Y extend i1, i2.

    Raises if s1 is not surjective or s2 is not constant on its fibers.
    """
    e1 = T.extend(D, X, i1)
    e2 = T.extend(D, Y, i2)
    values, first = np.unique(e1, return_index=True)
    if values.size != X.carrier.size:
        raise InvariantViolation(f"{kind}: the presenting map is not surjective "
                                 f"({values.size} of {X.carrier.size} classes hit)")
    cell = e2[first]
    bad = np.flatnonzero(e2 != cell[e1])
    TD = T.obj(D)
    if bad.size:
        t = int(bad[0])
        raise InvariantViolation(
            f"{kind} is not well defined: preimages {TD.label(t)} and "
            f"{TD.label(int(first[e1[t]]))} of one class have different images")
    rep = Report("well defined over all preimages", True, details={"preimages": int(TD.size)})
    return FinMap(X.carrier, Y.carrier, cell, check=False), rep


def _fits(T: Monad, n: int) -> bool:
    return n < 63 and T.size_of(n) <= T.guard


def _cell_checks(T: Monad, cell: FinMap, X: Algebra, Y: Algebra, bijective: bool = True):
    out = [is_homomorphism(T, cell, X, Y)]
    if bijective:
        out.append(Report("bijective", cell.is_bijective(),
                          None if cell.is_bijective() else {"image": int(np.unique(cell.table).size)}))
    return out


def _triple_domain(T: Monad, A: Algebra, B: Algebra, C: Algebra, right: bool = False):
    """(A⊗B)⊗C (or A⊗(B⊗C)) and its inclusion into itself, or the generator
    version with the inclusion of (S_A⊗S_B)⊗S_C."""
    base = T.base
    full = base.tensor(base.tensor(A.carrier, B.carrier), C.carrier) if not right else \
        base.tensor(A.carrier, base.tensor(B.carrier, C.carrier))
    if _fits(T, full.size):
        return full, FinMap.identity(full)
    iA, iB, iC = (_inclusion(X.generators, X.carrier) for X in (A, B, C))
    if not right:
        inc = base.tensor_map(base.tensor_map(iA, iB), iC)
    else:
        inc = base.tensor_map(iA, base.tensor_map(iB, iC))
    T.require(T.size_of(inc.dom.size) if inc.dom.size < 63 else T.guard + 1, "T(S_A⊗S_B⊗S_C)")
    return inc.dom, inc


def left_triple_map(T: Monad, A, B, C) -> tuple[np.ndarray, TensorResult]:
    """((x,y),z) ↦ u(u(x,y),z) on (A⊗B)⊗C, with the outer tensor."""
    base = T.base
    tAB = ten(T, A, B)
    tL = ten(T, tAB.algebra, C)
    m = base.tensor_map(tAB.embedding, FinMap.identity(C.carrier))
    return tL.u[m.table], tL


def right_triple_map(T: Monad, A, B, C) -> tuple[np.ndarray, TensorResult]:
    """(x,(y,z)) ↦ u(x,u(y,z)) on A⊗(B⊗C), with the outer tensor."""
    base = T.base
    tBC = ten(T, B, C)
    tR = ten(T, A, tBC.algebra)
    m = base.tensor_map(FinMap.identity(A.carrier), tBC.embedding)
    return tR.u[m.table], tR


def associator(T: Monad, A: Algebra, B: Algebra, C: Algebra) -> CoherenceCell:
    """ᾱ: (A⊠B)⊠C -> A⊠(B⊠C), induced by Tα."""
    key = ("alpha", id(A), id(B), id(C))
    cache = _cell_cache(T)
    if key in cache:
        return cache[key][0]
    base = T.base
    left, tL = left_triple_map(T, A, B, C)
    right, tR = right_triple_map(T, A, B, C)
    alpha = base.alpha(A.carrier, B.carrier, C.carrier).table
    D, inc = _triple_domain(T, A, B, C)
    i1 = left[inc.table]
    i2 = right[alpha[inc.table]]
    cell, wd = induce_cell(T, "ᾱ", D, i1, tL.algebra, i2, tR.algebra)
    checks = [wd, Report.compare("ᾱ·u(u(x,y),z) = u(x,u(y,z))", cell.table[left], right[alpha])]
    checks += _cell_checks(T, cell, tL.algebra, tR.algebra)
    rep = Report.combine("associator", checks, domain="literal" if inc.dom is inc.cod else "generators")
    if not rep.passed:
        raise InvariantViolation(f"ᾱ failed: {rep.witness}")
    c = CoherenceCell("ᾱ", cell, tL.algebra, tR.algebra, rep)
    cache[key] = (c, A, B, C)
    return c


def _unit_bimorphism(T: Monad, A: Algebra, side: str) -> FinMap:
    """a·Tλ·κ_{E,A}·(1⊗η): TE⊗A -> A, or a·Tρ·κ_{A,E}·(η⊗1): A⊗TE -> A."""
    base = T.base
    E = base.unit
    TE, TA = T.obj(E), T.obj(A.carrier)
    if side == "left":
        dom = base.tensor(TE, A.carrier)
        w = base.tensor_map(FinMap.identity(TE), T.unit(A.carrier)).table
        k = T.kappa_apply(E, A.carrier, w)
        ta = T.fmap_apply(base.lam(A.carrier).table, A.carrier, k, base.tensor(E, A.carrier))
    else:
        dom = base.tensor(A.carrier, TE)
        w = base.tensor_map(T.unit(A.carrier), FinMap.identity(TE)).table
        k = T.kappa_apply(A.carrier, E, w)
        ta = T.fmap_apply(base.rho(A.carrier).table, A.carrier, k, base.tensor(A.carrier, E))
    del TA
    return FinMap(dom, A.carrier, A.structure_apply(ta), check=False)


def unitors(T: Monad, A: Algebra) -> tuple[CoherenceCell, CoherenceCell]:
    """λ̄: TE⊠A -> A and ρ̄: A⊠TE -> A with their inverses l·η_A and r·η_A."""
    key = ("unitors", id(A))
    cache = _cell_cache(T)
    if key in cache:
        return cache[key][0]
    from .tensor import classify_bimorphism

    base = T.base
    E = base.unit
    U = unit_object(T)
    out = []
    for side in ("left", "right"):
        t = ten(T, U, A) if side == "left" else ten(T, A, U)
        f = _unit_bimorphism(T, A, side)
        cell = classify_bimorphism(T, t, f, A)
        if side == "left":
            to_pair = base.tensor_map(T.unit(E), FinMap.identity(A.carrier)) @ base.lam(A.carrier).inverse()
        else:
            to_pair = base.tensor_map(FinMap.identity(A.carrier), T.unit(E)) @ base.rho(A.carrier).inverse()
        inv = t.embedding @ to_pair
        n = "λ̄" if side == "left" else "ρ̄"
        checks = [
            Report.compare(f"{n}·inverse = 1", cell.table[inv.table], A.carrier.elements(), A.carrier),
            Report.compare(f"inverse·{n} = 1", inv.table[cell.table], t.carrier.elements(), t.carrier),
            is_homomorphism(T, inv, A, t.algebra),
        ]
        checks += _cell_checks(T, cell, t.algebra, A)
        rep = Report.combine(n, checks)
        if not rep.passed:
            raise InvariantViolation(f"{n} failed: {rep.witness}")
        out.append(CoherenceCell(n, cell, t.algebra, A, rep, inverse_map=inv))
    res = (out[0], out[1])
    cache[key] = (res, A)
    return res


_symmetric: "weakref.WeakKeyDictionary[Monad, bool]" = weakref.WeakKeyDictionary()


def monad_is_symmetric(T: Monad) -> bool:
    """Condition (5) on carriers of size ≤ 2 (cached per monad)."""
    with _lock:
        if T in _symmetric:
            return _symmetric[T]
    ok = all(check_monoidal_laws(T, standard_set(i), standard_set(j), standard_set(0),
                                 conditions=(5,)).passed
             for i in range(3) for j in range(3))
    with _lock:
        _symmetric[T] = ok
    return ok


def braiding(T: Monad, A: Algebra, B: Algebra) -> CoherenceCell:
    """σ̄: A⊠B -> B⊠A, induced by Tσ."""
    key = ("sigma", id(A), id(B))
    cache = _cell_cache(T)
    if key in cache:
        return cache[key][0]
    if not T.base.symmetric or not monad_is_symmetric(T):
        raise PreconditionError("the monad fails the symmetry condition; σ̄ is not defined")
    tAB, tBA = ten(T, A, B), ten(T, B, A)
    sig = T.base.sigma(A.carrier, B.carrier).table
    cell, wd = induced_hom(T, tAB.algebra, tBA.algebra,
                           {g: int(tBA.u[sig[d]]) for g, d in tAB.gen_pairs.items()})
    if not wd.passed:
        raise InvariantViolation(f"σ̄ is not well defined: {wd.witness}")
    checks = [wd, Report.compare("σ̄·u = u·σ", cell.table[tAB.u], tBA.u[sig], tAB.domain)]
    checks += _cell_checks(T, cell, tAB.algebra, tBA.algebra)
    rep = Report.combine("braiding", checks)
    if not rep.passed:
        raise InvariantViolation(f"σ̄ failed: {rep.witness}")
    c = CoherenceCell("σ̄", cell, tAB.algebra, tBA.algebra, rep)
    cache[key] = (c, A, B)
    return c


def hom_tensor(T: Monad, g: FinMap, A: Algebra, A2: Algebra, h: FinMap, B: Algebra, B2: Algebra) -> FinMap:
    """g⊠h between the cached tensors."""
    return tensor_of_homs(T, ten(T, A, B), ten(T, A2, B2), g, h)


def _id(A: Algebra) -> FinMap:
    return FinMap.identity(A.carrier)


# ---------------------------------------------------------------------------
# coherence


def pentagon(T: Monad, A, B, C, D) -> Report:
    AB, CD = ten(T, A, B).algebra, ten(T, C, D).algebra
    BC = ten(T, B, C).algebra
    ABC_l = ten(T, AB, C).algebra
    A_BC = ten(T, A, BC).algebra
    top = associator(T, A, B, CD).map @ associator(T, AB, C, D).map
    a1 = hom_tensor(T, associator(T, A, B, C).map, ABC_l, A_BC, _id(D), D, D)
    BCD_r = ten(T, B, ten(T, C, D).algebra).algebra
    BC_D = ten(T, BC, D).algebra
    a3 = hom_tensor(T, _id(A), A, A, associator(T, B, C, D).map, BC_D, BCD_r)
    bottom = a3 @ associator(T, A, BC, D).map @ a1
    return Report.compare(f"pentagon ({_n(A)},{_n(B)},{_n(C)},{_n(D)})", top.table, bottom.table,
                          top.dom, top.cod)


def triangle(T: Monad, A, B) -> Report:
    U = unit_object(T)
    lam = unitors(T, B)[0]
    rho = unitors(T, A)[1]
    AU = ten(T, A, U).algebra
    UB = ten(T, U, B).algebra
    lhs = hom_tensor(T, _id(A), A, A, lam.map, UB, B) @ associator(T, A, U, B).map
    rhs = hom_tensor(T, rho.map, AU, A, _id(B), B, B)
    return Report.compare(f"triangle ({_n(A)},{_n(B)})", lhs.table, rhs.table, lhs.dom, lhs.cod)


def hexagon(T: Monad, A, B, C) -> Report:
    AB = ten(T, A, B).algebra
    BA = ten(T, B, A).algebra
    BC = ten(T, B, C).algebra
    lhs = associator(T, B, C, A).map @ braiding(T, A, BC).map @ associator(T, A, B, C).map
    CA = ten(T, C, A).algebra
    AC = ten(T, A, C).algebra
    rhs = (hom_tensor(T, _id(B), B, B, braiding(T, A, C).map, AC, CA)
           @ associator(T, B, A, C).map
           @ hom_tensor(T, braiding(T, A, B).map, AB, BA, _id(C), C, C))
    return Report.compare(f"hexagon ({_n(A)},{_n(B)},{_n(C)})", lhs.table, rhs.table, lhs.dom, lhs.cod)


def braiding_involution(T: Monad, A, B) -> Report:
    s = braiding(T, B, A).map @ braiding(T, A, B).map
    return Report.compare(f"σ̄² = 1 ({_n(A)},{_n(B)})", s.table, s.dom.elements(), s.dom, s.cod)


def _n(A: Algebra) -> str:
    return A.name or f"<{A.carrier.size}>"


def sample_homs(T: Monad, A: Algebra, B: Algebra, k: int = 2) -> list[FinMap]:
    """Up to k homomorphisms A -> B, preferring non-constant ones, chosen deterministically."""
    homs = enumerate_homs(T, A, B)
    nonconst = [h for h in homs if np.unique(h.table).size > 1] or homs
    if len(nonconst) <= k:
        return nonconst
    idx = np.linspace(0, len(nonconst) - 1, k).round().astype(int)
    return [nonconst[i] for i in sorted(set(idx.tolist()))]


def naturality_associator(T: Monad, A, B, C, A2, B2, C2, g, h, k) -> Report:
    AB, AB2 = ten(T, A, B).algebra, ten(T, A2, B2).algebra
    BC, BC2 = ten(T, B, C).algebra, ten(T, B2, C2).algebra
    gh = hom_tensor(T, g, A, A2, h, B, B2)
    hk = hom_tensor(T, h, B, B2, k, C, C2)
    lhs = associator(T, A2, B2, C2).map @ hom_tensor(T, gh, AB, AB2, k, C, C2)
    rhs = hom_tensor(T, g, A, A2, hk, BC, BC2) @ associator(T, A, B, C).map
    return Report.compare(f"ᾱ natural ({_n(A)},{_n(B)},{_n(C)})->({_n(A2)},{_n(B2)},{_n(C2)})",
                          lhs.table, rhs.table, lhs.dom, lhs.cod)


def naturality_unitors(T: Monad, A, A2, g) -> list[Report]:
    U = unitors(T, A)
    U2 = unitors(T, A2)
    E = unit_object(T)
    lam = g @ U[0].map
    lam2 = U2[0].map @ hom_tensor(T, _id(E), E, E, g, A, A2)
    rho = g @ U[1].map
    rho2 = U2[1].map @ hom_tensor(T, g, A, A2, _id(E), E, E)
    return [
        Report.compare(f"λ̄ natural {_n(A)}->{_n(A2)}", lam.table, lam2.table, lam.dom, lam.cod),
        Report.compare(f"ρ̄ natural {_n(A)}->{_n(A2)}", rho.table, rho2.table, rho.dom, rho.cod),
    ]


def naturality_braiding(T: Monad, A, B, A2, B2, g, h) -> Report:
    lhs = braiding(T, A2, B2).map @ hom_tensor(T, g, A, A2, h, B, B2)
    rhs = hom_tensor(T, h, B, B2, g, A, A2) @ braiding(T, A, B).map
    return Report.compare(f"σ̄ natural ({_n(A)},{_n(B)})->({_n(A2)},{_n(B2)})",
                          lhs.table, rhs.table, lhs.dom, lhs.cod)


def check_coherence(T: Monad, algebras: Sequence[Algebra], pentagons: bool = True,
                    symmetric: bool | None = None, samples: int = 2,
                    quadruples: Sequence[tuple] | None = None) -> Report:
    """Pentagon, triangle, hexagon, σ̄² = 1 and naturality on a fixture grid.

    Pentagons run over all quadruples of ``algebras`` (or the given ones);
    naturality uses up to ``samples`` homomorphisms between fixtures.
    """
    algebras = list(algebras)
    if symmetric is None:
        symmetric = T.base.symmetric and monad_is_symmetric(T)
    out = []
    cells = []
    for A, B, C in itertools.product(algebras, repeat=3):
        cells.append(associator(T, A, B, C).report)
    for A in algebras:
        lam, rho = unitors(T, A)
        cells += [lam.report, rho.report]
    out.append(Report.combine("structure cells", cells, count=len(cells)))
    if pentagons:
        quads = quadruples if quadruples is not None else list(itertools.product(algebras, repeat=4))
        out.append(Report.combine("pentagon", [pentagon(T, *q) for q in quads], count=len(quads)))
    pairs = list(itertools.product(algebras, repeat=2))
    out.append(Report.combine("triangle", [triangle(T, A, B) for A, B in pairs], count=len(pairs)))
    nat = []
    for A, A2 in pairs:
        for g in sample_homs(T, A, A2, samples):
            nat += naturality_unitors(T, A, A2, g)
    for A, B, C in itertools.product(algebras, repeat=3):
        A2, B2, C2 = B, C, A
        for g, h, k in zip(sample_homs(T, A, A2, samples), sample_homs(T, B, B2, samples),
                           sample_homs(T, C, C2, samples)):
            nat.append(naturality_associator(T, A, B, C, A2, B2, C2, g, h, k))
    if symmetric:
        for A, B in pairs:
            for g, h in zip(sample_homs(T, A, B, samples), sample_homs(T, B, A, samples)):
                nat.append(naturality_braiding(T, A, B, B, A, g, h))
    out.append(Report.combine("naturality", nat, count=len(nat)))
    if symmetric:
        out.append(Report.combine("σ̄² = 1", [braiding_involution(T, A, B) for A, B in pairs],
                                  count=len(pairs)))
        triples = list(itertools.product(algebras, repeat=3))
        out.append(Report.combine("hexagon", [hexagon(T, *t) for t in triples], count=len(triples)))
    return Report.combine("coherence", out, monad=repr(T), fixtures=[_n(A) for A in algebras])


# ---------------------------------------------------------------------------
# iterated tensors as coequalizers


def _triq_pair(T: Monad, A, B, C, right: bool):
    """The pair on generators w of (TA⊗TB)⊗TC (or TA⊗(TB⊗TC)), landing in
    T((A⊗B)⊗C): μ·T(κ·(κ⊗1)) and T((a⊗b)⊗c)."""
    base = T.base
    Aa, Bb, Cc = A.carrier, B.carrier, C.carrier
    TA, TB, TC = (T.obj(X) for X in (Aa, Bb, Cc))
    if not right:
        W = base.tensor(base.tensor(TA, TB), TC)
        T.require(W.size, "(TA⊗TB)⊗TC")
        inner = base.tensor_map(T.kappa(Aa, Bb), FinMap.identity(TC)).table
        lhs = T.kappa_apply(base.tensor(Aa, Bb), Cc, inner)
        s = base.tensor_map(base.tensor_map(A.structure, B.structure), C.structure).table
        rhs = T.unit_apply(base.tensor(base.tensor(Aa, Bb), Cc), s)
    else:
        W = base.tensor(TA, base.tensor(TB, TC))
        T.require(W.size, "TA⊗(TB⊗TC)")
        inner = base.tensor_map(FinMap.identity(TA), T.kappa(Bb, Cc)).table
        lhs = T.kappa_apply(Aa, base.tensor(Bb, Cc), inner)
        s = base.tensor_map(A.structure, base.tensor_map(B.structure, C.structure)).table
        rhs = T.unit_apply(base.tensor(Aa, base.tensor(Bb, Cc)), s)
    return W, lhs, rhs


def verify_induced_presentations(T: Monad, A, B, C, D=None,
                                 test_codomains: Sequence[Algebra] = (),
                                 budget: int = 10**7) -> Report:
    """q·T(q·η⊗1) and q·T(1⊗q·η) are coequalizers of the three-fold pairs;
    with D, q·T(q·η⊗q·η) onto (A⊠B)⊠(C⊠D) is surjective."""
    base = T.base
    out = []
    for right in (False, True):
        images, t_outer = (right_triple_map if right else left_triple_map)(T, A, B, C)
        dom = (base.tensor(A.carrier, base.tensor(B.carrier, C.carrier)) if right
               else base.tensor(base.tensor(A.carrier, B.carrier), C.carrier))
        W, lhs, rhs = _triq_pair(T, A, B, C, right)
        Q = t_outer.algebra
        name = "A⊠(B⊠C)" if right else "(A⊠B)⊠C"
        vl = T.evaluate(dom, Q, images, lhs)
        vr = T.evaluate(dom, Q, images, rhs)
        checks = [Report.compare("coequalizes the pair", vl, vr, W, Q.carrier)]
        if _fits(T, dom.size):
            F = FreeAlgebra(T, dom)
            r = FinMap(F.carrier, Q.carrier, T.extend(dom, Q, images), check=False)
            checks.append(verify_coequalizer_universal(T, F, Q, r, lhs, rhs, test_codomains, budget))
        else:
            checks.append(Report("surjective", bool(subalgebra_closure(Q, np.unique(images)).all())))
        out.append(Report.combine(f"{name} presentation", checks))
    if D is not None:
        tAB, tCD = ten(T, A, B), ten(T, C, D)
        t4 = ten(T, tAB.algebra, tCD.algebra)
        m = base.tensor_map(tAB.embedding, tCD.embedding)
        images = t4.u[m.table]
        hit = subalgebra_closure(t4.algebra, np.unique(images))
        out.append(Report("(A⊠B)⊠(C⊠D) map surjective", bool(hit.all()),
                          None if hit.all() else {"missing": t4.carrier.label(int(np.flatnonzero(~hit)[0]))},
                          {"image": int(hit.sum()), "carrier": t4.carrier.size}))
    return Report.combine("induced presentations", out)


# ---------------------------------------------------------------------------
# algebraic functors along monad morphisms

_restricted: "weakref.WeakKeyDictionary[MonadMorphism, dict]" = weakref.WeakKeyDictionary()


def restrict_algebra(phi: MonadMorphism, A: Algebra) -> TableAlgebra:
    """C^φ(A) = (A, a·φ_A) as an S-algebra (one instance per (φ, A))."""
    with _lock:
        d = _restricted.get(phi)
        if d is None:
            d = _restricted[phi] = {}
        hit = d.get(id(A))
        if hit is not None and hit[1] is A:
            return hit[0]
    S = phi.source
    comp = phi.component(A.carrier)
    table = A.structure_apply(comp.table)
    R = TableAlgebra(S, A.carrier, FinMap(S.obj(A.carrier), A.carrier, table, check=False),
                     name=f"{phi.name}*{_n(A)}")
    with _lock:
        d[id(A)] = (R, A)
    return R


def phi_bar(phi: MonadMorphism, A: Algebra, B: Algebra) -> CoherenceCell:
    """φ̄_{A,B}: A⊛B -> A⊠B with φ̄·p = q·φ_{A⊗B}."""
    S, T = phi.source, phi.target
    RA, RB = restrict_algebra(phi, A), restrict_algebra(phi, B)
    p = ten(S, RA, RB)
    t = ten(T, A, B)
    R_AB = restrict_algebra(phi, t.algebra)
    cell, wd = induced_hom(S, p.algebra, R_AB, {g: int(t.u[d]) for g, d in p.gen_pairs.items()})
    if not wd.passed:
        raise InvariantViolation(f"φ̄ is not well defined: {wd.witness}")
    checks = [wd, Report.compare("φ̄·u_S = u_T", cell.table[p.u], t.u, p.domain)]
    if p.has_q_table() and t.has_q_table():
        SD = S.obj(p.domain)
        lhs = cell.table[p.q.table]
        rhs = t.q_apply(phi.apply(p.domain, SD.elements()))
        checks.append(Report.compare("φ̄·p = q·φ", lhs, rhs, SD, t.carrier))
    checks.append(is_homomorphism(S, cell, p.algebra, R_AB))
    rep = Report.combine("φ̄", checks)
    if not rep.passed:
        raise InvariantViolation(f"φ̄ failed: {rep.witness}")
    return CoherenceCell("φ̄", cell, p.algebra, R_AB, rep, extra={"source_tensor": p, "target_tensor": t})


def algebraic_functor_monoidal(phi: MonadMorphism, A: Algebra, B: Algebra,
                               C: Algebra | None = None) -> tuple[dict, CoherenceCell, Report]:
    """Images of A, B under C^φ, the cell φ̄_{A,B}, and the monoidal-functor
    squares (associativity with C, both unit squares)."""
    S, T = phi.source, phi.target
    mono = check_monad_morphism(phi, sizes=(0, 1, 2), monoidal=True)
    if not mono.passed:
        raise PreconditionError(f"φ is not a monoidal monad morphism: {mono.witness}")
    cell = phi_bar(phi, A, B)
    RA, RB = restrict_algebra(phi, A), restrict_algebra(phi, B)
    checks = [mono, cell.report]
    # unit squares: λ̄^T·φ̄_{TE,A}·(φ_E⊛1) = λ̄^S and the mirrored one
    E = T.base.unit
    SE, TE = unit_object(S), unit_object(T)
    RTE = restrict_algebra(phi, TE)
    phiE = phi.component(E)
    phiE = FinMap(SE.carrier, TE.carrier, phiE.table, check=False)
    lamS, rhoS = unitors(S, RA)
    lamT, rhoT = unitors(T, A)
    left = lamT.map @ phi_bar(phi, TE, A).map @ tensor_of_homs(S, ten(S, SE, RA), ten(S, RTE, RA), phiE, _id(A))
    checks.append(Report.compare("unit square (left)", left.table, lamS.map.table, left.dom, left.cod))
    right = rhoT.map @ phi_bar(phi, A, TE).map @ tensor_of_homs(S, ten(S, RA, SE), ten(S, RA, RTE), _id(A), phiE)
    checks.append(Report.compare("unit square (right)", right.table, rhoS.map.table, right.dom, right.cod))
    if C is not None:
        RC = restrict_algebra(phi, C)
        tBC, tAB = ten(T, B, C), ten(T, A, B)
        pBC, pAB = ten(S, RB, RC), ten(S, RA, RB)
        R_BC, R_AB = restrict_algebra(phi, tBC.algebra), restrict_algebra(phi, tAB.algebra)
        lhs = (phi_bar(phi, A, tBC.algebra).map
               @ tensor_of_homs(S, ten(S, RA, pBC.algebra), ten(S, RA, R_BC), _id(A), phi_bar(phi, B, C).map)
               @ associator(S, RA, RB, RC).map)
        rhs = (associator(T, A, B, C).map
               @ phi_bar(phi, tAB.algebra, C).map
               @ tensor_of_homs(S, ten(S, pAB.algebra, RC), ten(S, R_AB, RC), phi_bar(phi, A, B).map, _id(C)))
        checks.append(Report.compare("associativity square", lhs.table, rhs.table, lhs.dom, lhs.cod))
    rep = Report.combine("algebraic functor is monoidal", checks)
    images = {"A": RA, "B": RB, "tensor": cell.src}
    return images, cell, rep


def kappa_bar(T: Monad, X: FinSet, Y: FinSet) -> CoherenceCell:
    """κ̄_{X,Y}: TX⊠TY -> T(X⊗Y), verified to be an isomorphism."""
    from .tensor import check_free_tensor_identification

    rep, iso = check_free_tensor_identification(T, X, Y)
    A, B = FreeAlgebra(T, X), FreeAlgebra(T, Y)
    return CoherenceCell("κ̄", iso, A, B, rep)


def generator_label_set(A: Algebra) -> FinSet:
    return generator_set(A, A.generators)
