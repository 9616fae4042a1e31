"""Finitary monoidal monads on FinSet, their law checkers, Kleisli tensors and
monad morphisms.

Every builtin monad is the free-model monad of a finite equational theory.
Elements of T(X) are encoded as integers (bit masks for subsets, base-p digit
strings for vectors), and the structure maps are available in two forms:
``*_apply`` functions that act on arrays of elements without materializing
any carrier, and FinMap-returning methods that tabulate a whole carrier and
are subject to the guard.
"""

from __future__ import annotations

import functools
import itertools
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import PreconditionError, ResourceError
from .finset import CARTESIAN, FinMap, FinSet, MonoidalBase, product
from .report import Report

DEFAULT_GUARD = 2**20
_INDEX_LIMIT = 2**62


class Op(NamedTuple):
    name: str
    arity: int


def _as_array(x) -> np.ndarray:
    return np.asarray(x, dtype=np.int64)


class FreeOps:
    """The operations of the free algebra T(X), usable as an extension target."""

    def __init__(self, monad: "Monad", X: FinSet):
        self.monad = monad
        self.X = X
        self.carrier = monad.obj(X)

    def op(self, name: str, *args):
        return self.monad.free_op(self.X, name, *args)


class TableOps:
    """Operations given by explicit tables (used for small test algebras)."""

    def __init__(self, carrier: FinSet, tables: dict[str, np.ndarray]):
        self.carrier = carrier
        self.tables = {k: _as_array(v) for k, v in tables.items()}

    def op(self, name: str, *args):
        t = self.tables[name]
        return t[tuple(_as_array(a) for a in args)] if args else t[()]


class Monad:
    """Base class.  Subclasses implement the elementwise structure."""

    name = "monad"

    def __init__(self, base: MonoidalBase, guard: int = DEFAULT_GUARD):
        self.base = base
        self.guard = int(guard)
        self.signature: tuple[Op, ...] = ()
        self._cache_lock = None

    # -- bookkeeping -----------------------------------------------------
    def __repr__(self) -> str:
        return f"{self.name}[{self.base.kind}]"

    def describe(self) -> dict:
        return {"name": self.name, "base": self.base.kind}

    def with_guard(self, guard: int) -> "Monad":
        raise NotImplementedError

    def require(self, size: int, what: str) -> None:
        """Raise a resource error if a table of ``size`` entries is over guard."""
        if size > self.guard:
            raise ResourceError(f"|{what}| = {size} exceeds the guard {self.guard}")

    def size_of(self, n: int) -> int:
        raise NotImplementedError

    def obj(self, X: FinSet) -> FinSet:
        raise NotImplementedError

    def _check_index_range(self, n: int, what: str) -> None:
        if n >= 63 or self.size_of(n) >= _INDEX_LIMIT:
            raise ResourceError(f"T({what}) is too large to index (|{what}| = {n})")

    @property
    def unary_ops(self) -> list[str]:
        return [o.name for o in self.signature if o.arity == 1]

    @property
    def binary_ops(self) -> list[str]:
        return [o.name for o in self.signature if o.arity == 2]

    @property
    def nullary_ops(self) -> list[str]:
        return [o.name for o in self.signature if o.arity == 0]

    # -- elementwise structure -----------------------------------------
    def unit_apply(self, X: FinSet, xs):
        raise NotImplementedError

    def mult_apply(self, X: FinSet, ts):
        raise NotImplementedError

    def fmap_apply(self, f_table, cod: FinSet, ts, dom: FinSet):
        """T(f) on elements ``ts`` of T(dom); ``f_table`` may be batched (..., |dom|)."""
        raise NotImplementedError

    def kappa_apply(self, X: FinSet, Y: FinSet, ws):
        """κ_{X,Y} on elements of TX⊗TY."""
        raise NotImplementedError

    def free_op(self, X: FinSet, name: str, *args):
        raise PreconditionError(f"{self.name} has no operation {name!r}")

    def evaluate(self, X: FinSet, alg, images, ts):
        """Value at ``ts`` of the unique homomorphism T(X) -> alg extending ``images``."""
        raise NotImplementedError

    def extend(self, X: FinSet, alg, images) -> np.ndarray:
        """The unique homomorphism T(X) -> alg extending ``images``, tabulated."""
        n = self.size_of(X.size)
        self.require(n, f"T({X.size})")
        return self.evaluate(X, alg, _as_array(images), np.arange(n, dtype=np.int64))

    def check_equations(self, alg, elems: np.ndarray) -> Report:
        """Check the defining equations of the theory on the given elements."""
        return Report("equations", True, details={"theory": "none"})

    # -- tabulated structure -------------------------------------------
    def unit(self, X: FinSet) -> FinMap:
        return FinMap(X, self.obj(X), self.unit_apply(X, X.elements()), check=False)

    def mult(self, X: FinSet) -> FinMap:
        TX = self.obj(X)
        TTX = self.obj(TX)
        self.require(TTX.size, f"TT({X.size})")
        return FinMap(TTX, TX, self.mult_apply(X, TTX.elements()), check=False)

    def fmap(self, f: FinMap) -> FinMap:
        Tdom = self.obj(f.dom)
        self.require(Tdom.size, f"T({f.dom.size})")
        return FinMap(Tdom, self.obj(f.cod),
                      self.fmap_apply(f.table, f.cod, Tdom.elements(), f.dom), check=False)

    def kappa(self, X: FinSet, Y: FinSet) -> FinMap:
        dom = self.base.tensor(self.obj(X), self.obj(Y))
        self.require(dom.size, "TX⊗TY")
        cod = self.obj(self.base.tensor(X, Y))
        return FinMap(dom, cod, self.kappa_apply(X, Y, dom.elements()), check=False)

    def free_ops(self, X: FinSet) -> FreeOps:
        return FreeOps(self, X)


# ---------------------------------------------------------------------------
# identity


class IdentityMonad(Monad):
    name = "identity"

    def with_guard(self, guard):
        return IdentityMonad(self.base, guard)

    def size_of(self, n):
        return n

    def obj(self, X):
        return X

    def unit_apply(self, X, xs):
        return _as_array(xs)

    def mult_apply(self, X, ts):
        return _as_array(ts)

    def fmap_apply(self, f_table, cod, ts, dom):
        return _as_array(f_table)[..., _as_array(ts)]

    def kappa_apply(self, X, Y, ws):
        return _as_array(ws)

    def evaluate(self, X, alg, images, ts):
        return _as_array(images)[_as_array(ts)]


# ---------------------------------------------------------------------------
# powerset


def _subset_labeler(X: FinSet):
    def lab(mask: int) -> str:
        return "{" + ",".join(X.label(i) for i in range(X.size) if mask >> i & 1) + "}"
    return lab


class PowersetMonad(Monad):
    """Finite powerset; T-algebras are complete (= finite) join-semilattices."""

    name = "powerset"

    def __init__(self, base, guard=DEFAULT_GUARD):
        super().__init__(base, guard)
        self.signature = (Op("bot", 0), Op("join", 2))

    def with_guard(self, guard):
        return PowersetMonad(self.base, guard)

    def size_of(self, n):
        return 1 << n

    def obj(self, X):
        self._check_index_range(X.size, X.size)
        return FinSet(("P", X), 1 << X.size, _subset_labeler(X))

    def unit_apply(self, X, xs):
        return np.left_shift(1, _as_array(xs))

    def mult_apply(self, X, ts):
        ts = _as_array(ts)
        TX = self.obj(X)
        self._check_index_range(TX.size, "TX")
        out = np.zeros(ts.shape, dtype=np.int64)
        for t in range(TX.size):
            out |= np.where((ts >> t) & 1, t, 0)
        return out

    def fmap_apply(self, f_table, cod, ts, dom):
        f = _as_array(f_table)
        ts = _as_array(ts)
        out = np.zeros(f.shape[:-1] + ts.shape, dtype=np.int64)
        for i in range(f.shape[-1]):
            bit = (ts >> i) & 1
            out |= bit << f[..., i, None] if f.ndim > 1 else bit << f[i]
        return out

    def kappa_apply(self, X, Y, ws):
        ws = _as_array(ws)
        nTY = self.size_of(Y.size)
        if self.base.kind == CARTESIAN:
            self._check_index_range(X.size * Y.size, "X⊗Y")
            s, t = np.divmod(ws, nTY)
            out = np.zeros(ws.shape, dtype=np.int64)
            for i in range(X.size):
                out |= ((s >> i) & 1) * (t << (i * Y.size))
            return out
        nTX = self.size_of(X.size)
        return np.where(ws < nTX, ws, (ws - nTX) << X.size)

    def free_op(self, X, name, *args):
        if name == "bot":
            return np.int64(0)
        if name == "join":
            return np.bitwise_or(_as_array(args[0]), _as_array(args[1]))
        return super().free_op(X, name, *args)

    def evaluate(self, X, alg, images, ts):
        images = _as_array(images)
        ts = _as_array(ts)
        res = np.full(ts.shape, alg.op("bot"), dtype=np.int64)
        for k in range(X.size):
            sel = ((ts >> k) & 1).astype(bool)
            if sel.any():
                res[sel] = alg.op("join", res[sel], images[k])
        return res

    def extend(self, X, alg, images):
        n = self.size_of(X.size)
        self.require(n, f"T({X.size})")
        images = _as_array(images)
        res = np.empty(n, dtype=np.int64)
        res[0] = alg.op("bot")
        for k in range(X.size):
            h = 1 << k
            res[h:2 * h] = alg.op("join", res[:h], images[k])
        return res

    def check_equations(self, alg, elems):
        x = elems[:, None, None]
        y = elems[None, :, None]
        z = elems[None, None, :]
        j = alg.op
        bot = alg.op("bot")
        checks = [
            ("join associative", j("join", j("join", x, y), z), j("join", x, j("join", y, z))),
            ("join commutative", j("join", x, y), j("join", y, x)),
            ("join idempotent", j("join", elems, elems), elems),
            ("bot is a unit", j("join", elems, bot), elems),
        ]
        return _equation_report(checks, elems)


# ---------------------------------------------------------------------------
# vector spaces over F_p


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


class VectorSpaceMonad(Monad):
    """Free F_p-vector space: T(X) = all functions X -> F_p.

    ``kappa="product"`` is the bilinear structure κ(u,v)(x,y) = u(x)·v(y);
    ``kappa="additive"`` is the alternative reading u(x)+v(y), kept only so
    that its failure can be demonstrated.
    """

    name = "vector_space"

    def __init__(self, base, p: int = 2, guard=DEFAULT_GUARD, kappa: str = "product"):
        if not _is_prime(int(p)):
            raise PreconditionError(f"p = {p} is not prime")
        if base.kind != CARTESIAN:
            raise PreconditionError("vector_space is defined on the cartesian base")
        if kappa not in ("product", "additive"):
            raise PreconditionError(f"unknown kappa variant {kappa!r}")
        super().__init__(base, guard)
        self.p = int(p)
        self.kappa_variant = kappa
        self.signature = (Op("zero", 0), Op("add", 2)) + tuple(
            Op(f"scale:{c}", 1) for c in range(self.p)
        )

    def __repr__(self):
        return f"vector_space({self.p})[{self.base.kind}]"

    def describe(self):
        out = {"name": self.name, "p": self.p, "base": self.base.kind}
        if self.kappa_variant != "product":
            out["kappa"] = self.kappa_variant
        return out

    def with_guard(self, guard):
        return VectorSpaceMonad(self.base, self.p, guard, self.kappa_variant)

    def size_of(self, n):
        return self.p**n

    def obj(self, X):
        self._check_index_range(X.size, X.size)
        p = self.p

        def lab(v: int) -> str:
            parts = []
            for i in range(X.size):
                c = v % p
                v //= p
                if c:
                    parts.append(f"{X.label(i)}:{c}")
            return "<" + ",".join(parts) + ">"

        return FinSet(("V", p, X), p**X.size, lab)

    # digit helpers
    def digits(self, ts, n: int) -> np.ndarray:
        ts = _as_array(ts)
        pw = self.p ** np.arange(n, dtype=np.int64)
        return (ts[..., None] // pw) % self.p

    def undigits(self, d) -> np.ndarray:
        d = _as_array(d)
        pw = self.p ** np.arange(d.shape[-1], dtype=np.int64)
        return (d * pw).sum(axis=-1)

    def vadd(self, a, b):
        a = _as_array(a)
        b = _as_array(b)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=np.int64)
        pw = 1
        top = max(int(a.max(initial=0)), int(b.max(initial=0)))
        while pw <= top:
            out += ((a // pw % self.p + b // pw % self.p) % self.p) * pw
            pw *= self.p
        return out

    def vscale(self, c, a):
        a = _as_array(a)
        c = _as_array(c) % self.p
        if self.p == 2:
            return a * c
        a, c = np.broadcast_arrays(a, c)
        out = np.zeros(a.shape, dtype=np.int64)
        pw = 1
        top = int(a.max(initial=0))
        while pw <= top:
            out += ((a // pw % self.p) * c % self.p) * pw
            pw *= self.p
        return out

    def unit_apply(self, X, xs):
        return np.power(self.p, _as_array(xs))

    def mult_apply(self, X, ts):
        ts = _as_array(ts)
        TX = self.obj(X)
        self._check_index_range(TX.size, "TX")
        out = np.zeros(ts.shape, dtype=np.int64)
        rest = ts.copy()
        for t in range(TX.size):
            c = rest % self.p
            rest //= self.p
            if c.any():
                out = self.vadd(out, self.vscale(c, t))
        return out

    def fmap_apply(self, f_table, cod, ts, dom):
        f = _as_array(f_table)
        ts = _as_array(ts)
        out = np.zeros(f.shape[:-1] + ts.shape, dtype=np.int64)
        rest = ts.copy()
        for i in range(f.shape[-1]):
            c = rest % self.p
            rest //= self.p
            target = self.p ** (f[..., i, None] if f.ndim > 1 else f[i])
            out = self.vadd(out, c * target)
        return out

    def kappa_apply(self, X, Y, ws):
        ws = _as_array(ws)
        self._check_index_range(X.size * Y.size, "X⊗Y")
        s, t = np.divmod(ws, self.size_of(Y.size))
        ds = self.digits(s, X.size)
        dt = self.digits(t, Y.size)
        if self.kappa_variant == "product":
            d = ds[..., :, None] * dt[..., None, :]
        else:
            d = ds[..., :, None] + dt[..., None, :]
        d = (d % self.p).reshape(ws.shape + (X.size * Y.size,))
        return self.undigits(d)

    def free_op(self, X, name, *args):
        if name == "zero":
            return np.int64(0)
        if name == "add":
            return self.vadd(args[0], args[1])
        if name.startswith("scale:"):
            return self.vscale(int(name[6:]), args[0])
        return super().free_op(X, name, *args)

    def evaluate(self, X, alg, images, ts):
        images = _as_array(images)
        ts = _as_array(ts)
        res = np.full(ts.shape, alg.op("zero"), dtype=np.int64)
        rest = ts.copy()
        for k in range(X.size):
            d = rest % self.p
            rest //= self.p
            for c in range(1, self.p):
                sel = d == c
                if sel.any():
                    res[sel] = alg.op("add", res[sel], alg.op(f"scale:{c}", images[k]))
        return res

    def extend(self, X, alg, images):
        n = self.size_of(X.size)
        self.require(n, f"T({X.size})")
        images = _as_array(images)
        res = np.empty(n, dtype=np.int64)
        res[0] = alg.op("zero")
        block = 1
        for k in range(X.size):
            for c in range(1, self.p):
                res[c * block:(c + 1) * block] = alg.op(
                    "add", res[:block], alg.op(f"scale:{c}", images[k])
                )
            block *= self.p
        return res

    def check_equations(self, alg, elems):
        x = elems[:, None, None]
        y = elems[None, :, None]
        z = elems[None, None, :]
        o = alg.op
        p = self.p
        checks = [
            ("add associative", o("add", o("add", x, y), z), o("add", x, o("add", y, z))),
            ("add commutative", o("add", x, y), o("add", y, x)),
            ("zero is a unit", o("add", elems, o("zero")), elems),
            ("additive inverses", o("add", elems, o(f"scale:{p - 1}", elems)),
             np.broadcast_to(o("zero"), elems.shape)),
            ("scale by one", o("scale:1", elems), elems),
        ]
        for c in range(p):
            checks.append((f"scale:{c} additive", o(f"scale:{c}", o("add", x, y)),
                           o("add", o(f"scale:{c}", x), o(f"scale:{c}", y))))
            for d in range(p):
                checks.append((f"scale:{c}·scale:{d}", o(f"scale:{c}", o(f"scale:{d}", elems)),
                               o(f"scale:{c * d % p}", elems)))
                checks.append((f"scale:{c}+scale:{d}",
                               o("add", o(f"scale:{c}", elems), o(f"scale:{d}", elems)),
                               o(f"scale:{(c + d) % p}", elems)))
        return _equation_report(checks, elems)


# ---------------------------------------------------------------------------
# M⊗(−) for a monoid M in (FinSet, ×)


class MonoidMonad(Monad):
    """The monad M×(−) of a finite monoid M; algebras are M-sets."""

    name = "monoid_action"

    def __init__(self, M: FinSet, mul, unit: int, guard=DEFAULT_GUARD):
        super().__init__(MonoidalBase(CARTESIAN), guard)
        self.M = M
        self.mul = _as_array(mul).reshape(M.size, M.size)
        self.e = int(unit)
        self.signature = tuple(Op(f"act:{m}", 1) for m in range(M.size))

    def describe(self):
        return {"name": self.name, "monoid": list(self.M.labels)}

    def with_guard(self, guard):
        return MonoidMonad(self.M, self.mul, self.e, guard)

    def size_of(self, n):
        return self.M.size * n

    def obj(self, X):
        return product(self.M, X)

    def unit_apply(self, X, xs):
        return self.e * X.size + _as_array(xs)

    def mult_apply(self, X, ts):
        ts = _as_array(ts)
        n = X.size
        m, rest = np.divmod(ts, self.M.size * n)
        k, x = np.divmod(rest, n)
        return self.mul[m, k] * n + x

    def fmap_apply(self, f_table, cod, ts, dom):
        f = _as_array(f_table)
        m, x = np.divmod(_as_array(ts), dom.size)
        return m * cod.size + f[..., x]

    def kappa_apply(self, X, Y, ws):
        raise PreconditionError("M×(−) carries no monoidal structure here")

    def free_op(self, X, name, *args):
        if name.startswith("act:"):
            m = int(name[4:])
            k, x = np.divmod(_as_array(args[0]), X.size)
            return self.mul[m, k] * X.size + x
        return super().free_op(X, name, *args)

    def evaluate(self, X, alg, images, ts):
        images = _as_array(images)
        m, x = np.divmod(_as_array(ts), X.size)
        res = np.empty(m.shape, dtype=np.int64)
        for mm in range(self.M.size):
            sel = m == mm
            if sel.any():
                res[sel] = alg.op(f"act:{mm}", images[x[sel]])
        return res

    def check_equations(self, alg, elems):
        checks = [("unit acts trivially", alg.op(f"act:{self.e}", elems), elems)]
        for a in range(self.M.size):
            for b in range(self.M.size):
                checks.append((f"act:{a}·act:{b}", alg.op(f"act:{a}", alg.op(f"act:{b}", elems)),
                               alg.op(f"act:{self.mul[a, b]}", elems)))
        return _equation_report(checks, elems)


def _equation_report(checks, elems) -> Report:
    children = []
    for name, lhs, rhs in checks:
        lhs, rhs = np.broadcast_arrays(_as_array(lhs), _as_array(rhs))
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            idx = tuple(int(elems[i]) for i in bad[0]) if lhs.ndim else ()
            children.append(Report(name, False, {"elements": list(idx)}))
        else:
            children.append(Report(name, True))
    return Report.combine("equations", children)


# ---------------------------------------------------------------------------
# construction


def instantiate_monad(name: str, base: str = CARTESIAN, p: int | None = None,
                      guard: int = DEFAULT_GUARD, **params) -> Monad:
    """Build a builtin monad by name."""
    b = MonoidalBase(base)
    if name == "identity":
        return IdentityMonad(b, guard)
    if name == "powerset":
        return PowersetMonad(b, guard)
    if name in ("vector_space", "vector"):
        return VectorSpaceMonad(b, 2 if p is None else int(p), guard, params.get("kappa", "product"))
    raise PreconditionError(f"unknown monad {name!r}")


@functools.lru_cache(maxsize=None)
def standard_set(n: int) -> FinSet:
    """The test carrier {a, b, c, ...} of size n."""
    return FinSet.of("abcdefghijklmnopqrstuvwxyz"[:n]) if n <= 26 else FinSet.range(n, "x")


# ---------------------------------------------------------------------------
# law checks


def check_monad_laws(T: Monad, X: FinSet) -> Report:
    """Unit and associativity laws at X.

    The unit laws are checked elementwise on TX.  Associativity lives on
    TTTX; it is checked elementwise when that carrier is within the guard and
    otherwise through the equivalent statement that (TX, μ_X) is the free
    model: μ_X equals the extension of the identity of TX and the free
    operations satisfy the equations of the theory.
    """
    TX = T.obj(X)
    TTX = T.obj(TX)
    T.require(TX.size, f"T({X.size})")
    elems = TX.elements()
    eta_tab = T.unit_apply(X, X.elements())
    left = T.mult_apply(X, T.fmap_apply(eta_tab, TX, elems, X))
    right = T.mult_apply(X, T.unit_apply(TX, elems))
    reports = [
        Report.compare("μ·Tη = 1", left, elems, TX, TX),
        Report.compare("μ·ηT = 1", right, elems, TX, TX),
    ]
    if TTX.size < 63 and T.size_of(TTX.size) <= T.guard:
        TTTX = T.obj(TTX)
        t3 = TTTX.elements()
        mu_tab = T.mult_apply(X, TTX.elements())
        lhs = T.mult_apply(X, T.fmap_apply(mu_tab, TX, t3, TTX))
        rhs = T.mult_apply(X, T.mult_apply(TX, t3))
        reports.append(Report.compare("μ·Tμ = μ·μT", lhs, rhs, TTTX, TX, method="elementwise"))
    else:
        T.require(TTX.size, f"TT({X.size})")
        free = T.free_ops(X)
        mu_tab = T.mult_apply(X, TTX.elements())
        ext = T.extend(TX, free, elems)
        eq = T.check_equations(free, elems)
        reports.append(Report.combine(
            "μ·Tμ = μ·μT",
            [Report.compare("μ is the extension of 1_TX", mu_tab, ext, TTX, TX), eq],
            method="equational",
        ))
    return Report.combine(f"monad laws at |X|={X.size}", reports, monad=repr(T))


def check_monoidal_laws(T: Monad, X: FinSet, Y: FinSet, Z: FinSet,
                        conditions: Sequence[int] = (1, 2, 3, 4, 5)) -> Report:
    """Monoidal-monad conditions (1)-(5), each elementwise on its domain."""
    B = T.base
    TX, TY, TZ = T.obj(X), T.obj(Y), T.obj(Z)
    out = []
    if 1 in conditions:
        dom = B.tensor(B.tensor(TX, TY), TZ)
        T.require(dom.size, "(TX⊗TY)⊗TZ")
        w = dom.elements()
        YZ = B.tensor(Y, Z)
        XY = B.tensor(X, Y)
        a = B.alpha(TX, TY, TZ).table[w]
        one_k = B.tensor_map(FinMap.identity(TX), T.kappa(Y, Z))
        lhs = T.kappa_apply(X, YZ, one_k.table[a])
        k_one = B.tensor_map(T.kappa(X, Y), FinMap.identity(TZ))
        mid = T.kappa_apply(XY, Z, k_one.table[w])
        rhs = T.fmap_apply(B.alpha(X, Y, Z).table, B.tensor(X, YZ), mid, B.tensor(XY, Z))
        out.append(Report.compare("(1) associativity", lhs, rhs, dom))
    if 2 in conditions:
        E = B.unit
        TE = T.obj(E)
        dom = B.tensor(E, TX)
        w = dom.elements()
        eta_one = B.tensor_map(T.unit(E), FinMap.identity(TX))
        k = T.kappa_apply(E, X, eta_one.table[w])
        lhs = T.fmap_apply(B.lam(X).table, X, k, B.tensor(E, X))
        left = Report.compare("(2) left unit", lhs, B.lam(TX).table[w], dom)
        dom = B.tensor(TX, E)
        w = dom.elements()
        one_eta = B.tensor_map(FinMap.identity(TX), T.unit(E))
        k = T.kappa_apply(X, E, one_eta.table[w])
        lhs = T.fmap_apply(B.rho(X).table, X, k, B.tensor(X, E))
        right = Report.compare("(2) right unit", lhs, B.rho(TX).table[w], dom)
        del TE
        out += [left, right]
    if 3 in conditions:
        TTX, TTY = T.obj(TX), T.obj(TY)
        dom = B.tensor(TTX, TTY)
        T.require(dom.size, "TTX⊗TTY")
        w = dom.elements()
        XY = B.tensor(X, Y)
        k_outer = T.kappa_apply(TX, TY, w)
        k_tab = T.kappa(X, Y).table
        lhs = T.mult_apply(XY, T.fmap_apply(k_tab, T.obj(XY), k_outer, B.tensor(TX, TY)))
        mm = B.tensor_map(T.mult(X), T.mult(Y))
        rhs = T.kappa_apply(X, Y, mm.table[w])
        out.append(Report.compare("(3) multiplication", lhs, rhs, dom))
    if 4 in conditions:
        dom = B.tensor(X, Y)
        w = dom.elements()
        ee = B.tensor_map(T.unit(X), T.unit(Y))
        lhs = T.kappa_apply(X, Y, ee.table[w])
        rhs = T.unit_apply(dom, w)
        out.append(Report.compare("(4) unit", lhs, rhs, dom))
    if 5 in conditions and B.symmetric:
        dom = B.tensor(TX, TY)
        T.require(dom.size, "TX⊗TY")
        w = dom.elements()
        lhs = T.kappa_apply(Y, X, B.sigma(TX, TY).table[w])
        rhs = T.fmap_apply(B.sigma(X, Y).table, B.tensor(Y, X), T.kappa_apply(X, Y, w),
                           B.tensor(X, Y))
        out.append(Report.compare("(5) symmetry", lhs, rhs, dom))
    return Report.combine(f"monoidal laws at sizes ({X.size},{Y.size},{Z.size})", out,
                          monad=repr(T))


def _set_quotient(n: int, pairs_a, pairs_b) -> np.ndarray:
    """Labels of the equivalence on range(n) generated by the given pairs.

    Classes are numbered by their least element.
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    a = _as_array(pairs_a)
    b = _as_array(pairs_b)
    g = coo_matrix((np.ones(a.size, dtype=np.int8), (a, b)), shape=(n, n))
    _, comp = connected_components(g, directed=False)
    first = np.full(comp.max(initial=-1) + 1, n, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(n))
    order = np.argsort(first)
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return rank[comp]


def check_preserves_reflexive_coeq(T: Monad, X: FinSet, f: FinMap, g: FinMap,
                                   require_reflexive: bool = True) -> Report:
    """Apply T(X⊗−) to the fork f, g: R ⇉ Y and its set-quotient Y -> Q, and
    check that the image is again a coequalizer in FinSet."""
    B = T.base
    if f.dom != g.dom or f.cod != g.cod:
        raise PreconditionError("f and g must be parallel")
    R, Y = f.dom, f.cod
    both = f.table == g.table
    reflexive = np.isin(Y.elements(), f.table[both]).all()
    if require_reflexive and not reflexive:
        raise PreconditionError("the pair has no common section")
    labels = _set_quotient(Y.size, f.table, g.table)
    Q = FinSet.of(Y.label(int(np.flatnonzero(labels == c)[0])) for c in range(labels.max(initial=-1) + 1))
    c = FinMap(Y, Q, labels)
    one = FinMap.identity(X)
    XR, XY, XQ = B.tensor(X, R), B.tensor(X, Y), B.tensor(X, Q)
    TXR = T.obj(XR)
    T.require(TXR.size, "T(X⊗R)")
    T.require(T.obj(XY).size, "T(X⊗Y)")
    w = TXR.elements()
    F = T.fmap_apply(B.tensor_map(one, f).table, XY, w, XR)
    G = T.fmap_apply(B.tensor_map(one, g).table, XY, w, XR)
    TXY = T.obj(XY)
    C = T.fmap_apply(B.tensor_map(one, c).table, XQ, TXY.elements(), XY)
    kernel = _set_quotient(TXY.size, F, G)
    n_classes = int(kernel.max(initial=-1)) + 1
    surjective = np.unique(C).size == T.obj(XQ).size
    # C induces exactly the kernel partition iff C is constant on classes and
    # separates different classes.
    consistent = np.unique(np.stack([kernel, C]), axis=1).shape[1] == n_classes
    separating = np.unique(C).size == n_classes
    ok = bool(surjective and consistent and separating)
    witness = None
    if not ok:
        witness = {"classes": n_classes, "image_size": int(np.unique(C).size),
                   "target_size": T.obj(XQ).size, "verdict": "not a coequalizer"}
    return Report("T(X⊗−) preserves the coequalizer", ok, witness,
                  {"reflexive": bool(reflexive), "quotient_size": Q.size})


# ---------------------------------------------------------------------------
# Kleisli structure


def kleisli_tensor(T: Monad, f: FinMap, g: FinMap, Z: FinSet, W: FinSet) -> FinMap:
    """f ⊗_T g = κ_{Z,W}·(f⊗g) for Kleisli maps f: X -> TZ, g: Y -> TW."""
    if f.cod != T.obj(Z) or g.cod != T.obj(W):
        raise PreconditionError("f and g must land in TZ and TW")
    fg = T.base.tensor_map(f, g)
    cod = T.obj(T.base.tensor(Z, W))
    return FinMap(fg.dom, cod, T.kappa_apply(Z, W, fg.table), check=False)


def kleisli_compose(T: Monad, g: FinMap, f: FinMap, Z: FinSet) -> FinMap:
    """g ∘ f = μ_Z·Tg·f for Kleisli maps f: X -> TY, g: Y -> TZ."""
    Y_set = g.dom
    tg = T.fmap_apply(g.table, T.obj(Z), f.table, Y_set)
    return FinMap(f.dom, T.obj(Z), T.mult_apply(Z, tg), check=False)


def kappa_from_kleisli_tensor(T: Monad, X: FinSet, Y: FinSet,
                              tensor: Callable[..., FinMap] | None = None) -> FinMap:
    """Rebuild κ_{X,Y} as 1_{TX} ⊗_T 1_{TY} (identities viewed as Kleisli maps)."""
    tensor = tensor or (lambda f, g, Z, W: kleisli_tensor(T, f, g, Z, W))
    return tensor(FinMap.identity(T.obj(X)), FinMap.identity(T.obj(Y)), X, Y)


def kleisli_roundtrip(T: Monad, sizes: Sequence[int] = (0, 1, 2)) -> Report:
    """κ -> ⊗_T -> κ and ⊗_T -> κ -> ⊗_T agree as tables."""
    out = []
    for nx, ny in itertools.product(sizes, repeat=2):
        X, Y = standard_set(nx), standard_set(ny)
        k = T.kappa(X, Y)
        k2 = kappa_from_kleisli_tensor(T, X, Y)
        out.append(Report.compare(f"κ roundtrip ({nx},{ny})", k2.table, k.table, k.dom))
    # the other direction: a Kleisli tensor rebuilt from its own κ
    rebuilt_kappa = {}

    def rebuilt(f, g, Z, W):
        key = (Z, W)
        if key not in rebuilt_kappa:
            rebuilt_kappa[key] = kappa_from_kleisli_tensor(T, Z, W)
        fg = T.base.tensor_map(f, g)
        return FinMap(fg.dom, rebuilt_kappa[key].cod, rebuilt_kappa[key].table[fg.table], check=False)

    count = 0
    for nx, nz in itertools.product([s for s in sizes if s <= 1], [s for s in sizes if s <= 2]):
        X, Z = standard_set(nx), standard_set(nz)
        TZ = T.obj(Z)
        maps = [FinMap(X, TZ, t) for t in itertools.product(range(TZ.size), repeat=X.size)]
        for f in maps:
            for g in maps:
                a = kleisli_tensor(T, f, g, Z, Z)
                b = rebuilt(f, g, Z, Z)
                count += 1
                if a != b:
                    out.append(Report(f"⊗_T roundtrip ({nx},{nz})", False,
                                      {"f": f.to_labels(), "g": g.to_labels()}))
                    break
    out.append(Report("⊗_T roundtrip", all(r.passed for r in out), details={"pairs": count}))
    return Report.combine("Kleisli correspondence", out, monad=repr(T))


# ---------------------------------------------------------------------------
# monad morphisms


class MonadMorphism:
    """Components φ_X: SX -> TX given by an elementwise function."""

    def __init__(self, source: Monad, target: Monad,
                 apply: Callable[[FinSet, np.ndarray], np.ndarray], name: str = "φ"):
        if source.base != target.base:
            raise PreconditionError("monad morphism between monads on different bases")
        self.source = source
        self.target = target
        self._apply = apply
        self.name = name

    def __repr__(self):
        return f"{self.name}: {self.source!r} -> {self.target!r}"

    def apply(self, X: FinSet, ts) -> np.ndarray:
        return self._apply(X, _as_array(ts))

    def component(self, X: FinSet) -> FinMap:
        SX = self.source.obj(X)
        self.source.require(SX.size, f"S({X.size})")
        return FinMap(SX, self.target.obj(X), self.apply(X, SX.elements()), check=False)


def identity_morphism(T: Monad) -> MonadMorphism:
    return MonadMorphism(T, T, lambda X, ts: ts, name="1")


def unit_morphism(T: Monad) -> MonadMorphism:
    """η: Id -> T."""
    return MonadMorphism(IdentityMonad(T.base, T.guard), T, T.unit_apply, name="η")


def corrupt_morphism(phi: MonadMorphism, size: int, element: int, value: int) -> MonadMorphism:
    """A copy of φ whose component at carriers of the given size is altered at one point."""

    def apply(X, ts):
        out = np.array(phi.apply(X, ts), dtype=np.int64)
        if X.size == size:
            out[ts == element] = value
        return out

    return MonadMorphism(phi.source, phi.target, apply, name=f"corrupted {phi.name}")


def check_monad_morphism(phi: MonadMorphism, sizes: Sequence[int] = (0, 1, 2),
                         monoidal: bool = False) -> Report:
    S, T = phi.source, phi.target
    out = []
    carriers = [standard_set(n) for n in sizes]
    for X in carriers:
        SX = S.obj(X)
        xs = X.elements()
        out.append(Report.compare(f"φ·η = η at |X|={X.size}",
                                  phi.apply(X, S.unit_apply(X, xs)), T.unit_apply(X, xs), X,
                                  T.obj(X)))
        SSX = S.obj(SX)
        if SSX.size <= S.guard:
            t = SSX.elements()
            lhs = phi.apply(X, S.mult_apply(X, t))
            TX = T.obj(X)
            s_phi = S.fmap_apply(phi.apply(X, SX.elements()), TX, t, SX)
            rhs = T.mult_apply(X, phi.apply(TX, s_phi))
            out.append(Report.compare(f"φ·ν = μ·φT·Sφ at |X|={X.size}", lhs, rhs, SSX, TX))
    for X in carriers:
        for Y in carriers:
            SX = S.obj(X)
            s = SX.elements()
            for f_t in itertools.product(range(Y.size), repeat=X.size):
                f_t = np.array(f_t, dtype=np.int64)
                lhs = T.fmap_apply(f_t, Y, phi.apply(X, s), X)
                rhs = phi.apply(Y, S.fmap_apply(f_t, Y, s, X))
                r = Report.compare(f"naturality {X.size}->{Y.size}", lhs, rhs, SX)
                if not r.passed:
                    r.witness["map"] = f_t.tolist()
                    out.append(r)
                    break
            else:
                out.append(Report(f"naturality {X.size}->{Y.size}", True))
    if monoidal:
        B = S.base
        for X in carriers:
            for Y in carriers:
                dom = B.tensor(S.obj(X), S.obj(Y))
                w = dom.elements()
                XY = B.tensor(X, Y)
                lhs = phi.apply(XY, S.kappa_apply(X, Y, w))
                pp = B.tensor_map(phi.component(X), phi.component(Y))
                rhs = T.kappa_apply(X, Y, pp.table[w])
                out.append(Report.compare(f"monoidal square ({X.size},{Y.size})", lhs, rhs, dom))
    return Report.combine("monad morphism laws", out, morphism=repr(phi))


class KleisliFunctor:
    """L: C_S -> C_T, identity on objects, f ↦ φ·f."""

    def __init__(self, phi: MonadMorphism):
        self.phi = phi

    def __call__(self, f: FinMap, Y: FinSet) -> FinMap:
        """Image of a Kleisli map f: X -> SY."""
        T = self.phi.target
        return FinMap(f.dom, T.obj(Y), self.phi.apply(Y, f.table), check=False)

    def recover_phi(self, X: FinSet) -> FinMap:
        """φ_X = L(1_{SX})."""
        return self(FinMap.identity(self.phi.source.obj(X)), X)

    def check(self, sizes: Sequence[int] = (0, 1, 2), max_maps: int = 64) -> Report:
        """Roundtrip φ = L(1), preservation of Kleisli composition and of ⊗."""
        S, T = self.phi.source, self.phi.target
        out = []
        for n in sizes:
            X = standard_set(n)
            out.append(Report.compare(f"φ = L(1) at |X|={n}", self.recover_phi(X).table,
                                      self.phi.component(X).table, S.obj(X)))
        strict = True
        compose = True
        for nx, ny in itertools.product(sizes, repeat=2):
            X, Y = standard_set(nx), standard_set(ny)
            SY = S.obj(Y)
            maps = list(itertools.islice(itertools.product(range(SY.size), repeat=X.size), max_maps))
            fs = [FinMap(X, SY, m) for m in maps]
            for f in fs[:8]:
                for g in fs[:8]:
                    lhs = self(kleisli_tensor(S, f, g, Y, Y), S.base.tensor(Y, Y))
                    rhs = kleisli_tensor(T, self(f, Y), self(g, Y), Y, Y)
                    strict &= lhs == rhs
            if nx == ny:
                for f in fs[:8]:
                    for g in fs[:8]:
                        lhs = self(kleisli_compose(S, g, f, Y), Y)
                        rhs = kleisli_compose(T, self(g, Y), self(f, Y), Y)
                        compose &= lhs == rhs
        out.append(Report("L preserves Kleisli composition", bool(compose)))
        out.append(Report("L is strict monoidal", bool(strict)))
        return Report.combine("Kleisli functor", out, morphism=repr(self.phi))


def kleisli_functor(phi: MonadMorphism) -> KleisliFunctor:
    return KleisliFunctor(phi)
