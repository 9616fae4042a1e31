"""The ``emtensor`` command: JSON problem files in, a JSON report out.

Exit codes: 0 every check passed, 1 a law or precondition failed (the report
carries witnesses), 2 the input could not be parsed, 3 a guard or budget was
exceeded.  Reports are printed with sorted keys and no timing unless
``--timing`` is given, so identical inputs give identical bytes.
"""

from __future__ import annotations

import itertools
import json
import sys
import time
from pathlib import Path
from typing import Callable

import click

from . import __version__
from .algebra import (
    DEFAULT_BUDGET,
    Algebra,
    FreeAlgebra,
    algebra_from_json,
    check_algebra,
    enumerate_homs,
)
from .errors import EngineError, InvariantViolation, ParseError, PreconditionError, ResourceError
from .finset import CARTESIAN, COCARTESIAN, FinMap, FinSet
from .monads import (
    DEFAULT_GUARD,
    Monad,
    check_monad_laws,
    check_monoidal_laws,
    identity_morphism,
    instantiate_monad,
    kleisli_functor,
    kleisli_roundtrip,
    standard_set,
    unit_morphism,
)
from .report import Report

EXIT_PASS, EXIT_FAIL, EXIT_PARSE, EXIT_RESOURCE = 0, 1, 2, 3


class Failure(Exception):
    """A failed check found while reading the input (e.g. a corrupted table)."""

    def __init__(self, report: Report):
        super().__init__(report.name)
        self.report = report


# ---------------------------------------------------------------------------
# reading inputs


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ParseError(f"no such file: {path}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def _monad_from(opts: dict, data: dict | None = None) -> Monad:
    spec = dict((data or {}).get("monad") or {})
    if isinstance((data or {}).get("monad"), str):
        spec = {"name": data["monad"]}
    name = opts["monad"] or spec.get("name") or "powerset"
    base = opts["base"] or (data or {}).get("base") or spec.get("base") or CARTESIAN
    p = opts["p"] if opts["p"] is not None else spec.get("p")
    if base not in (CARTESIAN, COCARTESIAN):
        raise ParseError(f"unknown base {base!r}")
    try:
        return instantiate_monad(name, base, p=p, guard=opts["guard"])
    except PreconditionError as e:
        raise ParseError(str(e)) from None


def _builtin_algebra(T: Monad, name: str) -> Algebra | None:
    from . import fixtures as fx

    if name.startswith("C") and name[1:].isdigit() and T.name == "powerset":
        return fx.chain_algebra(T, int(name[1:]))
    if name == "V3" and T.name == "powerset":
        return fx.chain_algebra(T, 3, name="V3")
    if name == "D4" and T.name == "powerset":
        return FreeAlgebra(T, standard_set(2), name="D4")
    if name.startswith("F2^") and name[3:].isdigit() and T.name == "vector_space":
        return FreeAlgebra(T, standard_set(int(name[3:])), name=name)
    if name.startswith("T(") and name.endswith(")") and name[2:-1].isdigit():
        return FreeAlgebra(T, standard_set(int(name[2:-1])))
    return None


def _algebra(T: Monad, spec, default_name: str | None = None) -> Algebra:
    """An algebra from inline JSON, a file path or a builtin name; tables
    given explicitly are checked against the algebra laws."""
    if isinstance(spec, str):
        if Path(spec).exists():
            return _algebra(T, _read_json(spec), default_name or Path(spec).stem)
        A = _builtin_algebra(T, spec)
        if A is None:
            raise ParseError(f"{spec!r} is neither a file nor a builtin algebra")
        return A
    if not isinstance(spec, dict):
        raise ParseError("an algebra is a JSON object, a file name or a builtin name")
    name = spec.get("name", default_name)
    if "free_on" in spec:
        return FreeAlgebra(T, FinSet.of(spec["free_on"]), name=name)
    if "builtin" in spec:
        return _algebra(T, spec["builtin"])
    A = algebra_from_json(T, spec, name)
    r = check_algebra(T, A, method="auto")
    if not r.passed:
        r.name = f"{name or 'algebra'} is a T-algebra"
        raise Failure(r)
    return A


def _pair_table(dom: FinSet, cod: FinSet, mapping: dict, what: str) -> FinMap:
    """A table on a product set; keys may be written "(x,y)" or "x,y"."""
    norm = {}
    for k, v in mapping.items():
        k = str(k).strip()
        if not k.startswith("("):
            k = f"({k})"
        norm[k.replace(" ", "")] = str(v)
    try:
        return FinMap.from_labels(dom, cod, norm)
    except ParseError as e:
        raise ParseError(f"{what}: {e}") from None


def _monoid(T: Monad, spec, name: str | None = None):
    from .actions import make_monoid
    from .bimorphism import is_bimorphism
    from .monoidal import ten

    if isinstance(spec, str):
        data = _read_json(spec)
        return _monoid(T, data, data.get("name") or Path(spec).stem)
    if spec.get("trivial"):
        from .actions import trivial_monoid

        return trivial_monoid(T)
    try:
        A = _algebra(T, spec["algebra"], name)
        mult, unit = spec["multiplication"], spec.get("unit")
    except KeyError as e:
        raise ParseError(f"a monoid needs {e}") from None
    t = ten(T, A, A)
    f = _pair_table(t.domain, A.carrier, mult, "multiplication")
    r = is_bimorphism(T, f, A, A, A)
    if not r.passed:
        r.name = "multiplication is a bimorphism"
        raise Failure(r)
    u = A.carrier.index(str(unit)) if unit is not None else None
    return make_monoid(T, A, f, u, name=spec.get("name") or name)


# ---------------------------------------------------------------------------
# output


def _witnesses(rep: Report) -> list[dict]:
    return [{"check": r.name, "witness": r.witness} for r in rep.failures()]


def _emit(out: dict, indent: int | None) -> None:
    from .report import _jsonable

    click.echo(json.dumps(_jsonable(out), indent=indent, sort_keys=True, ensure_ascii=False))


def _run(command: str, opts: dict, body: Callable[[], tuple[Report, dict, dict]]) -> None:
    start = time.perf_counter()
    out: dict = {"command": command, "version": __version__, "carriers": {}, "tables": {},
                 "witnesses": [], "timing": None}
    try:
        rep, carriers, tables = body()
        out.update(status="pass" if rep.passed else "fail", report=rep.to_json(opts["depth"]),
                   witnesses=_witnesses(rep), carriers=carriers, tables=tables)
        code = EXIT_PASS if rep.passed else EXIT_FAIL
    except Failure as f:
        out.update(status="fail", report=f.report.to_json(opts["depth"]), witnesses=_witnesses(f.report))
        code = EXIT_FAIL
    except ParseError as e:
        out.update(status="error", error={"kind": "parse", "message": str(e)})
        code = EXIT_PARSE
    except ResourceError as e:
        out.update(status="error", error={"kind": "resource", "message": str(e)})
        code = EXIT_RESOURCE
    except (PreconditionError, InvariantViolation) as e:
        kind = "precondition" if isinstance(e, PreconditionError) else "invariant"
        out.update(status="fail", error={"kind": kind, "message": str(e)},
                   witnesses=[{"check": kind, "witness": str(e)}])
        code = EXIT_FAIL
    except EngineError as e:  # pragma: no cover - every subclass is handled above
        out.update(status="error", error={"kind": "engine", "message": str(e)})
        code = EXIT_FAIL
    if opts["timing"]:
        out["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    _emit(out, opts["indent"])
    sys.exit(code)


def _sizes(text: str) -> list[int]:
    try:
        vals = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise ParseError(f"--sizes expects comma separated integers, got {text!r}") from None
    if not vals or any(v < 0 for v in vals):
        raise ParseError("--sizes needs non-negative integers")
    return vals


# ---------------------------------------------------------------------------
# commands

_common = [
    click.option("--monad", default=None, help="identity, powerset or vector_space."),
    click.option("--base", default=None, type=click.Choice([CARTESIAN, COCARTESIAN])),
    click.option("--p", "p", default=None, type=int, help="Field size for vector_space (default 2)."),
    click.option("--guard", default=DEFAULT_GUARD, show_default=True, type=int,
                 help="Largest carrier |T(C)| that may be tabulated."),
    click.option("--budget", default=DEFAULT_BUDGET, show_default=True, type=int,
                 help="Largest number of candidates a search may visit."),
    click.option("--json-indent", "indent", default=None, type=int),
    click.option("--depth", default=3, show_default=True, type=int, help="Nesting depth of the report."),
    click.option("--timing", is_flag=True, help="Add wall-clock time (makes output nondeterministic)."),
]


def common(f):
    for opt in reversed(_common):
        f = opt(f)
    return f


@click.group()
@click.version_option(__version__, prog_name="emtensor")
def main():
    """Exact checks for monoidal monads on finite sets and tensor products of their algebras."""


@main.command()
@common
@click.option("--sizes", default="2,2,1", show_default=True, help="Largest |X|,|Y|,|Z| to check.")
def laws(sizes, **opts):
    """Monad laws and the monoidal conditions on all small carriers."""

    def body():
        T = _monad_from(opts)
        sx, sy, sz = (_sizes(sizes) + [0, 0, 0])[:3]
        checks = [check_monad_laws(T, standard_set(n)) for n in range(max(sx, sy, sz) + 1)]
        for i, j, k in itertools.product(range(sx + 1), range(sy + 1), range(sz + 1)):
            checks.append(check_monoidal_laws(T, standard_set(i), standard_set(j), standard_set(k)))
        carriers = {f"T({n})": T.size_of(n) for n in range(max(sx, sy, sz) + 1)}
        return Report.combine("laws", checks, monad=T.describe()), carriers, {}

    _run("laws", opts, body)


@main.command("kleisli-roundtrip")
@common
@click.option("--sizes", default="0,1,2", show_default=True)
def kleisli_roundtrip_cmd(sizes, **opts):
    """κ ↦ ⊗_T ↦ κ, and φ ↦ L ↦ φ for φ = 1 and φ = η."""

    def body():
        T = _monad_from(opts)
        s = _sizes(sizes)
        checks = [kleisli_roundtrip(T, s)]
        for phi in (identity_morphism(T), unit_morphism(T)):
            checks.append(kleisli_functor(phi).check(s))
        return Report.combine("Kleisli correspondence", checks), {}, {}

    _run("kleisli-roundtrip", opts, body)


@main.command()
@common
@click.option("--A", "a_spec", required=True, help="Algebra file or builtin name (C2, C3, D4, F2^1, ...).")
@click.option("--B", "b_spec", required=True)
@click.option("--alt", is_flag=True, help="Use the presentation by the two one-sided maps.")
def tensor(a_spec, b_spec, alt, **opts):
    """A⊠B: carrier, q, structure table and universal bimorphism."""
    from .bimorphism import is_bimorphism
    from .tensor import tensor_product

    def body():
        T = _monad_from(opts, _peek(a_spec))
        A, B = _algebra(T, a_spec, "A"), _algebra(T, b_spec, "B")
        t = tensor_product(T, A, B, method="alt" if alt else "auto")
        checks = [Report("quotient verified", True, details={"construction": t.kind})]
        if t.domain.size < 63 and T.size_of(A.carrier.size) * T.size_of(B.carrier.size) <= T.guard:
            checks.append(is_bimorphism(T, t.embedding, A, B, t.algebra))
        carriers = {"A": A.carrier.size, "B": B.carrier.size, "A⊠B": t.carrier.size}
        return Report.combine("tensor product", checks), carriers, t.to_json()

    _run("tensor", opts, body)


@main.command()
@common
@click.option("--A", "a_spec", required=True)
@click.option("--B", "b_spec", required=True)
@click.option("--C", "c_spec", required=True)
@click.option("--method", default="generators", type=click.Choice(["generators", "exhaustive"]))
def bimorphisms(a_spec, b_spec, c_spec, method, **opts):
    """All bimorphisms A⊗B -> C, checked against Hom(A⊠B, C)."""
    from .bimorphism import enumerate_bimorphisms
    from .tensor import check_representation

    def body():
        T = _monad_from(opts, _peek(a_spec))
        A, B, C = (_algebra(T, s, n) for s, n in ((a_spec, "A"), (b_spec, "B"), (c_spec, "C")))
        bims = enumerate_bimorphisms(T, A, B, C, budget=opts["budget"], method=method)
        rep = check_representation(T, A, B, C, budget=opts["budget"], method=method)
        tables = {"count": len(bims), "domain": list(bims[0].dom.labels) if bims else [],
                  "bimorphisms": [f.table.tolist() for f in bims]}
        carriers = {"A": A.carrier.size, "B": B.carrier.size, "C": C.carrier.size}
        return rep, carriers, tables

    _run("bimorphisms", opts, body)


@main.command()
@common
@click.option("--fixtures", "fixtures_path", required=True,
              help='JSON file {"algebras": [...], "pentagons": true}.')
def coherence(fixtures_path, **opts):
    """Pentagon, triangle, naturality, hexagon and σ̄² = 1 on a fixture grid."""
    from .monoidal import check_coherence

    def body():
        data = _read_json(fixtures_path)
        T = _monad_from(opts, data)
        specs = data.get("algebras")
        if not isinstance(specs, list) or not specs:
            raise ParseError("the fixture file needs a non-empty 'algebras' list")
        algs = [_algebra(T, s, f"A{i}") for i, s in enumerate(specs)]
        rep = check_coherence(T, algs, pentagons=bool(data.get("pentagons", True)),
                              samples=int(data.get("samples", 2)))
        return rep, {(A.name or f"A{i}"): A.carrier.size for i, A in enumerate(algs)}, {}

    _run("coherence", opts, body)


@main.command("monoid-check")
@common
@click.option("--monoid", "monoid_path", required=True)
def monoid_check(monoid_path, **opts):
    """Associativity and both unit laws of a monoid in (C^T, ⊠, TE)."""
    from .actions import check_monoid

    def body():
        data = _read_json(monoid_path)
        T = _monad_from(opts, data)
        M = _monoid(T, data, Path(monoid_path).stem)
        rep = check_monoid(T, M)
        tables = {"multiplication": M.mult_table().tolist(), "unit": M.unit_element}
        return rep, {"M": M.algebra.carrier.size}, tables

    _run("monoid-check", opts, body)


@main.command("action-monad")
@common
@click.option("--monoid", "monoid_path", required=True)
@click.option("--X", "x_size", default=2, show_default=True, type=int)
def action_monad_cmd(monoid_path, x_size, **opts):
    """The monad M⊠T at |X|: carrier, unit, monad laws and τ."""
    from .actions import ActionMonad, check_monoid

    def body():
        data = _read_json(monoid_path)
        T = _monad_from(opts, data)
        M = _monoid(T, data, Path(monoid_path).stem)
        mono = check_monoid(T, M)
        if not mono.passed:
            raise Failure(mono)
        am = ActionMonad(T, M)
        X = standard_set(x_size)
        checks = [mono, am.check_laws(X), am.check_tau(tuple(range(x_size + 1)))]
        W = am.obj(X)
        tables = {"carrier": list(W.labels), "unit": am.eta(X).table.tolist(),
                  "tau": am.tau(X).table.tolist()}
        return Report.combine("action monad", checks), {"X": x_size, "M⊠T(X)": W.size}, tables

    _run("action-monad", opts, body)


@main.command()
@common
@click.option("--monoid", "monoid_path", required=True)
@click.option("--max-algebra", default=3, show_default=True, type=int)
@click.option("--X", "x_size", default=2, show_default=True, type=int,
              help="Free (M⊠T)-algebras are checked for |X| up to this size.")
def monadicity(monoid_path, max_algebra, x_size, **opts):
    """The action census and the roundtrips K⁻¹K = 1, KK⁻¹ = 1."""
    from .actions import action_census, check_monadicity, check_monoid, regular_action

    def body():
        data = _read_json(monoid_path)
        T = _monad_from(opts, data)
        M = _monoid(T, data, Path(monoid_path).stem)
        mono = check_monoid(T, M)
        if not mono.passed:
            raise Failure(mono)
        census = action_census(T, M, max_algebra, budget=opts["budget"])
        acts = [a for _, found in census for a in found] + [regular_action(T, M)]
        rep = check_monadicity(T, M, acts, free_sizes=tuple(range(x_size + 1)))
        counts = {f"size {n}": sum(len(f) for A, f in census if A.carrier.size == n)
                  for n in range(1, max_algebra + 1)}
        return Report.combine("monadicity", [mono, rep]), {"census": counts, "actions": len(acts)}, {}

    _run("monadicity", opts, body)


@main.command()
@common
@click.option("--hom", "hom_path", required=True,
              help='JSON file {"source": monoid, "target": monoid, "map": {...}}.')
@click.option("--max-algebra", default=3, show_default=True, type=int)
def restrict(hom_path, max_algebra, **opts):
    """Restriction of scalars along a monoid homomorphism f: N -> M."""
    from .actions import (
        Action,
        action_census,
        check_action,
        check_monoid_hom,
        is_equivariant,
        regular_action,
        restrict_scalars,
    )
    from .monoidal import ten

    def body():
        data = _read_json(hom_path)
        T = _monad_from(opts, data)
        try:
            N = _monoid(T, data["source"], "N")
            M = _monoid(T, data["target"], "M")
            f = FinMap.from_labels(N.algebra.carrier, M.algebra.carrier,
                                   {str(k): str(v) for k, v in data["map"].items()})
        except KeyError as e:
            raise ParseError(f"the hom file needs {e}") from None
        hom = check_monoid_hom(T, f, N, M)
        if not hom.passed:
            raise Failure(hom)
        acts = [regular_action(T, M)]
        for i, spec in enumerate(data.get("actions", [])):
            A = _algebra(T, spec["algebra"], f"A{i}")
            t = ten(T, M.algebra, A)
            a2 = _pair_table(t.domain, A.carrier, spec["action"], "action")
            # the action is given on pairs; it must factor through u
            from .tensor import classify_bimorphism

            act = Action(M, A, classify_bimorphism(T, t, a2, A), f"action {i}")
            r = check_action(T, M, act)
            if not r.passed:
                raise Failure(r)
            acts.append(act)
        census = action_census(T, M, max_algebra, budget=opts["budget"])
        acts += [a for _, found in census for a in found]
        checks = []
        restricted = []
        for act in acts:
            out, r = restrict_scalars(T, f, N, M, act)
            r.name = f"restricted {act.name}"
            checks.append(r)
            restricted.append(out)
        ident = [restrict_scalars(T, FinMap.identity(M.algebra.carrier), M, M, a)[0].same_as(a)
                 for a in acts]
        checks.append(Report("restriction along 1 is the identity", all(ident)))
        # equivariant maps stay equivariant
        n_eq = 0
        bad = None
        for (a, ra), (b, rb) in itertools.product(zip(acts, restricted), repeat=2):
            for h in enumerate_homs(T, a.algebra, b.algebra, budget=opts["budget"]):
                if is_equivariant(T, h, a, b).passed:
                    n_eq += 1
                    if not is_equivariant(T, h, ra, rb).passed and bad is None:
                        bad = {"from": a.name, "to": b.name, "map": h.to_labels()}
        checks.append(Report("equivariant maps remain equivariant", bad is None, bad,
                             {"equivariant_maps": n_eq}))
        carriers = {"N": N.algebra.carrier.size, "M": M.algebra.carrier.size, "actions": len(acts)}
        return Report.combine("restriction of scalars", checks), carriers, {}

    _run("restrict", opts, body)


def _peek(spec: str) -> dict | None:
    """The JSON of an algebra file, to read a monad selection from it."""
    if Path(spec).exists():
        try:
            return _read_json(spec)
        except ParseError:
            return None
    return None


if __name__ == "__main__":  # pragma: no cover
    main()
