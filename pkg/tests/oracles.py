"""Brute-force reference computations that share no code with the engine.

Lattices are given by an order matrix ``leq[i][j]`` (i ≤ j), vector spaces
over F₂ by their dimension.  Everything here is plain Python over tuples so
that it can be read and trusted on its own.
"""

from __future__ import annotations

import itertools
from functools import lru_cache


# -- finite lattices as order matrices ---------------------------------------

def chain_order(n: int) -> tuple:
    return tuple(tuple(i <= j for j in range(n)) for i in range(n))


def boolean_order(k: int) -> tuple:
    """Subsets of a k-set as bitmasks, ordered by inclusion."""
    n = 1 << k
    return tuple(tuple(i & j == i for j in range(n)) for i in range(n))


def dual(leq: tuple) -> tuple:
    n = len(leq)
    return tuple(tuple(leq[j][i] for j in range(n)) for i in range(n))


def join(leq: tuple, xs) -> int | None:
    """Least upper bound of the elements xs, or None if it does not exist."""
    n = len(leq)
    ubs = [u for u in range(n) if all(leq[x][u] for x in xs)]
    least = [u for u in ubs if all(leq[u][v] for v in ubs)]
    return least[0] if least else None


def join_table(leq: tuple) -> list[int]:
    """a(S) for every subset S of the carrier, indexed by bitmask."""
    n = len(leq)
    return [join(leq, [i for i in range(n) if m >> i & 1]) for m in range(1 << n)]


def is_sup_map(f, leq_a: tuple, leq_b: tuple) -> bool:
    """f preserves all joins; binary joins and the bottom suffice when finite."""
    n = len(leq_a)
    if f[join(leq_a, [])] != join(leq_b, []):
        return False
    return all(f[join(leq_a, [x, y])] == join(leq_b, [f[x], f[y]])
               for x in range(n) for y in range(n))


def sup_maps(leq_a: tuple, leq_b: tuple) -> list[tuple]:
    return [f for f in itertools.product(range(len(leq_b)), repeat=len(leq_a))
            if is_sup_map(f, leq_a, leq_b)]


def tensor_size(leq_a: tuple, leq_b: tuple) -> int:
    """|A⊗B| for sup-lattices, via A⊗B ≅ Sup(A, B^op)^op."""
    return len(sup_maps(leq_a, dual(leq_b)))


def bimorphism_count(leq_a: tuple, leq_b: tuple, leq_c: tuple) -> int:
    """Maps A×B -> C that preserve joins in each variable separately."""
    na, nb = len(leq_a), len(leq_b)
    # a bimorphism is a sup-map A -> Sup(B, C) under pointwise joins
    rows = sup_maps(leq_b, leq_c)
    count = 0
    for choice in itertools.product(rows, repeat=na):
        def f(x, y):
            return choice[x][y]
        ok = True
        for y in range(nb):
            col = [f(x, y) for x in range(na)]
            if not is_sup_map(col, leq_a, leq_c):
                ok = False
                break
        count += ok
    return count


def is_lattice(leq: tuple) -> bool:
    n = len(leq)
    if n == 0:
        return False
    return all(join(leq, list(s)) is not None
               for r in range(3) for s in itertools.combinations(range(n), r))


@lru_cache(maxsize=None)
def lattice_census(n: int) -> tuple[int, int]:
    """(labeled, up to isomorphism) counts of lattices on an n-element set."""
    if n == 0:
        return 0, 0
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    labeled = []
    for bits in itertools.product((False, True), repeat=len(pairs)):
        rel = {p: b for p, b in zip(pairs, bits)}
        leq = tuple(tuple(i == j or rel[(i, j)] for j in range(n)) for i in range(n))
        antisym = all(not (leq[i][j] and leq[j][i]) for i, j in pairs)
        trans = all(not (leq[i][j] and leq[j][k]) or leq[i][k]
                    for i in range(n) for j in range(n) for k in range(n))
        if antisym and trans and is_lattice(leq):
            labeled.append(leq)
    canon = set()
    for leq in labeled:
        canon.add(min(tuple(tuple(leq[p[i]][p[j]] for j in range(n)) for i in range(n))
                      for p in itertools.permutations(range(n))))
    return len(labeled), len(canon)


# -- quantale actions --------------------------------------------------------

def quantale_actions(mult, unit: int, leq_q: tuple, leq_a: tuple) -> list[tuple]:
    """All actions Q×A -> A: join-preserving in each variable, unital, associative."""
    nq, na = len(leq_q), len(leq_a)
    rows = sup_maps(leq_a, leq_a)
    out = []
    for choice in itertools.product(rows, repeat=nq):
        if choice[unit] != tuple(range(na)):
            continue
        if not all(is_sup_map([choice[g][x] for g in range(nq)], leq_q, leq_a) for x in range(na)):
            continue
        if all(choice[mult[g][h]][x] == choice[g][choice[h][x]]
               for g in range(nq) for h in range(nq) for x in range(na)):
            out.append(choice)
    return out


def v3_mult() -> list[list[int]]:
    return [[min(g, h) for h in range(3)] for g in range(3)]


# -- sets with a monoid action -----------------------------------------------

def monoid_actions_on_set(mult, unit: int, n: int) -> int:
    """Number of actions of a finite monoid on an n-element set."""
    m = len(mult)
    maps = list(itertools.product(range(n), repeat=n))
    count = 0
    for choice in itertools.product(maps, repeat=m):
        if choice[unit] != tuple(range(n)):
            continue
        count += all(choice[mult[g][h]][x] == choice[g][choice[h][x]]
                     for g in range(m) for h in range(m) for x in range(n))
    return count


# -- F₂ ----------------------------------------------------------------------

def f2_linear_maps(d_in: int, d_out: int) -> int:
    return 2 ** (d_in * d_out)


def f2_bilinear_maps(da: int, db: int, dc: int) -> int:
    return 2 ** (da * db * dc)
