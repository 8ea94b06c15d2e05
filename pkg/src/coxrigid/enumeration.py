"""Explicit finite Coxeter groups from Todd-Coxeter coset enumeration.

Generators of a Coxeter presentation are involutions, so each generator is its
own inverse and a coset table needs one column per generator.  The ``s^2``
relators are built into the table: defining ``c.s = d`` also defines
``d.s = c``.  Only the braid relators ``(st)^m`` are scanned.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from .diagram import INF, CoxeterMatrix
from .spherical import spherical_order

log = logging.getLogger(__name__)

DEFAULT_GROUP_CAP = 5000
# HLT may define many more cosets than the final index
WORKSPACE_FACTOR = 64


class CapExceeded(RuntimeError):
    """A size cap was reached before the computation finished."""


@dataclass
class CosetTable:
    rows: list[list[int]]
    complete: bool
    defined: int = 0  # total cosets ever defined, a measure of work

    @property
    def index(self) -> int:
        return len(self.rows)

    @property
    def status(self) -> str:
        return "complete" if self.complete else "capped"


def _relators(M: CoxeterMatrix) -> list[list[int]]:
    rels = []
    for i, j in combinations(range(M.rank), 2):
        m = M.labels[i][j]
        if m != INF:
            rels.append([i, j] * m)
    return rels


class _Enumerator:
    """HLT-style enumeration with immediate coincidence processing."""

    def __init__(self, ngens: int, limit: int):
        self.ngens = ngens
        self.limit = limit
        self.table: list[list[int]] = [[-1] * ngens]
        self.parent = [0]

    def rep(self, c: int) -> int:
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def define(self, c: int, x: int) -> None:
        if len(self.table) >= self.limit:
            raise CapExceeded(f"coset enumeration defined more than {self.limit} cosets")
        d = len(self.table)
        self.table.append([-1] * self.ngens)
        self.parent.append(d)
        self.table[c][x] = d
        self.table[d][x] = c

    def scan_and_fill(self, c: int, word: list[int]) -> None:
        T = self.table
        f, b = c, c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and T[f][word[i]] >= 0:
                f = T[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and T[b][word[j]] >= 0:
                b = T[b][word[j]]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                T[f][word[i]] = b
                T[b][word[i]] = f
                return
            self.define(f, word[i])

    def _merge(self, k: int, l: int, queue: list[int]) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        lo, hi = min(k, l), max(k, l)
        self.parent[hi] = lo
        queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        T = self.table
        queue: list[int] = []
        self._merge(a, b, queue)
        qi = 0
        while qi < len(queue):
            e = queue[qi]
            qi += 1
            for x in range(self.ngens):
                f = T[e][x]
                if f < 0:
                    continue
                if T[f][x] == e:
                    T[f][x] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if T[e1][x] >= 0:
                    self._merge(f1, T[e1][x], queue)
                elif T[f1][x] >= 0:
                    self._merge(e1, T[f1][x], queue)
                else:
                    T[e1][x] = f1
                    T[f1][x] = e1

    def compact(self) -> list[list[int]]:
        """Live cosets renumbered in breadth-first order from coset 0."""
        T = self.table
        order = [0]
        new = {0: 0}
        k = 0
        while k < len(order):
            c = order[k]
            k += 1
            for x in range(self.ngens):
                d = self.rep(T[c][x])
                if d not in new:
                    new[d] = len(order)
                    order.append(d)
        return [[new[self.rep(T[c][x])] for x in range(self.ngens)] for c in order]


def coset_enumeration(M: CoxeterMatrix, subgroup_gens: Iterable[str] = (),
                      cap: int = DEFAULT_GROUP_CAP, workspace: int | None = None) -> CosetTable:
    """Enumerate the cosets of W_H in W for H = ``subgroup_gens``.

    ``cap`` bounds the final index; ``workspace`` bounds the number of cosets
    defined along the way (default ``WORKSPACE_FACTOR * cap``).  Hitting
    either bound gives a table with status ``capped`` rather than an error.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    sub = [M.index[h] for h in subgroup_gens]
    rels = _relators(M)
    en = _Enumerator(M.rank, workspace or WORKSPACE_FACTOR * cap)
    try:
        for h in sub:
            en.scan_and_fill(0, [h])
        c = 0
        while c < len(en.table):
            if en.alive(c):
                for r in rels:
                    en.scan_and_fill(c, r)
                    if not en.alive(c):
                        break
                else:
                    for x in range(M.rank):
                        if en.table[c][x] < 0:
                            en.define(c, x)
            c += 1
    except CapExceeded as e:
        log.debug("coset enumeration capped: %s", e)
        return CosetTable([], False, len(en.table))
    rows = en.compact()
    if len(rows) > cap:
        return CosetTable([], False, len(en.table))
    return CosetTable(rows, True, len(en.table))


@dataclass
class GroupTable:
    """A finite Coxeter group as dense element indices; 0 is the identity."""

    matrix: CoxeterMatrix
    mult: np.ndarray
    inv: np.ndarray
    elt_words: list[tuple[str, ...]]
    generator_elts: tuple[int, ...]
    _orders: np.ndarray | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return len(self.elt_words)

    identity = 0

    def word_to_element(self, w: Iterable[str]) -> int:
        g = 0
        for s in w:
            g = int(self.mult[g, self.generator_elts[self.matrix.index[s]]])
        return g

    def conj(self, g: int, h: int) -> int:
        """g h g^-1"""
        return int(self.mult[self.mult[g, h], self.inv[g]])

    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            n = self.order
            orders = np.zeros(n, dtype=np.int64)
            idx = np.arange(n)
            power = idx.copy()
            k = 1
            while (orders == 0).any():
                orders[(power == 0) & (orders == 0)] = k
                power = self.mult[power, idx]
                k += 1
            self._orders = orders
        return self._orders

    def closure(self, X: Iterable[int]) -> set[int]:
        X = list(X)
        seen = {0}
        queue = deque([0])
        mult = self.mult
        while queue:
            g = queue.popleft()
            row = mult[g]
            for x in X:
                h = int(row[x])
                if h not in seen:
                    seen.add(h)
                    queue.append(h)
        return seen


def build_group(M: CoxeterMatrix, cap: int = DEFAULT_GROUP_CAP) -> GroupTable:
    """Multiplication table of W(M) from the regular action on cosets of the trivial subgroup."""
    order = spherical_order(M, M.generators)
    if order == INF:
        raise ValueError("the Coxeter group is infinite")
    if order > cap:
        raise CapExceeded(f"group order {order} exceeds cap {cap}")
    ct = coset_enumeration(M, (), cap=cap)
    if not ct.complete:
        raise CapExceeded("coset enumeration did not complete")
    n, r = ct.index, M.rank
    table = np.array(ct.rows, dtype=np.int64).reshape(n, r)

    # breadth-first spanning tree: word(child) = word(parent) + s
    parent = [-1] * n
    via = [-1] * n
    words: list[tuple[str, ...]] = [()] + [None] * (n - 1)
    bfs = [0]
    for c in bfs:
        for x in range(r):
            d = int(table[c, x])
            if words[d] is None:
                words[d] = words[c] + (M.generators[x],)
                parent[d], via[d] = c, x
                bfs.append(d)

    dtype = np.int32
    mult = np.empty((n, n), dtype=dtype)
    mult[:, 0] = np.arange(n)
    for h in bfs[1:]:
        # g * h = (g * parent(h)) . s
        mult[:, h] = table[mult[:, parent[h]], via[h]]
    inv = np.argmin(mult, axis=1).astype(dtype)
    gens = tuple(int(table[0, x]) for x in range(r))
    return GroupTable(M, mult, inv, words, gens)


def involutions(G: GroupTable) -> frozenset[int]:
    sq = G.mult[np.arange(G.order), np.arange(G.order)]
    return frozenset(int(g) for g in np.nonzero(sq == 0)[0] if g != 0)


def _conjugacy_orbit(G: GroupTable, h: int) -> frozenset[int]:
    idx = np.arange(G.order)
    return frozenset(int(x) for x in G.mult[G.mult[idx, h], G.inv])


def reflections(G: GroupTable) -> frozenset[int]:
    out: set[int] = set()
    for s in G.generator_elts:
        out |= _conjugacy_orbit(G, s)
    return frozenset(out)


def reflection_conjugacy_classes(G: GroupTable) -> list[frozenset[int]]:
    classes = []
    todo = set(reflections(G))
    while todo:
        cls = _conjugacy_orbit(G, min(todo))
        classes.append(cls)
        todo -= cls
    return sorted(classes, key=min)


def generates(G: GroupTable, X: Iterable[int]) -> bool:
    return len(G.closure(X)) == G.order


def dump_group_table(G: GroupTable) -> str:
    """Plain-text dump: order, generator images, element words, multiplication rows."""
    lines = [f"order {G.order}"]
    lines.append("generators " + " ".join(f"{s}={g}" for s, g in zip(G.matrix.generators, G.generator_elts)))
    for i, w in enumerate(G.elt_words):
        lines.append(f"word {i} " + (" ".join(w) if w else "e"))
    for i in range(G.order):
        lines.append(f"row {i} " + " ".join(map(str, G.mult[i].tolist())))
    return "\n".join(lines) + "\n"


def random_associativity_check(G: GroupTable, trials: int = 10_000, seed: int = 0) -> bool:
    rng = random.Random(seed)
    n = G.order
    for _ in range(trials):
        a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        if G.mult[G.mult[a, b], c] != G.mult[a, G.mult[b, c]]:
            return False
    return True
