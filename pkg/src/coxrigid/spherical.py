"""Finiteness of parabolic subgroups via the classification of finite Coxeter groups.

Every decision here is combinatorial: an irreducible component is matched
against the catalogue of connected spherical diagrams (A, B, D, E, F, H, I2)
using only integer labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .diagram import INF, CoxeterMatrix


@dataclass(frozen=True, order=True)
class FiniteTypeName:
    family: str
    rank: int
    i2_label: int | None = None

    def __post_init__(self):
        f, n = self.family, self.rank
        ok = (
            (f == "A" and n >= 1)
            or (f == "B" and n >= 2)
            or (f == "D" and n >= 4)
            or (f == "E" and n in (6, 7, 8))
            or (f == "F" and n == 4)
            or (f == "H" and n in (3, 4))
            or (f == "I2" and n == 2 and self.i2_label is not None and 3 <= self.i2_label)
        )
        if not ok:
            raise ValueError(f"not a finite Coxeter type: {self}")

    @property
    def order(self) -> int:
        n = self.rank
        if self.family == "A":
            return math.factorial(n + 1)
        if self.family == "B":
            return 2**n * math.factorial(n)
        if self.family == "D":
            return 2 ** (n - 1) * math.factorial(n)
        if self.family == "I2":
            return 2 * self.i2_label
        return _EXCEPTIONAL_ORDERS[(self.family, n)]

    def __str__(self):
        if self.family == "I2":
            return f"I2({self.i2_label})"
        return f"{self.family}{self.rank}"


_EXCEPTIONAL_ORDERS = {
    ("E", 6): 51840,
    ("E", 7): 2903040,
    ("E", 8): 696729600,
    ("F", 4): 1152,
    ("H", 3): 120,
    ("H", 4): 14400,
}


def _ordered_subset(M: CoxeterMatrix, T: Iterable[str]) -> tuple[int, ...]:
    T = set(T)
    missing = T - set(M.generators)
    if missing:
        raise ValueError(f"not generators of the matrix: {sorted(missing)}")
    return tuple(i for i, g in enumerate(M.generators) if g in T)


def _components(labels, idx: tuple[int, ...]) -> list[tuple[int, ...]]:
    remaining = set(idx)
    comps = []
    for start in idx:
        if start not in remaining:
            continue
        remaining.discard(start)
        comp, stack = [start], [start]
        while stack:
            i = stack.pop()
            for j in list(remaining):
                if labels[i][j] >= 3:
                    remaining.discard(j)
                    comp.append(j)
                    stack.append(j)
        comps.append(tuple(sorted(comp)))
    return comps


def irreducible_components(M: CoxeterMatrix, T: Iterable[str]) -> list[tuple[str, ...]]:
    """Components of the graph on T with an edge wherever the label is >= 3 (inf included)."""
    idx = _ordered_subset(M, T)
    return [tuple(M.generators[i] for i in c) for c in _components(M.labels, idx)]


def _classify_connected(labels, comp: tuple[int, ...]) -> FiniteTypeName | None:
    n = len(comp)
    if n == 1:
        return FiniteTypeName("A", 1)
    adj = {i: [] for i in comp}
    edges = []
    for i, j in combinations(comp, 2):
        m = labels[i][j]
        if m == INF:
            return None
        if m >= 3:
            adj[i].append(j)
            adj[j].append(i)
            edges.append(m)
    if n == 2:
        return FiniteTypeName("I2", 2, edges[0])
    if len(edges) != n - 1:
        return None  # contains a cycle
    degrees = sorted(len(v) for v in adj.values())
    if degrees[-1] > 3:
        return None
    big = sorted(m for m in edges if m > 3)
    if degrees[-1] == 3:
        # branched tree: only D and E, all labels 3
        if big or degrees.count(3) != 1:
            return None
        center = next(i for i in comp if len(adj[i]) == 3)
        arms = []
        for nb in adj[center]:
            length, prev, cur = 1, center, nb
            while len(adj[cur]) == 2:
                prev, cur = cur, next(x for x in adj[cur] if x != prev)
                length += 1
            arms.append(length)
        arms.sort()
        if arms[0] == 1 and arms[1] == 1:
            return FiniteTypeName("D", n)
        if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
            return FiniteTypeName("E", n)
        return None
    # path
    if not big:
        return FiniteTypeName("A", n)
    if len(big) > 1:
        return None
    ends = [i for i in comp if len(adj[i]) == 1]
    path = [ends[0]]
    while len(path) < n:
        path.append(next(x for x in adj[path[-1]] if x not in path[-2:]))
    seq = [labels[path[k]][path[k + 1]] for k in range(n - 1)]
    if seq[0] != 3 and seq[-1] == 3:
        pass
    elif seq[-1] != 3:
        seq.reverse()
    else:
        # the special label sits in the interior
        if n == 4 and seq == [3, 4, 3]:
            return FiniteTypeName("F", 4)
        return None
    if seq[0] == 4:
        return FiniteTypeName("B", n)
    if seq[0] == 5 and n in (3, 4):
        return FiniteTypeName("H", n)
    return None


def _type_of(M: CoxeterMatrix, idx: tuple[int, ...]):
    types = []
    for comp in _components(M.labels, idx):
        t = _classify_connected(M.labels, comp)
        if t is None:
            return None
        types.append(t)
    return types


def classify_finite_type(M: CoxeterMatrix, T: Iterable[str]) -> list[FiniteTypeName] | None:
    """Catalogue types of the irreducible components of T, or None if W_T is infinite."""
    return _type_of(M, _ordered_subset(M, T))


def is_spherical(M: CoxeterMatrix, T: Iterable[str]) -> bool:
    return classify_finite_type(M, T) is not None


def spherical_order(M: CoxeterMatrix, T: Iterable[str]) -> int | float:
    """|W_T| from the catalogue; ``INF`` when T is not spherical."""
    types = classify_finite_type(M, T)
    if types is None:
        return INF
    return math.prod(t.order for t in types)


@lru_cache(maxsize=256)
def _maximal_spherical_idx(M: CoxeterMatrix) -> tuple[frozenset[int], ...]:
    n = M.rank
    memo: dict[frozenset, bool] = {}

    def spherical(s: frozenset) -> bool:
        if s not in memo:
            memo[s] = _type_of(M, tuple(sorted(s))) is not None
        return memo[s]

    # spherical subsets are closed downward, so grow them level by level
    level = {frozenset([i]) for i in range(n)}
    maximal = []
    while level:
        nxt = set()
        for s in level:
            grew = False
            for j in range(n):
                if j in s:
                    continue
                t = s | {j}
                if spherical(t):
                    grew = True
                    nxt.add(t)
            if not grew:
                maximal.append(s)
        level = nxt
    return tuple(sorted(maximal, key=lambda s: sorted(s)))


def maximal_spherical_subsets(M: CoxeterMatrix) -> list[frozenset[str]]:
    """Inclusion-maximal spherical subsets, ordered by their sorted member lists."""
    if M.rank == 0:
        return [frozenset()]
    return [frozenset(M.generators[i] for i in s) for s in _maximal_spherical_idx(M)]
