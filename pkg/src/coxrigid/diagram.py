"""Coxeter matrices, the diagram file format, and label-preserving isomorphism.

A diagram lists every finite label as an edge, including label 2.  Pairs of
distinct generators that are not joined by an edge have label ``INF``.

    >>> M = parse_diagram("vertices: s t\\nedge s t 3")
    >>> M.m("s", "t")
    3
    >>> render_diagram(M)
    'vertices: s t\\nedge s t 3'
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

INF = math.inf

DEFAULT_RANK_CAP = 12
DEFAULT_LABEL_CAP = 1000

_NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class DiagramError(ValueError):
    """Malformed diagram text or an invalid Coxeter matrix."""


def _check_label(value) -> int | float:
    if value == INF:
        return INF
    if isinstance(value, bool) or not isinstance(value, int):
        raise DiagramError(f"label must be an integer >= 2 or inf, got {value!r}")
    if value < 2:
        raise DiagramError(f"label must be >= 2, got {value}")
    return value


@dataclass(frozen=True)
class CoxeterMatrix:
    """The pair (S, m).

    ``generators`` is kept in lexicographic order; every deterministic output
    in the package follows that order.  ``labels`` is the full symmetric
    matrix as a tuple of rows, aligned with ``generators``.
    """

    generators: tuple[str, ...]
    labels: tuple[tuple[int | float, ...], ...]
    index: Mapping[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        if list(gens) != sorted(gens):
            raise DiagramError("generators must be sorted; use CoxeterMatrix.from_labels")
        if len(set(gens)) != len(gens):
            raise DiagramError("duplicate generator names")
        for g in gens:
            if not isinstance(g, str) or not _NAME_RE.match(g):
                raise DiagramError(f"invalid generator name {g!r}")
        n = len(gens)
        if len(self.labels) != n or any(len(row) != n for row in self.labels):
            raise DiagramError("label matrix shape does not match generators")
        for i in range(n):
            if self.labels[i][i] != 1:
                raise DiagramError(f"m({gens[i]},{gens[i]}) must be 1")
            for j in range(i + 1, n):
                a, b = self.labels[i][j], self.labels[j][i]
                if a != b:
                    raise DiagramError(f"labels for {gens[i]},{gens[j]} are not symmetric")
                _check_label(a)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "index", {g: i for i, g in enumerate(gens)})

    @classmethod
    def from_labels(cls, generators: Iterable[str], edges: Mapping | Iterable = ()) -> "CoxeterMatrix":
        """Build a matrix from generator names and finite edges.

        ``edges`` is either a mapping ``{(u, v): label}`` or an iterable of
        ``(u, v, label)`` triples.  Unlisted distinct pairs get ``INF``.
        """
        gens = sorted(generators)
        if len(set(gens)) != len(gens):
            raise DiagramError("duplicate generator names")
        idx = {g: i for i, g in enumerate(gens)}
        n = len(gens)
        rows = [[1 if i == j else INF for j in range(n)] for i in range(n)]
        items = edges.items() if isinstance(edges, Mapping) else (((u, v), l) for u, v, l in edges)
        seen = {}
        for (u, v), label in items:
            if u not in idx or v not in idx:
                raise DiagramError(f"edge {u} {v} references an unknown vertex")
            if u == v:
                raise DiagramError(f"loop at {u}")
            label = _check_label(label)
            key = frozenset((u, v))
            if key in seen and seen[key] != label:
                raise DiagramError(f"conflicting labels for {u} {v}: {seen[key]} and {label}")
            seen[key] = label
            rows[idx[u]][idx[v]] = rows[idx[v]][idx[u]] = label
        return cls(tuple(gens), tuple(tuple(r) for r in rows))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def m(self, s: str, t: str) -> int | float:
        return self.labels[self.index[s]][self.index[t]]

    def edges(self) -> list[tuple[str, str, int]]:
        """Finite-label pairs ``(u, v, m)`` with ``u < v``, in canonical order."""
        out = []
        for i, j in combinations(range(self.rank), 2):
            if self.labels[i][j] != INF:
                out.append((self.generators[i], self.generators[j], self.labels[i][j]))
        return out

    def __str__(self):
        return render_diagram(self)


def parse_diagram(text: str, rank_cap: int = DEFAULT_RANK_CAP,
                  label_cap: int = DEFAULT_LABEL_CAP) -> CoxeterMatrix:
    """Parse the line-oriented diagram format.

    ``vertices: <name>+`` must appear exactly once, before any ``edge u v
    label`` line.  ``#`` starts a comment.
    """
    vertices = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vertices:"):
            if vertices is not None:
                raise DiagramError(f"line {lineno}: 'vertices:' given twice")
            vertices = line[len("vertices:"):].split()
            if not vertices:
                raise DiagramError(f"line {lineno}: no vertices listed")
            for v in vertices:
                if not _NAME_RE.match(v):
                    raise DiagramError(f"line {lineno}: invalid vertex name {v!r}")
            dup = {v for v in vertices if vertices.count(v) > 1}
            if dup:
                raise DiagramError(f"line {lineno}: duplicate vertex {sorted(dup)[0]}")
            if len(vertices) > rank_cap:
                raise DiagramError(f"rank {len(vertices)} exceeds rank cap {rank_cap}")
            continue
        parts = line.split()
        if parts[0] != "edge" or len(parts) != 4:
            raise DiagramError(f"line {lineno}: expected 'edge <u> <v> <label>', got {line!r}")
        if vertices is None:
            raise DiagramError(f"line {lineno}: edge before 'vertices:'")
        _, u, v, tok = parts
        if tok == "inf":
            label = INF
        else:
            try:
                label = int(tok)
            except ValueError:
                raise DiagramError(f"line {lineno}: bad label {tok!r}") from None
            if label < 2:
                raise DiagramError(f"line {lineno}: label must be >= 2, got {label}")
            if label > label_cap:
                raise DiagramError(f"line {lineno}: label {label} exceeds label cap {label_cap}")
        edges.append((u, v, label))
    if vertices is None:
        raise DiagramError("missing 'vertices:' line")
    return CoxeterMatrix.from_labels(vertices, edges)


def render_diagram(M: CoxeterMatrix) -> str:
    lines = ["vertices: " + " ".join(M.generators)]
    lines += [f"edge {u} {v} {m}" for u, v, m in M.edges()]
    return "\n".join(lines)


def format_label(m) -> str:
    return "inf" if m == INF else str(m)


def sub_matrix(M: CoxeterMatrix, T: Iterable[str]) -> CoxeterMatrix:
    T = set(T)
    missing = T - set(M.generators)
    if missing:
        raise DiagramError(f"not generators of the matrix: {sorted(missing)}")
    keep = [i for i, g in enumerate(M.generators) if g in T]
    return CoxeterMatrix(
        tuple(M.generators[i] for i in keep),
        tuple(tuple(M.labels[i][j] for j in keep) for i in keep),
    )


def odd_components(M: CoxeterMatrix) -> list[tuple[str, ...]]:
    """Blocks of S joined by paths of odd finite labels, canonically ordered."""
    n = M.rank
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in combinations(range(n), 2):
        m = M.labels[i][j]
        if m != INF and m % 2 == 1:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    blocks: dict[int, list[str]] = {}
    for i in range(n):
        blocks.setdefault(find(i), []).append(M.generators[i])
    return sorted(tuple(b) for b in blocks.values())


def _profile(M: CoxeterMatrix, i: int) -> tuple:
    return tuple(sorted(M.labels[i], key=lambda x: (x == INF, x)))


def diagram_isomorphism(M1: CoxeterMatrix, M2: CoxeterMatrix) -> dict[str, str] | None:
    """First label-preserving bijection S1 -> S2 in lexicographic search order.

    Backtracking over the generators of ``M1`` in canonical order; a target
    is a candidate only if its multiset of labels matches.
    """
    if M1.rank != M2.rank:
        return None
    n = M1.rank
    prof1 = [_profile(M1, i) for i in range(n)]
    prof2 = [_profile(M2, j) for j in range(n)]
    if sorted(prof1) != sorted(prof2):
        return None
    L1, L2 = M1.labels, M2.labels
    image = [-1] * n
    used = [False] * n

    def extend(i):
        if i == n:
            return True
        for j in range(n):
            if used[j] or prof2[j] != prof1[i]:
                continue
            if all(L1[i][k] == L2[j][image[k]] for k in range(i)):
                image[i] = j
                used[j] = True
                if extend(i + 1):
                    return True
                used[j] = False
        return False

    if not extend(0):
        return None
    return {M1.generators[i]: M2.generators[image[i]] for i in range(n)}


def is_label_preserving(M1: CoxeterMatrix, M2: CoxeterMatrix, psi: Mapping[str, str]) -> bool:
    """Exhaustive check that ``psi`` is a bijection with m(s,t) = m'(psi s, psi t)."""
    if set(psi) != set(M1.generators) or sorted(psi.values()) != list(M2.generators):
        return False
    return all(M1.m(s, t) == M2.m(psi[s], psi[t]) for s in M1.generators for t in M1.generators)


def relabel(M: CoxeterMatrix, mapping: Mapping[str, str]) -> CoxeterMatrix:
    return CoxeterMatrix.from_labels(
        [mapping[g] for g in M.generators],
        [(mapping[u], mapping[v], m) for u, v, m in M.edges()],
    )
