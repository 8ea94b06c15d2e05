"""Word problem for Coxeter groups by braid-move rewriting.

A word is reduced exactly when no word in its braid-move orbit has two equal
adjacent letters (Tits).  ``reduce`` explores orbits breadth first, deletes
any ``ss`` it meets and starts over from the shorter word.  The canonical
form of an element is the lexicographically least word in the orbit that
remains.  Works for infinite Coxeter groups too; no braid move exists for
an ``INF`` label.

Moves with label 2 only permute commuting letters, so the orbit is walked
over commutation classes (keyed by Foata normal form) and the label >= 3
moves and deletions are found through the dependence order of a single
representative.  This keeps orbits of long words small.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .diagram import INF, CoxeterMatrix

DEFAULT_WORD_CAP = 40
DEFAULT_ORBIT_CAP = 10**6

Word = tuple[str, ...]


class WordError(ValueError):
    """A letter outside S, or a length cap exceeded."""


class OrbitCapExceeded(RuntimeError):
    """The braid orbit grew past the configured cap; the instance is infeasible, not wrong."""


@dataclass(frozen=True)
class ReducedWord:
    letters: Word
    certified: bool = True

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        return format_word(self.letters)


def parse_word(M: CoxeterMatrix, text: str) -> Word:
    """Whitespace-separated generator names; the literal ``e`` is the empty word."""
    toks = text.split()
    if toks == ["e"] and "e" not in M.index:
        return ()
    for t in toks:
        if t not in M.index:
            raise WordError(f"unknown generator {t!r}")
    return tuple(toks)


def format_word(w: Iterable[str]) -> str:
    w = tuple(w)
    return " ".join(w) if w else "e"


def _encode(M: CoxeterMatrix, w: Iterable[str], word_cap: int | None) -> tuple[int, ...]:
    w = tuple(w)
    if word_cap is not None and len(w) > word_cap:
        raise WordError(f"word length {len(w)} exceeds cap {word_cap}")
    try:
        return tuple(M.index[s] for s in w)
    except KeyError as e:
        raise WordError(f"unknown generator {e.args[0]!r}") from None


def _decode(M: CoxeterMatrix, w: tuple[int, ...]) -> Word:
    return tuple(M.generators[i] for i in w)


def _free_cancel(w: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in w:
        if out and out[-1] == x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class _Rules:
    """Per-matrix tables: which letters fail to commute with which."""

    def __init__(self, labels):
        r = len(labels)
        self.labels = labels
        # dependent letters: equal or not commuting
        self.dep = [tuple(b for b in range(r) if labels[a][b] != 2) for a in range(r)]
        self.nc = [tuple(b for b in range(r) if b != a and labels[a][b] != 2) for a in range(r)]
        self.braids = [(s, t, labels[s][t]) for s in range(r) for t in range(s + 1, r)
                       if labels[s][t] != INF and labels[s][t] >= 3]


_RULES: dict = {}


def _rules(labels) -> _Rules:
    rules = _RULES.get(labels)
    if rules is None:
        rules = _RULES[labels] = _Rules(labels)
    return rules


def _foata(rules: _Rules, w: tuple[int, ...]) -> tuple[int, ...]:
    """Foata normal form: a canonical word for the commutation class of ``w``."""
    top = [0] * len(rules.dep)
    layers: list[list[int]] = []
    dep = rules.dep
    for a in w:
        k = max(top[b] for b in dep[a])
        if k == len(layers):
            layers.append([])
        layers[k].append(a)
        top[a] = k + 1
    return tuple(x for layer in layers for x in sorted(layer))


def _lex_normal(rules: _Rules, w: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically least word in the commutation class of ``w``."""
    rest = list(w)
    out = []
    dep = rules.dep
    while rest:
        blocked: set[int] = set()
        best, best_pos = None, -1
        for p, a in enumerate(rest):
            if a not in blocked and (best is None or a < best):
                best, best_pos = a, p
            blocked.update(dep[a])
        out.append(best)
        del rest[best_pos]
    return tuple(out)


def _deletable_pairs(rules: _Rules, w: tuple[int, ...], first_only: bool):
    """Positions (i, j) of equal letters that commutations can make adjacent."""
    r = len(rules.dep)
    last = [-1] * r
    blocked = [False] * r
    out = []
    for p, a in enumerate(w):
        if last[a] >= 0 and not blocked[a]:
            out.append((last[a], p))
            if first_only:
                return out
        for b in rules.nc[a]:
            blocked[b] = True
        last[a] = p
        blocked[a] = False
    return out


def _braid_neighbours(rules: _Rules, w: tuple[int, ...]):
    """Words obtained by one braid move with label >= 3, up to commutation.

    A window of m alternating s/t occurrences can be made consecutive iff no
    other letter lies between its ends in the dependence order.
    """
    dep = rules.dep
    n = len(w)
    for s, t, m in rules.braids:
        pos = [p for p in range(n) if w[p] == s or w[p] == t]
        for k in range(len(pos) - m + 1):
            window = pos[k:k + m]
            if any(w[window[i]] == w[window[i + 1]] for i in range(m - 1)):
                continue
            lo, hi = window[0], window[-1]
            members = set(window)
            hit = [False] * len(dep)
            for b in dep[w[lo]]:
                hit[b] = True
            above = set()
            for q in range(lo + 1, hi + 1):
                if hit[w[q]]:
                    above.add(q)
                    for b in dep[w[q]]:
                        hit[b] = True
            hit = [False] * len(dep)
            for b in dep[w[hi]]:
                hit[b] = True
            below = set()
            for q in range(hi - 1, lo - 1, -1):
                if hit[w[q]]:
                    below.add(q)
                    for b in dep[w[q]]:
                        hit[b] = True
            between = [q for q in range(lo + 1, hi) if q not in members]
            if any(q in above and q in below for q in between):
                continue
            left = tuple(w[q] for q in between if q not in above)
            right = tuple(w[q] for q in between if q in above)
            first = w[lo]
            other = t if first == s else s
            swapped = tuple(other if i % 2 == 0 else first for i in range(m))
            yield w[:lo] + left + swapped + right + w[hi + 1:]


def _rewrite(labels, w: tuple[int, ...], orbit_cap: int, rng: random.Random | None = None):
    """Delete-and-restart orbit search over commutation classes.

    Returns a reduced word and the set of Foata forms of its orbit.
    """
    rules = _rules(labels)
    current = _free_cancel(w)
    while True:
        key = _foata(rules, current)
        seen = {key}
        queue = deque([key])
        shorter = None
        while queue:
            u = queue.popleft()
            pairs = _deletable_pairs(rules, u, first_only=rng is None)
            if pairs:
                i, j = pairs[0] if rng is None else rng.choice(pairs)
                shorter = _free_cancel(u[:i] + u[i + 1:j] + u[j + 1:])
                break
            nbrs = [_foata(rules, v) for v in _braid_neighbours(rules, u)]
            if rng is not None:
                rng.shuffle(nbrs)
            for v in nbrs:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
            if len(seen) > orbit_cap:
                raise OrbitCapExceeded(f"braid orbit exceeded {orbit_cap} commutation classes")
        if shorter is None:
            return current, seen
        current = shorter


def _reduce_idx(M: CoxeterMatrix, w: tuple[int, ...], orbit_cap: int = DEFAULT_ORBIT_CAP) -> tuple[int, ...]:
    _, orbit = _rewrite(M.labels, w, orbit_cap)
    rules = _rules(M.labels)
    return min(_lex_normal(rules, u) for u in orbit)


def _reduced_any(M: CoxeterMatrix, w: tuple[int, ...], orbit_cap: int = DEFAULT_ORBIT_CAP) -> tuple[int, ...]:
    """Some reduced word for ``w``; cheaper than the canonical one."""
    return _rewrite(M.labels, w, orbit_cap)[0]


def reduce(M: CoxeterMatrix, w: Iterable[str], word_cap: int | None = DEFAULT_WORD_CAP,
           orbit_cap: int = DEFAULT_ORBIT_CAP) -> ReducedWord:
    """Canonical reduced word of the element represented by ``w``.

    >>> from coxrigid.diagram import parse_diagram
    >>> M = parse_diagram("vertices: s t\\nedge s t 2")
    >>> reduce(M, ("t", "s")).letters
    ('s', 't')
    """
    enc = _encode(M, w, word_cap)
    return ReducedWord(_decode(M, _reduce_idx(M, enc, orbit_cap)))


def rewrite_randomly(M: CoxeterMatrix, w: Iterable[str], rng: random.Random,
                     orbit_cap: int = DEFAULT_ORBIT_CAP) -> Word:
    """A reduced word for ``w`` reached by a randomized rewriting order (not canonical)."""
    start, _ = _rewrite(M.labels, _encode(M, w, None), orbit_cap, rng)
    return _decode(M, start)


def words_equal(M: CoxeterMatrix, w1: Iterable[str], w2: Iterable[str],
                word_cap: int | None = DEFAULT_WORD_CAP, orbit_cap: int = DEFAULT_ORBIT_CAP) -> bool:
    w1, w2 = tuple(w1), tuple(w2)
    for w in (w1, w2):
        _encode(M, w, word_cap)
    return len(reduce(M, w1 + w2[::-1], None, orbit_cap)) == 0


def length(M: CoxeterMatrix, w: Iterable[str], word_cap: int | None = DEFAULT_WORD_CAP,
           orbit_cap: int = DEFAULT_ORBIT_CAP) -> int:
    return len(reduce(M, w, word_cap, orbit_cap))


def support(M: CoxeterMatrix, w: Iterable[str], word_cap: int | None = DEFAULT_WORD_CAP,
            orbit_cap: int = DEFAULT_ORBIT_CAP) -> frozenset[str]:
    # braid moves and the orbit both preserve the letter set of a reduced word
    return frozenset(reduce(M, w, word_cap, orbit_cap).letters)


def in_parabolic(M: CoxeterMatrix, w: Iterable[str], T: Iterable[str],
                 word_cap: int | None = DEFAULT_WORD_CAP, orbit_cap: int = DEFAULT_ORBIT_CAP) -> bool:
    return support(M, w, word_cap, orbit_cap) <= frozenset(T)


def left_descents(M: CoxeterMatrix, w: Iterable[str], word_cap: int | None = DEFAULT_WORD_CAP,
                  orbit_cap: int = DEFAULT_ORBIT_CAP) -> frozenset[str]:
    enc = _encode(M, w, word_cap)
    base = _reduce_idx(M, enc, orbit_cap)
    n = len(base)
    return frozenset(
        M.generators[t]
        for t in range(M.rank)
        if len(_reduce_idx(M, (t,) + base, orbit_cap)) < n
    )


def element_order(M: CoxeterMatrix, w: Iterable[str], cap: int,
                  word_cap: int | None = DEFAULT_WORD_CAP, orbit_cap: int = DEFAULT_ORBIT_CAP) -> int | None:
    """Least n <= cap with w^n = 1, or None when the order exceeds ``cap``.

    Only ``w`` is held to ``word_cap``; its powers are built incrementally
    from reduced forms and may be longer.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    enc = _encode(M, w, word_cap)
    power = ()
    for n in range(1, cap + 1):
        power = _reduced_any(M, power + enc, orbit_cap)
        if not power:
            return n
    return None


def conjugate(M: CoxeterMatrix, x: Iterable[str], w: Iterable[str],
              word_cap: int | None = DEFAULT_WORD_CAP, orbit_cap: int = DEFAULT_ORBIT_CAP) -> Word:
    """Reduced form of x w x^-1 (letters are involutions, so x^-1 is x reversed)."""
    x, w = tuple(x), tuple(w)
    for u in (x, w):
        _encode(M, u, word_cap)
    return reduce(M, x + w + x[::-1], None, orbit_cap).letters
