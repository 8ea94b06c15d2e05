"""Rigidity conditions on Coxeter diagrams and brute-force checks of rigidity.

``check_conditions`` evaluates the four conditions of the rigidity criterion
(even labels are 2; odd pairs are maximal spherical; no vertex
with two odd neighbours; each odd pair meets at most two maximal spherical
subsets) together with the labels of the neighbouring known classes.

``census`` enumerates every Coxeter generating set of a small finite group
and sorts them into diagram-isomorphism classes.  ``twist_search`` looks for
alternative generating sets of an infinite group by conjugating one
generator at a time.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .diagram import INF, CoxeterMatrix, diagram_isomorphism, is_label_preserving
from .enumeration import CapExceeded, GroupTable, involutions
from .spherical import maximal_spherical_subsets, spherical_order
from .words import DEFAULT_ORBIT_CAP, OrbitCapExceeded, _reduce_idx, _reduced_any

log = logging.getLogger(__name__)

DEFAULT_CENSUS_CAP = 2000
DEFAULT_CONJ_LEN = 4
DEFAULT_ORDER_CUTOFF = 50
EXPRESS_DEPTH = 6
# orbit cap used inside twist_search, where long powers are routine
DEFAULT_TWIST_ORBIT_CAP = 5000

RIGID_1_3 = "rigid_by_thm_1_3"
RIGID_1_4 = "rigid_by_thm_1_4"
RIGID_4_2 = "rigid_by_thm_4_2"
REFLECTION_RIGID = "reflection_rigid_by_thm_4_1"
OPEN_PROBLEM = "open_problem_class"
UNKNOWN = "unknown"


def _is_odd(m) -> bool:
    return m != INF and m % 2 == 1


def _is_radcliffe_label(m) -> bool:
    return m == INF or m == 2 or m % 4 == 0


@dataclass
class ConditionReport:
    cond0: bool
    cond1: bool
    cond2: bool
    cond3: bool
    cond0bar: bool
    right_angled: bool
    radcliffe_even: bool
    reflection_rigid: bool
    verdict: str
    # one witness per failing condition
    cond0_witness: tuple | None = None  # (s, t, m)
    cond1_witness: tuple | None = None  # (s, t, spherical superset)
    cond2_witness: tuple | None = None  # (s, t, u) with t in the middle
    cond3_witness: tuple | None = None  # (s, t, members meeting {s, t})
    cond0bar_witness: tuple | None = None

    @property
    def all_conditions(self) -> bool:
        return self.cond0 and self.cond1 and self.cond2 and self.cond3


def check_conditions(M: CoxeterMatrix) -> ConditionReport:
    gens = M.generators
    pairs = list(combinations(gens, 2))
    family = maximal_spherical_subsets(M)

    w0 = w0bar = w1 = w2 = w3 = None
    for s, t in pairs:
        m = M.m(s, t)
        if m != INF and m % 2 == 0 and m != 2 and w0 is None:
            w0 = (s, t, m)
        if m != INF and m % 2 == 0 and not _is_radcliffe_label(m) and w0bar is None:
            w0bar = (s, t, m)
    odd_pairs = [(s, t) for s, t in pairs if _is_odd(M.m(s, t))]
    for s, t in odd_pairs:
        if w1 is None and frozenset((s, t)) not in family:
            sup = next(T for T in family if {s, t} <= T)
            w1 = (s, t, tuple(sorted(sup)))
        meeting = [T for T in family if T & {s, t}]
        if w3 is None and len(meeting) > 2:
            w3 = (s, t, tuple(tuple(sorted(T)) for T in meeting))
    for t in gens:
        odd_nbrs = [u for u in gens if u != t and _is_odd(M.m(t, u))]
        if len(odd_nbrs) >= 2:
            w2 = (odd_nbrs[0], t, odd_nbrs[1])
            break

    c0, c1, c2, c3 = w0 is None, w1 is None, w2 is None, w3 is None
    c0bar = w0bar is None
    right_angled = all(M.m(s, t) in (2, INF) for s, t in pairs)
    radcliffe = all(_is_radcliffe_label(M.m(s, t)) for s, t in pairs)
    refl = c1 and c2 and c3
    if right_angled:
        verdict = RIGID_1_3
    elif c0 and refl:
        verdict = RIGID_1_4
    elif radcliffe:
        verdict = RIGID_4_2
    elif c0bar and refl:
        verdict = OPEN_PROBLEM
    elif refl:
        verdict = REFLECTION_RIGID
    else:
        verdict = UNKNOWN
    return ConditionReport(c0, c1, c2, c3, c0bar, right_angled, radcliffe, refl, verdict,
                           w0, w1, w2, w3, w0bar)


def witness_is_valid(M: CoxeterMatrix, report: ConditionReport) -> bool:
    """Re-check that every witness in ``report`` really violates its condition."""
    family = maximal_spherical_subsets(M)
    ok = True
    if report.cond0_witness:
        s, t, m = report.cond0_witness
        ok &= M.m(s, t) == m and m % 2 == 0 and m != 2
    if report.cond0bar_witness:
        s, t, m = report.cond0bar_witness
        ok &= M.m(s, t) == m and not _is_radcliffe_label(m)
    if report.cond1_witness:
        s, t, sup = report.cond1_witness
        ok &= _is_odd(M.m(s, t)) and frozenset((s, t)) not in family
        ok &= {s, t} < set(sup) and frozenset(sup) in family
    if report.cond2_witness:
        s, t, u = report.cond2_witness
        ok &= len({s, t, u}) == 3 and _is_odd(M.m(s, t)) and _is_odd(M.m(t, u))
    if report.cond3_witness:
        s, t, meeting = report.cond3_witness
        ok &= _is_odd(M.m(s, t)) and len(meeting) > 2
        ok &= all(frozenset(T) in family and set(T) & {s, t} for T in meeting)
    return bool(ok)


# ---------------------------------------------------------------------------
# census of Coxeter generating sets in a finite group


@dataclass
class GeneratingSetCandidate:
    elements: tuple[int, ...]
    derived_matrix: CoxeterMatrix
    accepted: bool


@dataclass
class CensusResult:
    classes: list[tuple[CoxeterMatrix, int]]
    total: int

    @property
    def rigid(self) -> bool:
        return len(self.classes) == 1


def _element_name(G: GroupTable, g: int) -> str:
    return "_".join(G.elt_words[g])


def derived_matrix(G: GroupTable, elements: Sequence[int]) -> CoxeterMatrix:
    """Coxeter matrix of orders of pairwise products, named by element words."""
    orders = G.element_orders()
    names = [_element_name(G, g) for g in elements]
    edges = [(names[i], names[j], int(orders[G.mult[elements[i], elements[j]]]))
             for i, j in combinations(range(len(elements)), 2)]
    return CoxeterMatrix.from_labels(names, edges)


def _check_census_cap(G: GroupTable, cap: int) -> None:
    if G.order > cap:
        raise CapExceeded(f"group order {G.order} exceeds census cap {cap}")


def enumerate_coxeter_generating_sets(G: GroupTable, cap: int = DEFAULT_CENSUS_CAP) -> list[GeneratingSetCandidate]:
    """All Coxeter generating sets of G, as sorted tuples of element indices.

    A set S' of involutions is accepted when it generates G and the finite
    Coxeter group on its product orders has order |G|; then the canonical
    surjection onto G is a bijection.  Depth-first over increasing index
    tuples: every subset of an accepted set spans a proper parabolic, which
    is spherical with order a proper divisor of |G|, so only such prefixes
    are extended.
    """
    _check_census_cap(G, cap)
    n = G.order
    invs = sorted(involutions(G))
    orders = G.element_orders()
    pair_order = {(a, b): int(orders[G.mult[a, b]]) for a in invs for b in invs if a < b}
    accepted: list[GeneratingSetCandidate] = []

    def order_of(chosen: list[int]) -> int | float:
        names = [str(k) for k in range(len(chosen))]
        edges = [(names[i], names[j], pair_order[chosen[i], chosen[j]])
                 for i, j in combinations(range(len(chosen)), 2)]
        return spherical_order(CoxeterMatrix.from_labels(names, edges), names)

    def extend(chosen: list[int], start: int) -> None:
        for k in range(start, len(invs)):
            cand = chosen + [invs[k]]
            o = order_of(cand)
            if o == INF or n % o:
                continue
            if o == n:
                if len(G.closure(cand)) == n:
                    accepted.append(GeneratingSetCandidate(tuple(cand), derived_matrix(G, cand), True))
            else:
                extend(cand, k + 1)

    extend([], 0)
    accepted.sort(key=lambda c: (len(c.elements), c.elements))
    return accepted


def enumerate_coxeter_generating_sets_bruteforce(G: GroupTable, cap: int = DEFAULT_CENSUS_CAP) -> list[GeneratingSetCandidate]:
    """Literal search over every r-subset of involutions, r = 1..floor(log2 |G|)."""
    _check_census_cap(G, cap)
    invs = sorted(involutions(G))
    rmax = G.order.bit_length() - 1
    out = []
    for r in range(1, rmax + 1):
        for subset in combinations(invs, r):
            dm = derived_matrix(G, subset)
            if spherical_order(dm, dm.generators) == G.order and len(G.closure(subset)) == G.order:
                out.append(GeneratingSetCandidate(subset, dm, True))
    return out


def _label_invariant(M: CoxeterMatrix) -> tuple:
    return tuple(sorted(tuple(sorted(row, key=lambda x: (x == INF, x))) for row in M.labels))


def census(G: GroupTable, cap: int = DEFAULT_CENSUS_CAP,
           candidates: list[GeneratingSetCandidate] | None = None) -> CensusResult:
    """Accepted generating sets grouped by diagram isomorphism; first seen is the representative."""
    if candidates is None:
        candidates = enumerate_coxeter_generating_sets(G, cap)
    reps: list[list] = []  # [invariant, matrix, count]
    for c in candidates:
        inv = _label_invariant(c.derived_matrix)
        for entry in reps:
            if entry[0] == inv and diagram_isomorphism(entry[1], c.derived_matrix) is not None:
                entry[2] += 1
                break
        else:
            reps.append([inv, c.derived_matrix, 1])
    return CensusResult([(m, k) for _, m, k in reps], len(candidates))


def verify_candidate(G: GroupTable, cand: GeneratingSetCandidate) -> bool:
    """Independent re-check: relators hold in G and the elements generate G."""
    els = cand.elements
    names = cand.derived_matrix.generators
    # derived_matrix sorts generator names; map back by element word
    by_name = {_element_name(G, g): g for g in els}
    for s in names:
        for t in names:
            m = cand.derived_matrix.m(s, t)
            g = 0
            for _ in range(m):
                g = int(G.mult[g, G.mult[by_name[s], by_name[t]]])
            if g != 0:
                return False
    return generates_bfs(G, els)


def generates_bfs(G: GroupTable, X: Iterable[int]) -> bool:
    # left multiplication, unlike GroupTable.closure
    X = list(X)
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for g in frontier:
            for x in X:
                h = int(G.mult[x, g])
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return len(seen) == G.order


# ---------------------------------------------------------------------------
# the bijection psi built from intersections of maximal spherical subsets


def _intersection_sizes(family: Sequence[frozenset], index_sets) -> list[int]:
    out = []
    for I in index_sets:
        inter = frozenset.intersection(*(family[i] for i in I))
        out.append(len(inter))
    return out


def spherical_intersection_bijection(M: CoxeterMatrix, M2: CoxeterMatrix,
                                     corr: Mapping[int, int], max_family: int = 20) -> dict[str, str] | None:
    """Bijection S -> S' with psi(intersection of T_i, i in I) = intersection of T'_corr(i).

    ``corr`` maps positions in ``maximal_spherical_subsets(M)`` to positions
    in ``maximal_spherical_subsets(M2)``.  Raises ``ValueError`` if either
    matrix fails the rigidity conditions or ``corr`` does not preserve the
    sizes of all intersections; returns None when no such bijection exists.
    """
    for X in (M, M2):
        if not check_conditions(X).all_conditions:
            raise ValueError(f"matrix does not satisfy conditions (0)-(3):\n{X}")
    fam1, fam2 = maximal_spherical_subsets(M), maximal_spherical_subsets(M2)
    if M.rank != M2.rank:
        log.info("psi: ranks differ (%d vs %d)", M.rank, M2.rank)
        return None
    if len(fam1) != len(fam2):
        log.info("psi: maximal families differ in size (%d vs %d)", len(fam1), len(fam2))
        return None
    n = len(fam1)
    if sorted(corr) != list(range(n)) or sorted(corr.values()) != list(range(n)):
        raise ValueError("corr must be a bijection between the two maximal families")
    if n > max_family:
        raise CapExceeded(f"maximal family of size {n} exceeds {max_family}")
    index_sets = [I for r in range(1, n + 1) for I in combinations(range(n), r)]
    if _intersection_sizes(fam1, index_sets) != _intersection_sizes(fam2, [[corr[i] for i in I] for I in index_sets]):
        raise ValueError("corr does not preserve intersection cardinalities")

    def signature(fam, g):
        return frozenset(i for i, T in enumerate(fam) if g in T)

    blocks1: dict[frozenset, list[str]] = {}
    for g in M.generators:
        blocks1.setdefault(frozenset(corr[i] for i in signature(fam1, g)), []).append(g)
    blocks2: dict[frozenset, list[str]] = {}
    for g in M2.generators:
        blocks2.setdefault(signature(fam2, g), []).append(g)
    if {k: len(v) for k, v in blocks1.items()} != {k: len(v) for k, v in blocks2.items()}:
        log.info("psi: membership signatures cannot be matched")
        return None
    psi = {}
    for sig, gs in blocks1.items():
        psi.update(zip(sorted(gs), sorted(blocks2[sig])))
    # odd pairs must go to odd pairs (intersection nonemptiness is preserved)
    for s, t in combinations(M.generators, 2):
        if _is_odd(M.m(s, t)) and not _is_odd(M2.m(psi[s], psi[t])):
            log.info("psi: odd pair %s %s not sent to an odd pair", s, t)
            return None
    if not is_label_preserving(M, M2, psi):
        log.info("psi: signature matching is not label preserving")
        return None
    return psi


def family_correspondence(M: CoxeterMatrix, M2: CoxeterMatrix, psi: Mapping[str, str]) -> dict[int, int]:
    """The correspondence between maximal families induced by a generator bijection."""
    fam1, fam2 = maximal_spherical_subsets(M), maximal_spherical_subsets(M2)
    pos2 = {T: i for i, T in enumerate(fam2)}
    return {i: pos2[frozenset(psi[g] for g in T)] for i, T in enumerate(fam1)}


# ---------------------------------------------------------------------------
# bounded twist search in possibly infinite groups


@dataclass
class TwistWitness:
    conjugated: str | None  # generator replaced, None for the untouched set
    conjugator: tuple[str, ...]
    elements: tuple[tuple[str, ...], ...]  # reduced words, aligned with M.generators
    derived_labels: dict[tuple[str, str], int | float]
    bijection: dict[str, str]  # original generator slot -> target generator
    expressions: dict[str, tuple[str, ...]]  # original generator -> slots multiplied
    heuristic_inf: bool


@dataclass
class TwistSearchResult:
    witnesses: list[TwistWitness] = field(default_factory=list)
    candidates_checked: int = 0
    undetermined: int = 0
    complete: bool = True
    note: str = ""


def _reduced_words_upto(M: CoxeterMatrix, max_len: int, orbit_cap: int) -> list[tuple[int, ...]]:
    """Canonical reduced words of all elements of length <= max_len, shortlex ordered."""
    ball = {(): None}
    layer = [()]
    for _ in range(max_len):
        nxt = set()
        for w in layer:
            for s in range(M.rank):
                u = _reduce_idx(M, w + (s,), orbit_cap)
                if len(u) == len(w) + 1 and u not in ball:
                    nxt.add(u)
        for u in nxt:
            ball[u] = None
        layer = sorted(nxt)
    return sorted(ball, key=lambda w: (len(w), w))


def twist_search(M: CoxeterMatrix, target: CoxeterMatrix, conj_len_cap: int = DEFAULT_CONJ_LEN,
                 order_cap: int = DEFAULT_ORDER_CUTOFF, orbit_cap: int = DEFAULT_TWIST_ORBIT_CAP,
                 express_depth: int = EXPRESS_DEPTH, max_witnesses: int | None = None) -> TwistSearchResult:
    """Search generating sets {s_1, ..., w s_j w^-1, ..., s_n} whose diagram is ``target``.

    Product orders above ``order_cap`` are taken to be infinite, so every
    witness with an infinite label carries ``heuristic_inf``.

    Orders are first computed only up to the largest finite label K of the
    target: a pair of order greater than K can match the target only as an
    infinite label, so the isomorphism test runs on these cheap labels and
    only the survivors have their presumed-infinite pairs pushed to
    ``order_cap``.  An order computation that exceeds ``orbit_cap`` leaves
    the candidate undetermined; it is skipped and the result marked
    incomplete.
    """
    if M.rank != target.rank:
        raise ValueError("source and target ranks differ")
    if conj_len_cap < 0 or order_cap < 1:
        raise ValueError("caps must be positive")
    finite = [m for _, _, m in target.edges()]
    quick_cap = min(max(finite, default=1), order_cap)
    result = TwistSearchResult()
    rules_cache: dict[tuple[tuple[int, ...], int], int | None] = {}

    def order_upto(word: tuple[int, ...], cap: int) -> int | None:
        key = (word, cap)
        if key not in rules_cache:
            rules_cache[key] = _order_idx(M, word, cap, orbit_cap)
        return rules_cache[key]

    conjugators = _reduced_words_upto(M, conj_len_cap, orbit_cap)
    n = M.rank
    names = M.generators
    originals = [(i,) for i in range(n)]
    tried: set[tuple] = set()
    for j, x in product(range(n), conjugators):
        try:
            new = _reduce_idx(M, x + (j,) + x[::-1], orbit_cap)
        except OrbitCapExceeded:
            result.undetermined += 1
            continue
        elems = list(originals)
        elems[j] = new
        key = tuple(elems)
        if len(set(key)) < n or key in tried:
            continue
        tried.add(key)
        result.candidates_checked += 1
        products = {(a, b): _reduce_idx(M, elems[a] + elems[b][::-1], orbit_cap)
                    for a, b in combinations(range(n), 2)}
        try:
            quick = {ab: order_upto(w, quick_cap) for ab, w in products.items()}
        except OrbitCapExceeded:
            result.undetermined += 1
            continue
        presumed = CoxeterMatrix.from_labels(
            names, [(names[a], names[b], m) for (a, b), m in quick.items() if m is not None])
        psi = diagram_isomorphism(presumed, target)
        if psi is None:
            continue
        try:
            certified = all(order_upto(products[ab], order_cap) is None
                            for ab, m in quick.items() if m is None)
        except OrbitCapExceeded:
            result.undetermined += 1
            continue
        if not certified:
            continue
        labels = {ab: INF if m is None else m for ab, m in quick.items()}
        expr = _express(M, elems, express_depth, orbit_cap)
        if expr is None:
            continue
        changed = new != (j,)
        result.witnesses.append(TwistWitness(
            conjugated=names[j] if changed else None,
            conjugator=tuple(names[k] for k in x) if changed else (),
            elements=tuple(tuple(names[k] for k in e) for e in elems),
            derived_labels={(names[a], names[b]): m for (a, b), m in labels.items()},
            bijection=psi,
            expressions={names[i]: tuple(names[k] for k in e) for i, e in expr.items()},
            heuristic_inf=any(m == INF for m in labels.values()),
        ))
        if max_witnesses is not None and len(result.witnesses) >= max_witnesses:
            result.complete = False
            result.note = f"stopped after {max_witnesses} witnesses"
            break
    if result.undetermined:
        result.complete = False
        result.note = result.note or f"{result.undetermined} candidates exceeded the orbit cap"
    return result


def _order_idx(M: CoxeterMatrix, word: tuple[int, ...], cap: int, orbit_cap: int) -> int | None:
    power: tuple[int, ...] = ()
    for k in range(1, cap + 1):
        power = _reduced_any(M, power + word, orbit_cap)
        if not power:
            return k
    return None


def _express(M: CoxeterMatrix, elems: list[tuple[int, ...]], depth: int,
             orbit_cap: int) -> dict[int, tuple[int, ...]] | None:
    """Write each original generator as a product of at most ``depth`` of ``elems``.

    Breadth-first over products, keyed by canonical reduced word; the value
    records which slots were multiplied.
    """
    wanted = {(i,): i for i in range(M.rank)}
    found: dict[int, tuple[int, ...]] = {}
    for k, e in enumerate(elems):
        if e in wanted:
            found[wanted[e]] = (k,)
    seen = {(): ()}
    frontier = [()]
    for _ in range(depth):
        if len(found) == M.rank:
            break
        nxt = []
        for g in frontier:
            for k, e in enumerate(elems):
                h = _reduce_idx(M, g + e, orbit_cap)
                if h in seen:
                    continue
                seen[h] = seen[g] + (k,)
                nxt.append(h)
                if h in wanted and wanted[h] not in found:
                    found[wanted[h]] = seen[h]
        frontier = nxt
    if len(found) < M.rank:
        return None
    return dict(sorted(found.items()))
