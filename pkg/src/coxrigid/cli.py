"""Command-line front end.

Exit codes: 0 ok / condition satisfied, 1 negative result, 2 input error,
3 cap exceeded.  Every cap is a flag and can also be set through an
environment variable ``COXRIGID_<FLAG>`` (for example ``COXRIGID_ORDER_CUTOFF``).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from itertools import combinations

from . import diagram, enumeration, rigidity, spherical, words
from .diagram import INF, DiagramError, format_label
from .enumeration import CapExceeded
from .words import OrbitCapExceeded, WordError

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get("COXRIGID_" + name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"COXRIGID_{name} must be an integer, got {raw!r}") from None


def _jsonable(x):
    if isinstance(x, float) and x == INF:
        return "inf"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    return x


def _load(path: str, args) -> diagram.CoxeterMatrix:
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        return diagram.parse_diagram(text, rank_cap=args.rank_cap, label_cap=args.label_cap)
    except DiagramError as e:
        raise InputError(f"{path}: {e}") from None


def _matrix_doc(M: diagram.CoxeterMatrix) -> dict:
    return {
        "generators": list(M.generators),
        "edges": [[u, v, m] for u, v, m in M.edges()],
        "diagram": diagram.render_diagram(M),
    }


def _indent(text: str, pad: str = "  ") -> str:
    return "\n".join(pad + line for line in text.splitlines())


# ---------------------------------------------------------------------------


def cmd_analyze(args) -> tuple[dict, str, int]:
    M = _load(args.path, args)
    family = spherical.maximal_spherical_subsets(M)
    types = spherical.classify_finite_type(M, M.generators)
    order = spherical.spherical_order(M, M.generators)
    report = rigidity.check_conditions(M)
    doc = {
        "matrix": _matrix_doc(M),
        "odd_components": [list(b) for b in diagram.odd_components(M)],
        "maximal_spherical": [sorted(T) for T in family],
        "finite": types is not None,
        "order": order,
        "finite_types": None if types is None else [str(t) for t in types],
        "conditions": {
            "cond0": report.cond0, "cond1": report.cond1,
            "cond2": report.cond2, "cond3": report.cond3,
            "cond0bar": report.cond0bar,
            "right_angled": report.right_angled,
            "radcliffe_even": report.radcliffe_even,
            "reflection_rigid": report.reflection_rigid,
            "verdict": report.verdict,
            "witnesses": {
                "cond0": report.cond0_witness, "cond1": report.cond1_witness,
                "cond2": report.cond2_witness, "cond3": report.cond3_witness,
                "cond0bar": report.cond0bar_witness,
            },
        },
        "census": None,
    }
    lines = [f"diagram {args.path}", _indent(diagram.render_diagram(M))]
    lines.append("odd components: " + " | ".join(" ".join(b) for b in diagram.odd_components(M)))
    lines.append("maximal spherical subsets: " + ", ".join("{" + " ".join(sorted(T)) + "}" for T in family))
    if types is None:
        lines.append("group: infinite")
    else:
        lines.append(f"group: finite, order {order}, type " + " x ".join(str(t) for t in types))
    for k in ("cond0", "cond1", "cond2", "cond3"):
        val = getattr(report, k)
        wit = getattr(report, k + "_witness")
        lines.append(f"{k}: {'yes' if val else 'no'}" + ("" if wit is None else f"  witness {_jsonable(wit)}"))
    lines.append(f"right-angled: {'yes' if report.right_angled else 'no'}; "
                 f"labels in {{2}} u 4N: {'yes' if report.radcliffe_even else 'no'}")
    lines.append(f"verdict: {report.verdict}")

    if args.census:
        if types is None:
            lines.append("census: skipped, the group is infinite")
        else:
            if order > args.cap:
                raise CapExceeded(f"group order {order} exceeds cap {args.cap}")
            G = enumeration.build_group(M, cap=max(args.cap, enumeration.DEFAULT_GROUP_CAP))
            res = rigidity.census(G, cap=args.cap)
            doc["census"] = {
                "order": G.order,
                "involutions": len(enumeration.involutions(G)),
                "total": res.total,
                "rigid": res.rigid,
                "classes": [{"diagram": diagram.render_diagram(m), "count": k} for m, k in res.classes],
            }
            lines.append(f"census: {res.total} Coxeter generating sets in {len(res.classes)} "
                         f"class{'es' if len(res.classes) != 1 else ''}; "
                         + ("rigid" if res.rigid else "not rigid"))
            for m, k in res.classes:
                lines.append(f"  class of {k}:")
                lines.append(_indent(diagram.render_diagram(m), "    "))
    return doc, "\n".join(lines), EXIT_OK


def cmd_compare(args) -> tuple[dict, str, int]:
    M1, M2 = _load(args.path1, args), _load(args.path2, args)
    psi = diagram.diagram_isomorphism(M1, M2)
    doc = {"isomorphic": psi is not None, "bijection": psi}
    if psi is None:
        return doc, "not isomorphic", EXIT_NEGATIVE
    text = "isomorphic\n" + "\n".join(f"  {s} -> {t}" for s, t in psi.items())
    return doc, text, EXIT_OK


def _word_arg(M, tokens) -> tuple[str, ...]:
    try:
        return words.parse_word(M, " ".join(tokens))
    except WordError as e:
        raise InputError(str(e)) from None


def cmd_reduce(args) -> tuple[dict, str, int]:
    M = _load(args.path, args)
    w = _word_arg(M, args.word)
    try:
        r = words.reduce(M, w, word_cap=args.word_cap, orbit_cap=args.orbit_cap)
    except WordError as e:
        raise InputError(str(e)) from None
    doc = {"input": words.format_word(w), "reduced": str(r), "length": len(r)}
    return doc, f"{r}\nlength {len(r)}", EXIT_OK


def cmd_order(args) -> tuple[dict, str, int]:
    M = _load(args.path, args)
    if not args.word:
        order = spherical.spherical_order(M, M.generators)
        types = spherical.classify_finite_type(M, M.generators)
        doc = {"group_order": order, "finite_types": None if types is None else [str(t) for t in types]}
        text = "group order inf" if types is None else f"group order {order} (" + " x ".join(map(str, types)) + ")"
        return doc, text, EXIT_OK
    w = _word_arg(M, args.word)
    try:
        o = words.element_order(M, w, args.order_cutoff, word_cap=args.word_cap, orbit_cap=args.orbit_cap)
    except WordError as e:
        raise InputError(str(e)) from None
    doc = {"word": words.format_word(w), "order": o, "cutoff": args.order_cutoff}
    if o is None:
        return doc, f"order exceeds {args.order_cutoff}", EXIT_NEGATIVE
    return doc, f"order {o}", EXIT_OK


def cmd_twist_search(args) -> tuple[dict, str, int]:
    M, T = _load(args.path, args), _load(args.target, args)
    if M.rank != T.rank:
        raise InputError("source and target diagrams have different ranks")
    res = rigidity.twist_search(M, T, conj_len_cap=args.conj_len, order_cap=args.order_cutoff,
                                orbit_cap=min(args.orbit_cap, rigidity.DEFAULT_TWIST_ORBIT_CAP)
                                if args.orbit_cap_default else args.orbit_cap)
    wdocs = []
    lines = [f"{res.candidates_checked} candidate generating sets checked"
             + ("" if res.complete else f" (incomplete: {res.note})")]
    for w in res.witnesses:
        wdocs.append({
            "conjugated": w.conjugated,
            "conjugator": words.format_word(w.conjugator),
            "elements": [words.format_word(e) for e in w.elements],
            "labels": [[a, b, m] for (a, b), m in w.derived_labels.items()],
            "bijection_to_target": w.bijection,
            "expressions": {k: list(v) for k, v in w.expressions.items()},
            "heuristic_inf": w.heuristic_inf,
        })
        head = "identity witness" if w.conjugated is None else \
            f"conjugate {w.conjugated} by {words.format_word(w.conjugator)}"
        lines.append(head + (" [heuristic-inf]" if w.heuristic_inf else ""))
        lines.append("  generators: " + ", ".join(words.format_word(e) for e in w.elements))
        finite = [f"{a}-{b}:{m}" for (a, b), m in w.derived_labels.items() if m != INF]
        lines.append("  finite labels: " + " ".join(finite))
    if not res.witnesses:
        lines.append("no witness found")
    doc = {"candidates_checked": res.candidates_checked, "complete": res.complete,
           "undetermined": res.undetermined, "note": res.note, "witnesses": wdocs}
    return doc, "\n".join(lines), EXIT_OK if res.witnesses else EXIT_NEGATIVE


def cmd_properties(args) -> tuple[dict, str, int]:
    """Randomized checks of the word engine on one diagram."""
    M = _load(args.path, args)
    rng = random.Random(args.seed)
    counts = dict.fromkeys(("idempotence", "parity", "support", "descents_spherical", "exchange"), 0)
    for _ in range(args.samples):
        w = tuple(rng.choice(M.generators) for _ in range(rng.randint(0, args.max_len)))
        r = words.reduce(M, w, word_cap=None, orbit_cap=args.orbit_cap).letters
        if words.reduce(M, r, word_cap=None, orbit_cap=args.orbit_cap).letters != r:
            counts["idempotence"] += 1
        if (len(w) - len(r)) % 2:
            counts["parity"] += 1
        if set(words.rewrite_randomly(M, w, rng, args.orbit_cap)) != set(r):
            counts["support"] += 1
        desc = words.left_descents(M, r, word_cap=None, orbit_cap=args.orbit_cap)
        if not spherical.is_spherical(M, desc):
            counts["descents_spherical"] += 1
        for s in desc:
            if words.length(M, (s,) + r, word_cap=None) != len(r) - 1:
                counts["exchange"] += 1
    order_violations = []
    for s, t in combinations(M.generators, 2):
        m = M.m(s, t)
        if m != INF and words.element_order(M, (s, t), m + 1) != m:
            order_violations.append([s, t])
    ok = not any(counts.values()) and not order_violations
    doc = {"samples": args.samples, "seed": args.seed, "violations": counts,
           "order_violations": order_violations, "ok": ok}
    text = "\n".join([f"{k}: {v} violations" for k, v in counts.items()]
                     + [f"element_order(st) = m(s,t): {len(order_violations)} violations",
                        "ok" if ok else "FAILED"])
    return doc, text, EXIT_OK if ok else EXIT_NEGATIVE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument("--rank-cap", type=int, default=None)
    common.add_argument("--label-cap", type=int, default=None)
    common.add_argument("--word-cap", type=int, default=None)
    common.add_argument("--orbit-cap", type=int, default=None)

    p = argparse.ArgumentParser(prog="coxrigid", description="Rigidity checks for Coxeter systems.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="conditions, spherical family, optional census")
    a.add_argument("path")
    a.add_argument("--census", action="store_true")
    a.add_argument("--cap", type=int, default=None, help="census group-order cap")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("bruteforce", parents=[common], help="analyze --census")
    b.add_argument("path")
    b.add_argument("--cap", type=int, default=None)
    b.set_defaults(func=cmd_analyze, census=True)

    c = sub.add_parser("compare", parents=[common], help="diagram isomorphism")
    c.add_argument("path1")
    c.add_argument("path2")
    c.set_defaults(func=cmd_compare)

    r = sub.add_parser("reduce", parents=[common], help="canonical reduced word")
    r.add_argument("path")
    r.add_argument("word", nargs="+")
    r.set_defaults(func=cmd_reduce)

    o = sub.add_parser("order", parents=[common], help="group order, or element order of WORD")
    o.add_argument("path")
    o.add_argument("word", nargs="*")
    o.add_argument("--order-cutoff", type=int, default=None)
    o.set_defaults(func=cmd_order)

    t = sub.add_parser("twist-search", parents=[common], help="bounded search for a twisted generating set")
    t.add_argument("path")
    t.add_argument("target")
    t.add_argument("--conj-len", type=int, default=None)
    t.add_argument("--order-cutoff", type=int, default=None)
    t.set_defaults(func=cmd_twist_search)

    q = sub.add_parser("properties", parents=[common], help="randomized word-engine property checks")
    q.add_argument("path")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--samples", type=int, default=1000)
    q.add_argument("--max-len", type=int, default=10)
    q.set_defaults(func=cmd_properties)
    return p


def _resolve_caps(args) -> None:
    defaults = {
        "rank_cap": ("RANK_CAP", diagram.DEFAULT_RANK_CAP),
        "label_cap": ("LABEL_CAP", diagram.DEFAULT_LABEL_CAP),
        "word_cap": ("WORD_CAP", words.DEFAULT_WORD_CAP),
        "cap": ("CAP", rigidity.DEFAULT_CENSUS_CAP),
        "order_cutoff": ("ORDER_CUTOFF", rigidity.DEFAULT_ORDER_CUTOFF),
        "conj_len": ("CONJ_LEN", rigidity.DEFAULT_CONJ_LEN),
    }
    for attr, (env, default) in defaults.items():
        if getattr(args, attr, None) is None:
            setattr(args, attr, _env_int(env, default))
    # twist-search uses a smaller orbit cap unless one is given explicitly
    args.orbit_cap_default = args.orbit_cap is None and "COXRIGID_ORBIT_CAP" not in os.environ
    if args.orbit_cap is None:
        args.orbit_cap = _env_int("ORBIT_CAP", words.DEFAULT_ORBIT_CAP)
    for attr in ("rank_cap", "label_cap", "word_cap", "orbit_cap", "cap", "order_cutoff"):
        if getattr(args, attr, 1) < 1:
            raise InputError(f"--{attr.replace('_', '-')} must be positive")
    if getattr(args, "conj_len", 0) < 0:
        raise InputError("--conj-len must be non-negative")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _resolve_caps(args)
        doc, text, code = args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (CapExceeded, OrbitCapExceeded) as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    doc = dict(doc, exit_status=code)
    if args.json:
        print(json.dumps(_jsonable(doc), indent=2))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
