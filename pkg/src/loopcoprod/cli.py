"""Command-line front end.

Exit codes: 0 success, 1 a ``check`` found a violated identity, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from itertools import product
from typing import Callable, Sequence

from .algebra import (
    LaurentClass,
    LoopClass,
    SpaceSpec,
    parse_element,
)
from .coproduct import (
    CircleVariant,
    WitnessOutcome,
    check_pi1_invariance,
    check_sullivan,
    check_sullivan_circle,
    coproduct,
    coproduct_circle,
    coproduct_witness,
    infinite_pi1_rule,
)
from .groups import FiniteGroup, build_group, centralizer, conjugacy_classes
from .homology import group_homology, quotient_space_homology
from .loopspace import dumps as dump_table
from .loopspace import full_table
from .maps import (
    COVERING,
    SPHERE_SELF_MAP,
    coproduct_via_f,
    coproduct_via_universal_cover,
    covering_map,
    map_from_dict,
    pushforward,
    sphere_self_map,
)

PROG = "loopcoprod"


class CheckFailed(Exception):
    def __init__(self, message: str, replay: list[str]):
        super().__init__(message)
        self.replay = replay


class Output:
    """Collects either a JSON document or markdown lines."""

    def __init__(self, fmt: str):
        self.fmt = fmt

    def emit(self, doc: dict, md: str) -> str:
        if self.fmt == "json":
            return json.dumps(doc, indent=2, sort_keys=True) + "\n"
        return md if md.endswith("\n") else md + "\n"


def _space(args) -> SpaceSpec:
    return SpaceSpec(args.n, build_group(args.group))


def _replay(*parts: str) -> str:
    return " ".join([PROG, *(shlex.quote(p) for p in parts)])


# -- verbs --------------------------------------------------------------------


def cmd_group(args, out: Output) -> str:
    G = build_group(args.group)
    classes = conjugacy_classes(G)
    rows = []
    for c in classes:
        rows.append(
            {
                "representative": c.representative,
                "members": list(c.members),
                "element_order": G.element_order(c.representative),
                "centralizer_order": centralizer(G, c.representative).order,
            }
        )
    doc = {"name": G.name, "order": G.order, "abelian": G.is_abelian(), "classes": rows}
    md = [f"# {G.name} (order {G.order})", "", "| rep | members | element order | centralizer |", "|---|---|---|---|"]
    for r in rows:
        members = ", ".join(f"g{m}" for m in r["members"])
        md.append(f"| g{r['representative']} | {members} | {r['element_order']} | {r['centralizer_order']} |")
    if args.table:
        doc["table"] = [list(row) for row in G.table]
        md += ["", "```"] + [" ".join(str(v) for v in row) for row in G.table] + ["```"]
    return out.emit(doc, "\n".join(md))


def _tensor_doc(a, t) -> dict:
    return {"input": a.to_json(), "coproduct": t.to_json()}


def cmd_coproduct(args, out: Output) -> str:
    if args.infinite_pi1:
        t = infinite_pi1_rule(args.n)
        return out.emit({"infinite_pi1": True, "n": args.n, "coproduct": t.to_json()}, "v(a) = 0 (infinite fundamental group)")
    if args.element is None:
        raise ValueError("--element is required")
    space = _space(args)
    a = parse_element(args.element, space)
    t = coproduct(a)
    return out.emit({"space": str(space), **_tensor_doc(a, t)}, f"v({a}) = {t}")


def cmd_circle(args, out: Output) -> str:
    variant = CircleVariant.parse(args.variant)
    a = parse_element(args.element)
    t = coproduct_circle(variant, a)
    return out.emit({"variant": variant.value, **_tensor_doc(a, t)}, f"{variant.cli_name}({a}) = {t}")


def _monomials(G: FiniteGroup, max_k: int):
    return [(g, k) for k in range(max_k + 1) for g in G.elements]


def _pairs_or_one(args, space: SpaceSpec, names=("a", "b")) -> list[tuple]:
    given = [getattr(args, nm) for nm in names]
    if all(v is not None for v in given):
        return [tuple(parse_element(v, space) for v in given)]
    if any(v is not None for v in given):
        raise ValueError(f"give all of {', '.join('--' + n for n in names)} or none")
    monos = [LoopClass.monomial(space, g, k) for g, k in _monomials(space.group, args.max_k)]
    if len(names) == 1:
        return [(m,) for m in monos]
    return list(product(monos, repeat=2))


def _base(args) -> list[str]:
    return ["--group", args.group, "--n", str(args.n)]


def check_sullivan_verb(args) -> dict:
    space = _space(args)
    count = 0
    for a, b in _pairs_or_one(args, space):
        report = check_sullivan(a, b)
        count += 1
        if not report.holds:
            raise CheckFailed(
                f"Sullivan relation fails for a = {a}, b = {b}: defect {report.defect}",
                ["check", "sullivan", *_base(args), "--a", str(a), "--b", str(b)],
            )
    return {"identity": "sullivan", "space": str(space), "cases": count}


def check_pi1_verb(args) -> dict:
    space = _space(args)
    count = 0
    for (a,) in _pairs_or_one(args, space, ("element",)):
        report = check_pi1_invariance(a)
        count += 1
        if not report.holds:
            raise CheckFailed(
                f"coproduct of {a} is not fixed by g{report.failing_tau}",
                ["check", "pi1", *_base(args), "--element", str(a)],
            )
    return {"identity": "pi1", "space": str(space), "cases": count}


def check_cover_verb(args) -> dict:
    space = _space(args)
    count = 0
    for (a,) in _pairs_or_one(args, space, ("element",)):
        count += 1
        if coproduct_via_universal_cover(space, a) != coproduct(a):
            raise CheckFailed(
                f"universal-cover assembly differs from the coproduct on {a}",
                ["check", "cover", *_base(args), "--element", str(a)],
            )
    return {"identity": "cover", "space": str(space), "cases": count}


def check_degree_verb(args) -> dict:
    degrees = [args.degree] if args.degree is not None else list(range(-3, 4))
    count = 0
    for d in degrees:
        m = sphere_self_map(args.n, d)
        for k in range(args.max_k + 1):
            a = LoopClass.monomial(m.source, 0, k)
            count += 1
            if coproduct(pushforward(m, a)) != coproduct_via_f(m, a):
                raise CheckFailed(
                    f"degree-{d} identity fails on u^{k}",
                    ["check", "degree", "--n", str(args.n), "--degree", str(d), "--max-k", str(k)],
                )
    return {"identity": "degree", "n": args.n, "cases": count}


def check_covering_verb(args) -> dict:
    space = _space(args)
    m = covering_map(space)
    count = 0
    for k in range(args.max_k + 1):
        a = LoopClass.monomial(m.source, 0, k)
        count += 1
        if coproduct_via_f(m, a) != coproduct(pushforward(m, a)):
            raise CheckFailed(
                f"covering identity fails on u^{k}",
                ["check", "covering", *_base(args), "--max-k", str(k)],
            )
    return {"identity": "covering", "space": str(space), "cases": count}


def check_witness_verb(args) -> dict:
    space = _space(args)
    found = []
    for g in space.group.elements:
        for k in range(1, args.max_k + 1):
            r = coproduct_witness(space, g, k)
            if r.outcome is WitnessOutcome.NONE_FOUND:
                raise CheckFailed(
                    f"no witness for g{g}*x^{k}",
                    ["check", "witness", *_base(args), "--max-k", str(k)],
                )
            if r.outcome is WitnessOutcome.EXCEPTIONAL:
                found.append({"g": g, "k": k})
    return {"identity": "witness", "space": str(space), "exceptional": found}


def check_circle_verb(args) -> dict:
    variant = CircleVariant.parse(args.variant)
    if args.a is not None and args.b is not None:
        pairs = [(parse_element(args.a), parse_element(args.b))]
    else:
        r = range(-args.max_k, args.max_k + 1)
        # smallest exponents first so the reported counterexample is minimal
        exps = sorted(product(r, r), key=lambda ij: (abs(ij[0]) + abs(ij[1]), ij))
        pairs = [(LaurentClass.monomial(i), LaurentClass.monomial(j)) for i, j in exps]
    for a, b in pairs:
        report = check_sullivan_circle(variant, a, b)
        if not report.holds:
            raise CheckFailed(
                f"{variant.cli_name} violates the Sullivan relation at a = {a}, b = {b}: defect {report.defect}",
                ["check", "circle", "--variant", variant.cli_name, "--a", str(a), "--b", str(b)],
            )
    return {"identity": "circle", "variant": variant.value, "cases": len(pairs)}


CHECKS: dict[str, Callable] = {
    "sullivan": check_sullivan_verb,
    "pi1": check_pi1_verb,
    "cover": check_cover_verb,
    "covering": check_covering_verb,
    "degree": check_degree_verb,
    "witness": check_witness_verb,
    "circle": check_circle_verb,
}


def cmd_check(args, out: Output) -> str:
    doc = CHECKS[args.identity](args)
    doc["holds"] = True
    detail = ", ".join(f"{k}={v}" for k, v in sorted(doc.items()) if k not in ("holds", "identity"))
    return out.emit(doc, f"{args.identity}: holds ({detail})")


def cmd_pushforward(args, out: Output) -> str:
    if args.map_file:
        with open(args.map_file) as fh:
            doc = json.load(fh)
        target = build_group(doc["target_group"]) if doc.get("kind") == COVERING else None
        m = map_from_dict(doc, target)
    elif args.kind == COVERING:
        m = covering_map(_space(args))
    elif args.kind == SPHERE_SELF_MAP:
        if args.degree is None:
            raise ValueError("sphere_self_map needs --degree")
        m = sphere_self_map(args.n, args.degree)
    else:
        raise ValueError("give --kind or --map-file")
    a = parse_element(args.element, m.source)
    image = pushforward(m, a)
    via_f = coproduct_via_f(m, a)
    direct = coproduct(image)
    doc = {
        "kind": m.kind,
        "source": str(m.source),
        "target": str(m.target),
        "input": a.to_json(),
        "image": image.to_json(),
        "coproduct_of_image": direct.to_json(),
        "preimage_formula": via_f.to_json(),
        "agree": via_f == direct,
    }
    md = "\n".join(
        [
            f"f_*({a}) = {image}",
            f"v(f_* a) = {direct}",
            f"preimage formula = {via_f}",
            f"agree: {'yes' if via_f == direct else 'no'}",
        ]
    )
    return out.emit(doc, md)


def cmd_homology(args, out: Output) -> str:
    G = build_group(args.group)
    if args.n is not None:
        H = quotient_space_homology(args.n, G)
        title = f"H_*(S^{args.n}/{G.name})"
    else:
        H = group_homology(G, args.max_degree)
        title = f"H_*({G.name}; Z)"
    md = [f"# {title}", "", "| degree | group |", "|---|---|"]
    md += [f"| {d} | {g.render(primary=args.primary)} |" for d, g in enumerate(H)]
    return out.emit({"title": title, "homology": H.to_json()}, "\n".join(md))


def cmd_loopspace(args, out: Output) -> str:
    table = full_table(_space(args), args.max_degree)
    return dump_table(table) if out.fmt == "json" else table.to_markdown()


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["md", "json"], default="md")

    p = argparse.ArgumentParser(prog=PROG, description="Loop-space coproducts on spherical space forms.")
    sub = p.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("group", parents=[common], help="conjugacy classes and centralizers")
    g.add_argument("--group", required=True)
    g.add_argument("--table", action="store_true", help="also print the multiplication table")
    g.set_defaults(func=cmd_group)

    c = sub.add_parser("coproduct", parents=[common], help="coproduct of an element")
    c.add_argument("--group", default="trivial")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--element")
    c.add_argument("--infinite-pi1", action="store_true", help="the manifold has infinite fundamental group")
    c.set_defaults(func=cmd_coproduct)

    s = sub.add_parser("circle", parents=[common], help="the four coproducts on the circle")
    s.add_argument("--variant", required=True, choices=["vee+", "vee-", "lambda+", "lambda-"])
    s.add_argument("--element", required=True)
    s.set_defaults(func=cmd_circle)

    k = sub.add_parser("check", parents=[common], help="verify an identity over a sweep")
    k.add_argument("identity", choices=sorted(CHECKS))
    k.add_argument("--group", default="trivial")
    k.add_argument("--n", type=int, default=3)
    k.add_argument("--max-k", type=int, default=4)
    k.add_argument("--a")
    k.add_argument("--b")
    k.add_argument("--element")
    k.add_argument("--degree", type=int)
    k.add_argument("--variant", default="vee+", choices=["vee+", "vee-", "lambda+", "lambda-"])
    k.set_defaults(func=cmd_check)

    f = sub.add_parser("pushforward", parents=[common], help="pushforward along a built-in map")
    f.add_argument("--kind", choices=[COVERING, SPHERE_SELF_MAP])
    f.add_argument("--map-file")
    f.add_argument("--group", default="trivial", help="target group of a covering")
    f.add_argument("--n", type=int, default=3)
    f.add_argument("--degree", type=int)
    f.add_argument("--element", required=True)
    f.set_defaults(func=cmd_pushforward)

    h = sub.add_parser("homology", parents=[common], help="group homology, or H_*(S^n/G) with --n")
    h.add_argument("--group", required=True)
    h.add_argument("--n", type=int)
    h.add_argument("--max-degree", type=int, default=4)
    h.add_argument("--primary", action="store_true", help="primary decomposition of torsion")
    h.set_defaults(func=cmd_homology)

    l = sub.add_parser("loopspace", parents=[common], help="free loop space homology table")
    l.add_argument("--group", default="trivial")
    l.add_argument("--n", type=int, required=True)
    l.add_argument("--max-degree", type=int, default=6)
    l.set_defaults(func=cmd_loopspace)
    return p


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args.format)
    try:
        stdout.write(args.func(args, out))
    except CheckFailed as exc:
        stderr.write(f"violation: {exc}\n")
        replay = [*exc.replay, "--format", args.format]
        stdout.write(out.emit({"holds": False, "message": str(exc), "counterexample": _replay(*replay)},
                              f"violation: {exc}\ncounterexample: {_replay(*replay)}"))
        return 1
    except (ValueError, KeyError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    return 0


def main() -> None:
    sys.exit(run())
