"""dade-lab: command-line driver.

Exit codes: 0 all checks pass, 1 some check fails, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .biset import induction_biset
from .builder import build_poset
from .cfun import (SuperClassFunction, from_omega_coordinates, idempotent_basis, jnd,
                   omega_basis, to_omega_coordinates)
from .dade import (borel_smith_lattice, hom_of_moore, omega_syzygy, psi, structure_report,
                   tight_formula)
from .demos import DEMOS
from .grp import DEFAULT_CATALOG, GroupError, build_group
from .gposet import GPoset, gposet_from_json, join_many
from .harness import SUITES, corrupt_mobius, run_suite
from .moore import analyze


class UsageError(Exception):
    pass


def _group(args):
    if not args.group:
        raise UsageError("--group is required")
    spec = args.group[0] if isinstance(args.group, list) else args.group
    G = build_group(spec)
    if getattr(args, "inject_fault", None) == "mobius":
        corrupt_mobius(G)
    return G


def _ints(text: str | None, what: str) -> list[int]:
    if text is None:
        raise UsageError(f"{what} is required")
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of integers") from None


def _load_poset(arg: str, G=None) -> GPoset:
    path = Path(arg)
    if path.suffix == ".json" or path.is_file():
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read poset file {arg}: {e}") from None
        return gposet_from_json(data, G if "group" not in data else None)
    if G is None:
        raise UsageError("a builder expression needs --group")
    return build_poset(arg, G)


# ---------------------------------------------------------------------------
# commands

def cmd_group_info(args) -> tuple[dict, int]:
    G = _group(args)
    lat = G.lattice
    return {
        "group": G.spec, "order": G.order, "prime": G.prime, "abelian": G.is_abelian(),
        "subgroups": len(lat.subgroups), "classes": [lat.descriptor(i) for i in range(len(lat))],
        "leq": [[int(x) for x in row] for row in lat.leq],
        "mobius": [list(r) for r in lat.mobius],
    }, 0


def cmd_cfun(args) -> tuple[dict, int]:
    G = _group(args)
    sub = args.action
    if sub == "bases":
        return {"group": G.spec,
                "idempotent": [list(e.values) for e in idempotent_basis(G)],
                "omega": [list(w.values) for w in omega_basis(G)]}, 0
    if sub == "convert":
        vals = _ints(args.values, "--values")
        if len(vals) != len(G.lattice):
            raise UsageError(f"expected {len(G.lattice)} values")
        if args.basis == "omega":
            f = from_omega_coordinates(G, vals)
        else:
            f = SuperClassFunction(G, vals)
        return {"group": G.spec, "idempotent": list(f.values),
                "omega": to_omega_coordinates(f)}, 0
    if sub == "jnd":
        if args.subgroup is None:
            raise UsageError("--subgroup (class index of K) is required")
        if not 0 <= args.subgroup < len(G.lattice):
            raise UsageError("no such subgroup class")
        U = induction_biset(G, G.lattice.reps[args.subgroup])
        vals = _ints(args.values, "--values")
        f = SuperClassFunction(U.K, vals)
        return {"group": G.spec, "K": args.subgroup, "input": vals,
                "jnd": list(jnd(U, f).values)}, 0
    raise UsageError(f"unknown cfun action {sub!r}")


def cmd_dade(args) -> tuple[dict, int]:
    G = _group(args)
    sub = args.action
    if sub == "borel-smith":
        return borel_smith_lattice(G).to_json(), 0
    if sub == "structure":
        d = structure_report(G)
        return d, 0 if d["status"] == "pass" else 1
    if sub == "psi":
        if args.omega_of is not None:
            if not 0 <= args.omega_of < len(G.lattice):
                raise UsageError("no such subgroup class")
            from .gset import transitive_gset
            e = omega_syzygy(transitive_gset(G, G.lattice.reps[args.omega_of]))
            return {**e.to_json(), "input": f"omega_G/H{args.omega_of}"}, 0
        vals = _ints(args.values, "--values")
        return {**psi(SuperClassFunction(G, vals)).to_json(), "input": vals}, 0
    raise UsageError(f"unknown dade action {sub!r}")


def _poset_arg(args, G=None, many=False):
    if not args.poset:
        raise UsageError("--poset is required")
    posets = [_load_poset(p, G) for p in args.poset]
    return posets if many else posets[0]


def cmd_moore(args) -> tuple[dict, int]:
    G = build_group(args.group[0]) if args.group else None
    X = _poset_arg(args, G)
    p = args.p or X.group.prime
    sub = args.action
    rep = analyze(X, p)
    if sub == "analyze":
        return rep.to_json(), 0
    if sub == "hom":
        return hom_of_moore(X, report=rep).to_json(), 0
    if sub == "tight-formula":
        lhs = tight_formula(X, report=rep, demo=args.demo)
        rhs = hom_of_moore(X, report=rep) if rep.is_capped else None
        ok = rhs is not None and lhs == rhs
        return {"tight_formula": lhs.to_json(),
                "hom_of_moore": rhs.to_json() if rhs is not None else None,
                "is_tight": rep.is_tight, "agree": ok}, 0 if ok or args.demo else 1
    raise UsageError(f"unknown moore action {sub!r}")


def cmd_join(args) -> tuple[dict, int]:
    G = build_group(args.group[0]) if args.group else None
    posets = _poset_arg(args, G, many=True)
    return join_many(posets).to_json(), 0


def cmd_induce(args) -> tuple[dict, int]:
    from .gposet import jn_U
    G = _group(args)
    if args.subgroup is None or not 0 <= args.subgroup < len(G.lattice):
        raise UsageError("--subgroup must be a subgroup class index of the group")
    U = induction_biset(G, G.lattice.reps[args.subgroup])
    X = _poset_arg(args, U.K)
    return jn_U(U, X).to_json(), 0


def cmd_verify(args) -> tuple[dict, int]:
    suite = args.suite
    specs = args.group or list(DEFAULT_CATALOG)
    for s in specs:
        build_group(s)
    names = SUITES if suite == "all" else [suite]
    reports = [run_suite(n, specs, args.max_index, args.threads, args.inject_fault) for n in names]
    ok = all(r.ok for r in reports)
    out = {"suites": [r.to_json(timing=args.timing) for r in reports],
           "status": "pass" if ok else "fail"}
    return out, 0 if ok else 1


def cmd_demo(args) -> tuple[dict, int]:
    d = DEMOS[args.name]()
    return d, 0 if d["status"] == "pass" else 1


# ---------------------------------------------------------------------------
# text rendering

def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return "\n".join(lines)


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return "-" if v is None else str(v)


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", action="append", metavar="SPEC",
                        help="group spec: catalog name (C9, D8, Q8, E27, ...), kind:arg, or JSON")
    common.add_argument("--poset", action="append", metavar="FILE|EXPR",
                        help="poset JSON file or builder expression, e.g. 'join(gset(G/1), point)'")
    common.add_argument("--p", type=int, help="prime for homology (default: the group's prime)")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--max-index", type=int, default=None)
    common.add_argument("--threads", type=int,
                        default=int(os.environ.get("DADE_LAB_THREADS", "1") or 1))
    common.add_argument("-o", "--output", metavar="FILE")
    common.add_argument("--inject-fault", choices=["mobius"], help=argparse.SUPPRESS)

    ap = argparse.ArgumentParser(prog="dade-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("group-info", parents=[common], help="subgroup classes and Moebius table")

    c = sub.add_parser("cfun", parents=[common], help="super class functions")
    c.add_argument("action", choices=["bases", "convert", "jnd"])
    c.add_argument("--values", help="comma-separated values")
    c.add_argument("--basis", choices=["idempotent", "omega"], default="idempotent",
                   help="coordinates of --values for convert")
    c.add_argument("--subgroup", type=int, help="class index of K for jnd")

    d = sub.add_parser("dade", parents=[common], help="Borel-Smith lattice and C(G)/C_b(G)")
    d.add_argument("action", choices=["borel-smith", "structure", "psi"])
    d.add_argument("--values", help="idempotent coordinates for psi")
    d.add_argument("--omega-of", type=int, help="psi of omega_{G/H} for class index H")

    m = sub.add_parser("moore", parents=[common], help="homology of fixed points of a G-poset")
    m.add_argument("action", choices=["analyze", "hom", "tight-formula"])
    m.add_argument("--demo", action="store_true", help="evaluate the tight formula even if not tight")

    sub.add_parser("join", parents=[common], help="symmetric join of the given posets")

    i = sub.add_parser("induce", parents=[common], help="join induction jn_K^G")
    i.add_argument("--subgroup", type=int, help="class index of K in the group")

    v = sub.add_parser("verify", parents=[common], help="verification sweeps")
    v.add_argument("suite", choices=SUITES + ["all"])
    v.add_argument("--timing", action="store_true", help="include wall times (not byte-stable)")

    e = sub.add_parser("demo", parents=[common], help="worked examples")
    e.add_argument("name", choices=sorted(DEMOS))
    return ap


COMMANDS = {"group-info": cmd_group_info, "cfun": cmd_cfun, "dade": cmd_dade,
            "moore": cmd_moore, "join": cmd_join, "induce": cmd_induce,
            "verify": cmd_verify, "demo": cmd_demo}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        result, code = COMMANDS[args.command](args)
    except (UsageError, GroupError, json.JSONDecodeError) as e:
        print(f"dade-lab: error: {e}", file=sys.stderr)
        return 2
    text = render_text(result) if args.format == "text" else json.dumps(result, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
