"""Command-line interface: ``eds``.

Exit codes: 0 pass, 1 any failure or skipped claim (or a validation
failure of user data), 2 usage error (bad arguments, unknown scenario,
input that does not match the documented schema).
"""
from __future__ import annotations

import argparse
import json
import sys

import jsonschema

from . import scenarios as sc

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_MATRIX_ENTRY = {"type": ["string", "integer"]}
_SYMSPACE = {
    "type": "object",
    "required": ["n", "basis"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "basis": {"type": "array", "items": {"type": "array", "items": {
            "anyOf": [_MATRIX_ENTRY, {"type": "array", "items": _MATRIX_ENTRY}]}}},
        "params": {"type": "array", "items": {"type": "string"}},
    },
}
_MATRIX2 = {"type": "array", "minItems": 2, "maxItems": 2,
            "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": _MATRIX_ENTRY}}
_FORM = {"type": "array", "items": {
    "type": "object", "required": ["indices", "coefficient"],
    "properties": {"indices": {"type": "array", "items": {"type": "string"}},
                   "coefficient": {"type": "string"}}}}
SCHEMAS = {
    "prolong": _SYMSPACE,
    "austere": _SYMSPACE,
    "classify": {"type": "object", "required": ["S", "T"],
                 "properties": {"S": _MATRIX2, "T": _MATRIX2}},
    "cartan": {
        "type": "object",
        "required": ["model"],
        "anyOf": [{"required": ["space"]}, {"required": ["ideal"]}],
        "properties": {
            "model": {"type": "object", "required": ["r"], "properties": {
                "n": {"type": "integer"}, "r": {"type": "integer", "minimum": 1},
                "metric": {"enum": ["symbolic", "identity"]},
                "params": {"type": "array", "items": {"type": "string"}},
                "constraints": {"type": "array", "items": {"type": "string"}},
                "constant_params": {"type": "array", "items": {"type": "string"}}}},
            "space": _SYMSPACE,
            "ideal": {"type": "array", "items": _FORM},
            "solve_for": {"type": "array", "items": {"type": "string"}},
            "independence": {"type": "array", "items": {"type": "string"}},
            "augment": {"type": "array", "items": _FORM},
            "restrict": {"type": "array", "items": {"type": "string"}},
            "seed": {"type": "integer"},
        },
    },
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eds", description="Exact verification of austere-submanifold computations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("list-scenarios", help="list registered scenarios")
    v = sub.add_parser("verify", help="run one scenario or all of them")
    v.add_argument("name", help="scenario name or 'all'")
    v.add_argument("--json", action="store_true")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--budget", type=int, default=None, help="Groebner step budget")
    v.add_argument("--param", action="append", default=[], metavar="K=V")
    v.add_argument("--full", action="store_true", help="include full-only claims")
    v.add_argument("--parallel", action="store_true")
    for kind in ("prolong", "austere", "classify", "cartan"):
        u = sub.add_parser(kind, help=f"{kind} on a JSON input file")
        u.add_argument("--input", required=True)
        u.add_argument("--json", action="store_true")
    c = sub.add_parser("check-austere", help="numerical austere check of an immersion")
    c.add_argument("--surface", default="helicoid", choices=["helicoid", "quadric", "flat"])
    c.add_argument("--lambdas", default="1,2,3")
    c.add_argument("--points", type=int, default=10)
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--json", action="store_true")
    return p


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _parse_params(items) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects K=V, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def cmd_list(args) -> int:
    for name, desc, cost in sc.list_scenarios():
        print(f"{name:32s} {cost:5s} {desc}")
    return EXIT_PASS


def cmd_verify(args) -> int:
    params = _parse_params(args.param)
    known = [n for n, _, _ in sc.list_scenarios()]
    if args.name == "all":
        names = known
        declared = {k for n in names for k in sc.get_scenario(n).params}
        unknown = sorted(set(params) - declared)
        if unknown:
            raise UsageError(f"no scenario declares parameter(s) {', '.join(unknown)}")
    elif args.name in known:
        names = [args.name]
        sc.coerce_params(sc.get_scenario(args.name), params)
    else:
        raise UsageError(f"unknown scenario {args.name!r}; see 'eds list-scenarios'")
    if args.budget is not None and args.budget < 1:
        raise UsageError("--budget must be positive")
    reports = sc.run_many(names, seed=args.seed, budget=args.budget, params=params,
                          full=args.full, parallel=args.parallel)
    failed = any(not r.ok for r in reports)
    if args.json:
        print(_dump({"status": "fail" if failed else "pass",
                     "reports": [r.to_json() for r in reports]}))
    else:
        print("\n\n".join(r.to_text() for r in reports))
        if len(reports) > 1:
            summary = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "skipped")}
            print(f"\n{len(reports)} scenarios: " + ", ".join(f"{v} {k}" for k, v in summary.items()))
    return EXIT_FAIL if failed else EXIT_PASS


def _load_input(kind: str, path: str):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None
    try:
        jsonschema.validate(data, SCHEMAS[kind])
    except jsonschema.ValidationError as exc:
        raise UsageError(f"{path} does not match the {kind} schema: {exc.message}") from None
    return data


def _run_user(kind: str, data) -> dict:
    from .austere import ComplexSymPair, SymSpace, classify_pair, is_austere, prolongation
    from .pfaffian import cartan_characters, integral_element_space, system_from_json, torsion_locus
    if kind == "prolong":
        return prolongation(SymSpace.from_json(data)).to_json()
    if kind == "austere":
        return is_austere(SymSpace.from_json(data)).to_json()
    if kind == "classify":
        return classify_pair(ComplexSymPair.from_json(data)).to_json()
    system = system_from_json(data)
    space = integral_element_space(system)
    out = {"integral_elements": space.to_json(),
           "torsion": torsion_locus(system, space).to_json()}
    out["characters"] = cartan_characters(system, seed=int(data.get("seed", 0)), space=space).to_json()
    return out


def _stringify(obj):
    """Exact values as strings; booleans and None stay JSON literals."""
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    return str(obj)


def cmd_user(args) -> int:
    data = _load_input(args.command, args.input)
    try:
        result = _stringify(_run_user(args.command, data))
    except ValueError as exc:
        msg = f"validation failure: {exc}"
        if args.json:
            print(_dump({"command": args.command, "status": "fail", "error": msg}))
        else:
            print(msg, file=sys.stderr)
        return EXIT_FAIL
    if args.json:
        print(_dump({"command": args.command, "status": "pass", "result": result}))
    else:
        print(_text_result(args.command, result))
    return EXIT_PASS


def _text_result(kind: str, r: dict) -> str:
    if kind == "prolong":
        return f"prolongation dimension: {r['dimension']}"
    if kind == "austere":
        if r["austere"]:
            return "austere: true"
        c = r["certificate"]
        return f"austere: false (certificate {c['name']}: {c['polynomial']})"
    if kind == "classify":
        lines = [f"case: {r['tag']}"]
        if r["parameters"]:
            lines.append("parameters: " + ", ".join(f"{k}={v}" for k, v in r["parameters"].items()))
        lines += [f"  {x}" for x in r["reasons"]]
        return "\n".join(lines)
    ie, ch, t = r["integral_elements"], r["characters"], r["torsion"]
    return "\n".join([
        f"integral-element fiber dimension: {ie['dimension']}",
        f"independent pi-forms: {ie['pi_rank']}",
        "torsion: " + ("none" if not t["groebner_basis"] else "{" + ", ".join(t["groebner_basis"]) + "}"),
        "characters: " + ", ".join(ch["characters"]),
        f"Cartan bound {ch['cartan_bound']}: " + ("involutive" if ch["involutive"] else "not involutive"),
    ])


def cmd_check_austere(args) -> int:
    from . import geometry
    if args.points < 1 or args.tol <= 0:
        raise UsageError("--points must be positive and --tol positive")
    if args.surface == "helicoid":
        try:
            lam = [float(x) for x in args.lambdas.split(",")]
        except ValueError:
            raise UsageError("--lambdas expects comma-separated numbers") from None
        if not 1 <= len(lam) <= 3:
            raise UsageError("--lambdas expects one to three values")
        imm = geometry.helicoid(lam)
    elif args.surface == "quadric":
        imm = geometry.quadric_graph()
    else:
        imm = geometry.flat()
    rep = geometry.check_surface(imm, args.points, args.tol, args.seed)
    if args.json:
        print(_dump(_stringify(rep.to_json()) | {"passed": rep.passed}))
    else:
        print(f"{rep.surface}: {'PASS' if rep.passed else 'FAIL'}  residual {rep.residual:.3e} "
              f"(tol {rep.tol:g}, {rep.points} points, seed {rep.seed}, "
              f"normal ranks {sorted(set(rep.normal_ranks))})")
    return EXIT_PASS if rep.passed else EXIT_FAIL


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
        handler = {"list-scenarios": cmd_list, "verify": cmd_verify,
                   "check-austere": cmd_check_austere}.get(args.command, cmd_user)
        return handler(args)
    except (UsageError, sc.ParameterError, sc.UnknownScenario) as exc:
        print(f"eds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
