"""Command line front end.

Usage::

    conelab cq FILE
    conelab cones FILE
    conelab direction FILE -v "-1,0" [--vstar "2,0"]
    conelab limiting FILE
    conelab aubin FILE
    conelab selftest [--seed S] [--count N]

Exit codes: 0 success, 2 input error, 3 only Unknown results, 4 internal
invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import assembly as asm
from .aubin import GEModel, aubin_verdict, build_ge, witness_point
from .cones import jfamily
from .errors import ConelabError, InputError
from .exact import format_rat, parse_rat
from .model import ProblemData, build_problem, geometry
from .multipliers import directional_lambda, lambda_set
from .polyexpr import parse_poly
from .polyhedra import Cone, Polyhedron
from .regularity import classic_cq, two_licq

INPUT_SCHEMA = "conelab-input/1"
REPORT_SCHEMA = "conelab-report/1"
COMMANDS = ("cq", "cones", "direction", "limiting", "aubin", "selftest")


@dataclass
class AnalysisSpec:
    variables: list
    constraints: list
    ybar: tuple
    ystar: tuple
    probes: list = field(default_factory=list)
    ge: Optional[dict] = None
    options: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "schema": INPUT_SCHEMA,
            "vars": list(self.variables),
            "q": list(self.constraints),
            "ybar": [format_rat(x) for x in self.ybar],
            "ystar": [format_rat(x) for x in self.ystar],
        }
        if self.probes:
            out["probes"] = [[format_rat(x) for x in p] for p in self.probes]
        if self.ge is not None:
            ge = {"F": list(self.ge["F"]), "xbar": [format_rat(x) for x in self.ge["xbar"]]}
            if self.ge.get("xvars"):
                ge["xvars"] = list(self.ge["xvars"])
            out["ge"] = ge
        if self.options:
            out["options"] = dict(self.options)
        return out

    def problem(self) -> ProblemData:
        polys = [parse_poly(q, self.variables) for q in self.constraints]
        return build_problem(polys, self.ybar, self.ystar, bool(self.options.get("assume_subregular", False)))

    def ge_model(self, p: ProblemData) -> GEModel:
        if self.ge is None:
            raise InputError("no 'ge' block in the input", "$.ge")
        xvars = self.ge.get("xvars") or [f"x{i + 1}" for i in range(len(self.ge["xbar"]))]
        allv = list(xvars) + list(self.variables)
        F = [parse_poly(f, allv) for f in self.ge["F"]]
        return build_ge(F, self.ge["xbar"], p)


def _rat_list(val, path, length=None) -> tuple:
    if not isinstance(val, list):
        raise InputError("expected a list of rational literals", path)
    out = []
    for i, x in enumerate(val):
        if isinstance(x, bool) or not isinstance(x, (str, int)):
            raise InputError("expected a rational literal string or integer", f"{path}[{i}]")
        try:
            out.append(parse_rat(str(x)))
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"bad rational {x!r}", f"{path}[{i}]") from e
    if length is not None and len(out) != length:
        raise InputError(f"expected {length} entries, got {len(out)}", path)
    return tuple(out)


def _str_list(val, path) -> list:
    if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
        raise InputError("expected a list of strings", path)
    return list(val)


def parse_input_data(data: Any) -> AnalysisSpec:
    if not isinstance(data, dict):
        raise InputError("top level must be an object", "$")
    schema = data.get("schema", INPUT_SCHEMA)
    if schema != INPUT_SCHEMA:
        raise InputError(f"unsupported schema {schema!r}", "$.schema")
    for key in ("vars", "q", "ybar", "ystar"):
        if key not in data:
            raise InputError(f"missing required field {key!r}", f"$.{key}")
    known = {"schema", "vars", "q", "ybar", "ystar", "probes", "ge", "options"}
    extra = sorted(set(data) - known)
    if extra:
        raise InputError(f"unknown field {extra[0]!r}", f"$.{extra[0]}")
    variables = _str_list(data["vars"], "$.vars")
    if not variables:
        raise InputError("at least one variable is required", "$.vars")
    if len(set(variables)) != len(variables):
        raise InputError("duplicate variable names", "$.vars")
    q = _str_list(data["q"], "$.q")
    if not q:
        raise InputError("at least one constraint is required", "$.q")
    m = len(variables)
    ybar = _rat_list(data["ybar"], "$.ybar", m)
    ystar = _rat_list(data["ystar"], "$.ystar", m)
    probes = []
    if "probes" in data:
        if not isinstance(data["probes"], list):
            raise InputError("expected a list of vectors", "$.probes")
        probes = [_rat_list(pv, f"$.probes[{i}]", m) for i, pv in enumerate(data["probes"])]
    ge = None
    if "ge" in data:
        g = data["ge"]
        if not isinstance(g, dict):
            raise InputError("expected an object", "$.ge")
        for key in ("F", "xbar"):
            if key not in g:
                raise InputError(f"missing required field {key!r}", f"$.ge.{key}")
        F = _str_list(g["F"], "$.ge.F")
        xbar = _rat_list(g["xbar"], "$.ge.xbar")
        xvars = _str_list(g["xvars"], "$.ge.xvars") if "xvars" in g else None
        if xvars is not None and len(xvars) != len(xbar):
            raise InputError("xvars and xbar lengths differ", "$.ge.xvars")
        if len(F) != m:
            raise InputError(f"expected {m} components", "$.ge.F")
        ge = {"F": F, "xbar": xbar, "xvars": xvars}
    options = data.get("options", {})
    if not isinstance(options, dict):
        raise InputError("expected an object", "$.options")
    for key, val in options.items():
        if key == "max_enum":
            if not isinstance(val, int) or isinstance(val, bool) or val < 1:
                raise InputError("expected a positive integer", "$.options.max_enum")
        elif key == "format":
            if val not in ("text", "json"):
                raise InputError("expected 'text' or 'json'", "$.options.format")
        elif key == "assume_subregular":
            if not isinstance(val, bool):
                raise InputError("expected a boolean", "$.options.assume_subregular")
        else:
            raise InputError(f"unknown option {key!r}", f"$.options.{key}")
    return AnalysisSpec(variables, q, ybar, ystar, probes, ge, dict(options))


def parse_input(path: str) -> AnalysisSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError as e:
        raise InputError(f"no such file: {path}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    return parse_input_data(data)


# ----------------------------------------------------------------------
# rendering


def coord_names(variables: Sequence[str], pair: str) -> list:
    """Names of the ``(w*, w)`` or ``(v, v*)`` coordinates."""
    m = len(variables)
    idx = [str(i + 1) for i in range(m)]
    if pair == "w":
        return [f"w{i}*" for i in idx] + [f"w{i}" for i in idx]
    if pair == "v":
        return [f"v{i}" for i in idx] + [f"v{i}*" for i in idx]
    if pair == "lam":
        return [f"l{i}" for i in idx]
    return [f"{pair}{i}" for i in idx]


def render_row(row: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for c, nm in zip(row, names):
        if c == 0:
            continue
        mag = abs(c)
        body = nm if mag == 1 else f"{format_rat(Fraction(mag))} {nm}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


def render_cone(c: Cone, names: Sequence[str]) -> str:
    if c.is_full():
        return "everything"
    out = []
    for r in c.eq:
        r = _sign_normal(r)
        out.append(f"{render_row(r, names)} = 0")
    for r in c.ineq:
        first = next(x for x in r if x != 0)
        if first < 0:
            out.append(f"{render_row([-x for x in r], names)} >= 0")
        else:
            out.append(f"{render_row(r, names)} <= 0")
    return ", ".join(out)


def _sign_normal(r):
    first = next((x for x in r if x != 0), 0)
    return [-x for x in r] if first < 0 else list(r)


def cone_json(c: Cone) -> dict:
    return {
        "dim": c.dim,
        "eq": [list(r) for r in c.eq],
        "ineq": [list(r) for r in c.ineq],
        "rays": [list(r) for r in c.rays],
        "lines": [list(r) for r in c.lines],
    }


def cone_from_json(d: dict) -> Cone:
    return Cone.from_h(d["dim"], d["eq"], d["ineq"])


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rat(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, frozenset):
        return sorted(i + 1 for i in x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


def union_json(u: asm.ConeUnion) -> dict:
    return {
        "completeness": u.tag(),
        "pieces": [dict(cone_json(pc.setrep), provenance=_jsonable(pc.provenance())) for pc in u.pieces],
        "hypotheses": [str(v) for v in u.log],
    }


def union_text(u: asm.ConeUnion, names, title: str) -> list:
    lines = [f"{title}: {len(u.pieces)} piece(s), completeness {u.tag()}"]
    for pc in u.pieces:
        lines.append(f"  [{pc.origin}] {render_cone(pc.setrep, names)}")
    return lines


def poly_json(p: Polyhedron) -> dict:
    if p.is_empty():
        return {"empty": True}
    return {
        "vertices": [[format_rat(x) for x in v] for v in p.vertices],
        "rays": [[format_rat(x) for x in r] for r in p.rays],
        "lines": [[format_rat(x) for x in r] for r in p.lines],
    }


def _vec_text(v) -> str:
    return "(" + ", ".join(format_rat(Fraction(x)) for x in v) + ")"


def _poly_text(p: Polyhedron) -> str:
    if p.is_empty():
        return "empty"
    parts = ["conv{" + ", ".join(_vec_text(v) for v in p.vertices) + "}"]
    if p.rays:
        parts.append("cone{" + ", ".join(_vec_text(r) for r in p.rays) + "}")
    if p.lines:
        parts.append("span{" + ", ".join(_vec_text(r) for r in p.lines) + "}")
    return " + ".join(parts)


# ----------------------------------------------------------------------
# commands


@dataclass
class Report:
    data: dict
    text: list
    only_unknown: bool = False


def _parse_vec(text: str, m: int, flag: str) -> tuple:
    try:
        vals = tuple(parse_rat(t.strip()) for t in text.split(","))
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad rational vector {text!r}", flag) from e
    if len(vals) != m:
        raise InputError(f"expected {m} entries", flag)
    return vals


def _one_based(s) -> list:
    return sorted(i + 1 for i in s)


def run(command: str, spec: AnalysisSpec, v: Optional[str] = None, vstar: Optional[str] = None) -> Report:
    if command not in COMMANDS or command == "selftest":
        raise InputError(f"unknown command {command!r}")
    p = spec.problem()
    max_enum = int(spec.options.get("max_enum", 6561))
    probes = list(spec.probes)
    names = list(spec.variables)
    hyp = asm.hypotheses(p)
    data: dict = {"schema": REPORT_SCHEMA, "command": command}
    text: list = []
    only_unknown = False

    if command == "cq":
        licq, mfcq = classic_cq(p)
        data.update(licq=licq, mfcq=mfcq, soscms=hyp.sos.tag())
        text += [f"LICQ: {licq}", f"MFCQ: {mfcq}", f"SOSCMS: {hyp.sos.tag()}"]
        if hyp.sos.disproven:
            lam, u = hyp.sos.witness
            data["soscms_witness"] = {"lambda": _jsonable(lam), "u": _jsonable(u)}
            text.append(f"  witness lambda={_vec_text(lam)} u={_vec_text(u)}")
        dirs = [_parse_vec(v, p.m, "-v")] if v else [g.samples[0] for g in asm.probe_groups(geometry(p).kbar, probes)]
        twol = []
        for d in dirs:
            if not any(d):
                continue
            tv = two_licq(p, d, jfamily(p, d, max_enum))
            twol.append({"v": _jsonable(d), "verdict": tv.tag()})
            text.append(f"2-LICQ at v={_vec_text(d)}: {tv.tag()}")
        data["two_licq"] = twol

    elif command == "cones":
        geo = geometry(p)
        ms = lambda_set(p)
        tg = asm.tangent_graph(p, probes, hyp)
        rg = asm.regular_normal_graph(p, probes, hyp)
        vn = coord_names(names, "v")
        wn = coord_names(names, "w")
        data.update(
            active=_one_based(p.active),
            tlin=cone_json(geo.tlin),
            kbar=cone_json(geo.kbar),
            nullspace=cone_json(geo.nullspace),
            multipliers=poly_json(ms.poly),
            tangent=union_json(tg),
            regular_normal=union_json(rg),
        )
        text += [
            f"active set: {_one_based(p.active)}",
            f"linearized cone: {render_cone(geo.tlin, coord_names(names, 'v'))}",
            f"critical cone: {render_cone(geo.kbar, coord_names(names, 'v'))}",
            f"nullspace: {render_cone(geo.nullspace, coord_names(names, 'v'))}",
            f"multipliers: {_poly_text(ms.poly)}",
        ]
        text += union_text(tg, vn, "tangent cone")
        text += union_text(rg, wn, "regular normal cone")
        only_unknown = rg.completeness == asm.UNKNOWN_C

    elif command == "direction":
        if not v:
            raise InputError("the direction command needs -v", "-v")
        d = _parse_vec(v, p.m, "-v")
        wn = coord_names(names, "w")
        if any(d):
            dm = directional_lambda(p, d)
            jf = jfamily(p, d, max_enum)
            data.update(
                v=_jsonable(d),
                lambda_v=poly_json(dm.lam_bar),
                lambda_e=_jsonable(dm.lam_e),
                jfamily=[_one_based(J) for J in jf.sets],
                maximal=[_one_based(J) for J in jf.maximal],
            )
            text += [
                f"v = {_vec_text(d)}",
                f"directional multipliers: {_poly_text(dm.lam_bar)}",
                "index family: " + ", ".join("{" + ",".join(map(str, _one_based(J))) + "}" for J in jf.sets),
            ]
            tp = asm.tangent_piece(p, d)
            if vstar:
                vs_list = [_parse_vec(vstar, p.m, "--vstar")]
            else:
                vs_list = list(tp.vertices)[:1]
            data["vstar"] = []
            for vs in vs_list:
                u = asm.dir_limiting(p, d, vs, hyp, max_enum)
                data["vstar"].append({"vstar": _jsonable(vs), "cone": union_json(u)})
                text += union_text(u, wn, f"directional limiting cone at v*={_vec_text(vs)}")
                only_unknown = only_unknown or u.completeness == asm.UNKNOWN_C
        else:
            if not vstar:
                raise InputError("v = 0 needs --vstar", "--vstar")
            vs = _parse_vec(vstar, p.m, "--vstar")
            n1 = asm.n1_zero(p, vs, probes, hyp, max_enum)
            n2 = asm.n2_zero(p, vs, probes, hyp, max_enum)
            data.update(v=_jsonable(d), vstar=_jsonable(vs), n1=union_json(n1), n2=union_json(n2))
            text += union_text(n1, wn, "N1 (nonzero approach directions)")
            text += union_text(n2, wn, "N2 (zero approach directions)")
            only_unknown = n1.completeness == asm.UNKNOWN_C and n2.completeness == asm.UNKNOWN_C

    elif command == "limiting":
        res = asm.full_limiting(p, probes, max_enum)
        wn = coord_names(names, "w")
        if res.exact:
            data["limiting"] = union_json(res.lower)
            text += union_text(res.lower, wn, "limiting normal cone")
        else:
            data["lower"] = union_json(res.lower)
            data["upper"] = union_json(res.upper)
            text += union_text(res.lower, wn, "lower estimate")
            if res.lower.completeness == asm.UNKNOWN_C and res.lower.reason:
                text.append(f"  ({res.lower.reason})")
            text += union_text(res.upper, wn, "upper estimate")
            only_unknown = res.lower.completeness == asm.UNKNOWN_C and res.upper.completeness == asm.UNKNOWN_C

    elif command == "aubin":
        ge = spec.ge_model(p)
        res = asm.full_limiting(p, probes, max_enum)
        verdict = aubin_verdict(ge, res.lower, res.upper, hyp)
        data["aubin"] = verdict.tag()
        text.append(f"Aubin property: {verdict.tag()}")
        if verdict.witness is not None:
            b = verdict.witness["b"]
            w = witness_point(ge, b)
            data["witness"] = {"b": _jsonable(b), "normal": _jsonable(w), "piece": cone_json(verdict.witness["piece"].setrep)}
            text.append(f"  witness b = {_vec_text(b)}, (w*, w) = {_vec_text(w)}")
            text.append(f"  in piece: {render_cone(verdict.witness['piece'].setrep, coord_names(names, 'w'))}")
        only_unknown = verdict.status == "Unknown"

    return Report(data, text, only_unknown)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conelab", description="Exact cone computations for graphs of normal-cone maps.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file", nargs="?", help="input file (conelab-input/1 JSON)")
    ap.add_argument("-v", dest="v", help="direction as comma separated rationals")
    ap.add_argument("--vstar", help="second component of the direction")
    ap.add_argument("--format", choices=("text", "json"), default=None)
    ap.add_argument("--max-enum", type=int, default=None, help="cap on enumerated index sets and strata")
    ap.add_argument("--probes", default="auto", help="'auto' or a JSON file with extra probe directions")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--count", type=int, default=50)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    # argparse treats "-1,0" as an option; glue the value to the flag first
    argv = list(sys.argv[1:] if argv is None else argv)
    for i in range(len(argv) - 1):
        if argv[i] in ("-v", "--vstar"):
            argv[i] = f"{argv[i]}={argv[i + 1]}" if argv[i] == "--vstar" else f"-v{argv[i + 1]}"
            argv[i + 1] = None
    argv = [a for a in argv if a is not None]
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            from .harness import property_suite

            rep = property_suite(args.seed, args.count)
            if args.format == "json":
                print(json.dumps(rep.to_json(), indent=2))
            else:
                print("\n".join(rep.lines()))
            return 0 if rep.ok else 4
        if not args.file:
            raise InputError("an input file is required")
        spec = parse_input(args.file)
        if args.max_enum is not None:
            if args.max_enum < 1:
                raise InputError("must be positive", "--max-enum")
            spec.options["max_enum"] = args.max_enum
        if args.probes != "auto":
            spec.probes = spec.probes + _probe_file(args.probes, len(spec.variables))
        fmt = args.format or spec.options.get("format", "text")
        rep = run(args.command, spec, args.v, args.vstar)
    except ConelabError as e:
        print(f"conelab: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    if fmt == "json":
        print(json.dumps(rep.data, indent=2))
    else:
        print("\n".join(rep.text))
    return 3 if rep.only_unknown else 0


def _probe_file(path: str, m: int) -> list:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read probe file: {e}", "--probes") from e
    if not isinstance(data, list):
        raise InputError("expected a list of vectors", "--probes")
    return [_rat_list(v, f"--probes[{i}]", m) for i, v in enumerate(data)]


if __name__ == "__main__":
    sys.exit(main())
