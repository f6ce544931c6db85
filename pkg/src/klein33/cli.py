"""Command-line front end: a JSON request/response wrapper over the kernel.

Three subcommands:

``klein33 run <command> [--payload file|-]``
    Execute one named operation.  The payload is a JSON object read from a
    file (or stdin with ``-``); omitting it sends ``{}``.

``klein33 batch <file>``
    Newline-delimited JSON requests, one response line per request, emitted
    in input order; a failing line never aborts the stream.

``klein33 selftest``
    Run the acceptance suite and print one PASS/FAIL line per criterion.

Every response is a single JSON object ``{"status", "result", "diagnostics"}``
serialized with sorted keys and fixed separators, so output is byte
deterministic for a fixed (request, seed).  Exact values are rendered as
integers or reduced ``"p/q"`` strings; floating point appears only when a
command explicitly fell back, and then a diagnostic says so.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import acceptance, incidence, klein_lines, transforms
from .errors import (KleinError, E_CMD, E_IO, E_SCHEMA)
from .exactnum import QuadExt
from .ga_core import LABELS, Multivector, from_map
from .transforms import (COLLINEATION, CORRELATION, ProjMatrix4)

# --- value codec -----------------------------------------------------------------


def _enc(value):
    """Exact value -> JSON-friendly value (ints stay ints, else strings)."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else str(value)
    if isinstance(value, QuadExt):
        return str(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)):
        return [_enc(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _enc(v) for k, v in value.items()}
    if isinstance(value, Multivector):
        return {LABELS[m]: _enc(Fraction(v) if not isinstance(v, QuadExt) else v)
                for m, v in value.items()}
    raise KleinError(E_SCHEMA, f"cannot serialize {type(value).__name__}")


def _has_float(value) -> bool:
    if isinstance(value, float):
        return True
    if isinstance(value, (list, tuple)):
        return any(_has_float(v) for v in value)
    if isinstance(value, dict):
        return any(_has_float(v) for v in value.values())
    return False


def _dec_number(value, where, exact=True):
    if isinstance(value, bool):
        raise KleinError(E_SCHEMA, f"{where}: boolean is not a number")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise KleinError(E_SCHEMA, f"{where}: bad rational {value!r}") from exc
    if isinstance(value, float):
        if exact:
            raise KleinError(
                E_SCHEMA, f"{where}: floating point input needs --no-exact")
        return Fraction(value)
    raise KleinError(E_SCHEMA, f"{where}: expected a number or 'p/q' string")


def _dec_vec(value, n, where, exact=True):
    if not isinstance(value, (list, tuple)) or len(value) != n:
        raise KleinError(E_SCHEMA, f"{where}: expected a list of {n} numbers")
    return tuple(_dec_number(v, where, exact) for v in value)


def _dec_mat4(value, where, exact=True):
    if not isinstance(value, list) or len(value) != 4:
        raise KleinError(E_SCHEMA, f"{where}: expected a 4x4 matrix")
    return [list(_dec_vec(row, 4, where, exact)) for row in value]


def _dec_mv(value, where, exact=True):
    if not isinstance(value, dict) or not value:
        raise KleinError(E_SCHEMA, f"{where}: expected a nonempty blade map")
    if exact and _has_float(value):
        raise KleinError(E_SCHEMA, f"{where}: floating point input needs --no-exact")
    fixed = {}
    for lab, v in value.items():
        fixed[lab] = v if not isinstance(v, float) else Fraction(v)
    try:
        return from_map({k: (str(v) if isinstance(v, Fraction) else v)
                         for k, v in fixed.items()})
    except KleinError:
        raise
    except Exception as exc:
        raise KleinError(E_SCHEMA, f"{where}: {exc}") from exc


def _dec_kind(value, where):
    if value not in (COLLINEATION, CORRELATION):
        raise KleinError(
            E_SCHEMA, f"{where}: kind must be 'collineation' or 'correlation'")
    return value


def _field(payload, name, required=True, default=None):
    if name not in payload:
        if required:
            raise KleinError(E_SCHEMA, f"payload is missing field {name!r}")
        return default
    return payload[name]


# --- command handlers --------------------------------------------------------------


def _cmd_embed_line(payload, opt):
    line = _dec_vec(_field(payload, "line"), 6, "line", opt["exact"])
    return {"multivector": _enc(klein_lines.embed(line))}


def _cmd_line_from_points(payload, opt):
    x = _dec_vec(_field(payload, "x"), 4, "x", opt["exact"])
    y = _dec_vec(_field(payload, "y"), 4, "y", opt["exact"])
    return {"line": _enc(klein_lines.line_from_points(x, y))}


def _cmd_line_from_planes(payload, opt):
    u = _dec_vec(_field(payload, "u"), 4, "u", opt["exact"])
    v = _dec_vec(_field(payload, "v"), 4, "v", opt["exact"])
    return {"line": _enc(klein_lines.line_from_planes(u, v))}


def _cmd_omega(payload, opt):
    l1 = _dec_vec(_field(payload, "l1"), 6, "l1", opt["exact"])
    l2 = _dec_vec(_field(payload, "l2"), 6, "l2", opt["exact"])
    return _enc(klein_lines.omega(l1, l2))


def _cmd_classify_blade(payload, opt):
    mv = _dec_mv(_field(payload, "blade"), "blade", opt["exact"])
    cls = incidence.classify_blade(mv)
    out = {"class": cls.kind}
    if cls.vertex is not None:
        out["vertex"] = _enc(cls.vertex)
    if cls.plane is not None:
        out["plane"] = _enc(cls.plane)
    if cls.congruence_type is not None:
        out["congruence_type"] = cls.congruence_type
    if cls.regular is not None:
        out["regular"] = cls.regular
    if cls.surface is not None:
        out["surface"] = cls.surface
    if cls.real_points is not None:
        out["real_points"] = cls.real_points
    if cls.complex_coords is not None:
        out["complex"] = _enc(cls.complex_coords)
    return out


def _cmd_opns(payload, opt):
    mv = _dec_mv(_field(payload, "blade"), "blade", opt["exact"])
    return {"basis": _enc(incidence.opns_basis(mv))}


def _cmd_ipns(payload, opt):
    mv = _dec_mv(_field(payload, "blade"), "blade", opt["exact"])
    return {"basis": _enc(incidence.ipns_basis(mv))}


def _cmd_bundle_vertex(payload, opt):
    mv = _dec_mv(_field(payload, "blade"), "blade", opt["exact"])
    return {"vertex": _enc(incidence.bundle_vertex(mv))}


def _cmd_field_plane(payload, opt):
    mv = _dec_mv(_field(payload, "blade"), "blade", opt["exact"])
    return {"plane": _enc(incidence.field_plane(mv))}


def _cmd_regulus_form(payload, opt):
    mv = _dec_mv(_field(payload, "blade"), "blade", opt["exact"])
    factors = _field(payload, "factors", required=False)
    if factors is not None:
        if not isinstance(factors, list) or len(factors) != 3:
            raise KleinError(E_SCHEMA, "factors: expected three 6-vectors")
        factors = [_dec_vec(f, 6, "factors", opt["exact"]) for f in factors]
    return {"form": _enc(incidence.regulus_form(mv, factors))}


def _cmd_regulus_sample(payload, opt):
    mv = _dec_mv(_field(payload, "blade"), "blade", opt["exact"])
    n = _field(payload, "n", required=False, default=opt["samples"])
    if not isinstance(n, int) or isinstance(n, bool):
        raise KleinError(E_SCHEMA, "n: expected an integer")
    lines, exact = incidence.regulus_sample(mv, n, seed=opt["seed"])
    return {"lines": _enc(lines), "exact": exact}


def _cmd_opposite_regulus(payload, opt):
    mv = _dec_mv(_field(payload, "blade"), "blade", opt["exact"])
    dual = incidence.opposite_regulus(mv)
    return {"blade": _enc(dual.blade.mv), "surface": dual.surface}


def _cmd_complex_pitch_axis(payload, opt):
    c = _dec_vec(_field(payload, "complex"), 6, "complex", opt["exact"])
    pitch, axis, singular = klein_lines.complex_pitch_axis(c)
    return {"pitch": _enc(pitch), "axis": _enc(axis), "singular": singular}


def _cmd_sandwich(payload, opt):
    g = _dec_mv(_field(payload, "versor"), "versor", opt["exact"])
    x = _dec_mv(_field(payload, "element"), "element", opt["exact"])
    return {"element": _enc(transforms.sandwich(g, x))}


def _cmd_versor_to_matrix(payload, opt):
    g = _dec_mv(_field(payload, "versor"), "versor", opt["exact"])
    a = transforms.versor_to_matrix(g)
    return {"matrix": _enc(a.mat), "kind": a.kind}


def _cmd_matrix_to_versor(payload, opt):
    m = _dec_mat4(_field(payload, "matrix"), "matrix", opt["exact"])
    kind = _dec_kind(_field(payload, "kind"), "kind")
    versor = transforms.matrix_to_versor(ProjMatrix4(m, kind))
    return {"versor": _enc(versor.mv), "parity": versor.parity,
            "kind": versor.kind, "factors": _enc(versor.factors),
            "norm": _enc(versor.norm)}


def _cmd_decompose_null_polarities(payload, opt):
    m = _dec_mat4(_field(payload, "matrix"), "matrix", opt["exact"])
    kind = _dec_kind(_field(payload, "kind"), "kind")
    mats = transforms.decompose_null_polarities(ProjMatrix4(m, kind))
    return {"factors": _enc(mats), "count": len(mats)}


def _cmd_null_polarity(payload, opt):
    if "vector" in payload:
        a = _dec_vec(payload["vector"], 6, "vector", opt["exact"])
        return {"matrix": _enc(transforms.vector_to_null_polarity(a))}
    if "matrix" in payload:
        m = _dec_mat4(payload["matrix"], "matrix", opt["exact"])
        return {"vector": _enc(transforms.null_polarity_to_vector(m))}
    raise KleinError(E_SCHEMA, "payload needs 'vector' or 'matrix'")


def _cmd_grade1_check(payload, opt):
    g = _dec_mv(_field(payload, "element"), "element", opt["exact"])
    check = transforms.grade1_closure_check(g)
    out = {"ok": check.ok}
    if not check.ok:
        out["vector_index"] = check.vector_index
        out["residual"] = _enc(check.residual)
    return out


def _cmd_meet_lines(payload, opt):
    l1 = _dec_vec(_field(payload, "l1"), 6, "l1", opt["exact"])
    l2 = _dec_vec(_field(payload, "l2"), 6, "l2", opt["exact"])
    return {"point": _enc(incidence.meet_lines_p3(l1, l2))}


COMMANDS = {
    "embed-line": _cmd_embed_line,
    "line-from-points": _cmd_line_from_points,
    "line-from-planes": _cmd_line_from_planes,
    "omega": _cmd_omega,
    "classify-blade": _cmd_classify_blade,
    "opns": _cmd_opns,
    "ipns": _cmd_ipns,
    "bundle-vertex": _cmd_bundle_vertex,
    "field-plane": _cmd_field_plane,
    "regulus-form": _cmd_regulus_form,
    "regulus-sample": _cmd_regulus_sample,
    "opposite-regulus": _cmd_opposite_regulus,
    "complex-pitch-axis": _cmd_complex_pitch_axis,
    "sandwich": _cmd_sandwich,
    "versor-to-matrix": _cmd_versor_to_matrix,
    "matrix-to-versor": _cmd_matrix_to_versor,
    "decompose-null-polarities": _cmd_decompose_null_polarities,
    "null-polarity": _cmd_null_polarity,
    "grade1-check": _cmd_grade1_check,
    "meet-lines": _cmd_meet_lines,
}

_DEFAULT_OPTIONS = {"exact": True, "seed": 0, "samples": 5}


def _merge_options(base, extra, where="options"):
    out = dict(base)
    if extra is None:
        return out
    if not isinstance(extra, dict):
        raise KleinError(E_SCHEMA, f"{where}: expected an object")
    for key, val in extra.items():
        if key == "exact":
            if not isinstance(val, bool):
                raise KleinError(E_SCHEMA, f"{where}.exact: expected a boolean")
        elif key in ("seed", "samples"):
            if not isinstance(val, int) or isinstance(val, bool):
                raise KleinError(E_SCHEMA, f"{where}.{key}: expected an integer")
        else:
            raise KleinError(E_SCHEMA, f"{where}: unknown key {key!r}")
        out[key] = val
    return out


def run_request(request, cli_options=None):
    """Execute one request dict; always returns a response dict."""
    diagnostics = []
    try:
        if not isinstance(request, dict):
            raise KleinError(E_SCHEMA, "request must be a JSON object")
        unknown = set(request) - {"command", "payload", "options"}
        if unknown:
            raise KleinError(E_SCHEMA, f"unknown request keys {sorted(unknown)}")
        command = request.get("command")
        if not isinstance(command, str):
            raise KleinError(E_SCHEMA, "request needs a 'command' string")
        handler = COMMANDS.get(command)
        if handler is None:
            raise KleinError(E_CMD, f"unknown command {command!r}")
        payload = request.get("payload", {})
        if not isinstance(payload, dict):
            raise KleinError(E_SCHEMA, "payload must be a JSON object")
        opt = _merge_options(cli_options or _DEFAULT_OPTIONS,
                             request.get("options"))
        result = handler(payload, opt)
        if _has_float(result):
            diagnostics.append("floating fallback used")
        return {"status": "ok", "result": result, "diagnostics": diagnostics}
    except KleinError as err:
        return {"status": "error",
                "result": {"code": err.code, "message": str(err)},
                "diagnostics": diagnostics}


def _emit(response, pretty=False, out=None):
    out = out or sys.stdout
    if pretty:
        text = json.dumps(response, sort_keys=True, indent=2)
    else:
        text = json.dumps(response, sort_keys=True, separators=(",", ":"))
    print(text, file=out)


def _read_payload(source: str):
    try:
        if source == "-":
            text = sys.stdin.read()
        else:
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise KleinError(E_IO, f"cannot read payload: {exc}") from exc
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise KleinError(E_SCHEMA, f"payload is not valid JSON: {exc}") from exc
    if not isinstance(value, dict):
        raise KleinError(E_SCHEMA, "payload must be a JSON object")
    return value


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="klein33",
        description="exact line-geometry kernel over the Klein quadric")
    sub = parser.add_subparsers(dest="mode", required=True)

    run_p = sub.add_parser("run", help="execute one command")
    run_p.add_argument("command")
    run_p.add_argument("--payload", default=None,
                       help="JSON payload file, or - for stdin")

    batch_p = sub.add_parser("batch", help="newline-delimited JSON requests")
    batch_p.add_argument("file")

    sub.add_parser("selftest", help="run the acceptance suite")

    for p in (run_p, batch_p):
        p.add_argument("--exact", action=argparse.BooleanOptionalAction,
                       default=True, help="require exact payload values")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=5)
        p.add_argument("--pretty", action="store_true")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.mode == "selftest":
        results = acceptance.run_all(stream=sys.stdout)
        return 0 if all(r.passed for r in results) else 1

    cli_options = {"exact": args.exact, "seed": args.seed,
                   "samples": args.samples}

    if args.mode == "run":
        try:
            payload = _read_payload(args.payload) if args.payload else {}
            request = {"command": args.command, "payload": payload}
        except KleinError as err:
            response = {"status": "error",
                        "result": {"code": err.code, "message": str(err)},
                        "diagnostics": []}
        else:
            response = run_request(request, cli_options)
        _emit(response, args.pretty)
        return 0 if response["status"] == "ok" else 1

    # batch
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        _emit({"status": "error",
               "result": {"code": E_IO, "message": f"cannot read batch file: {exc}"},
               "diagnostics": []}, args.pretty)
        return 1
    had_error = False
    for line in lines:
        if not line.strip():
            continue
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            response = {"status": "error",
                        "result": {"code": E_SCHEMA,
                                   "message": f"bad request JSON: {exc}"},
                        "diagnostics": []}
        else:
            response = run_request(request, cli_options)
        had_error = had_error or response["status"] != "ok"
        _emit(response, args.pretty)
    return 1 if had_error else 0


if __name__ == "__main__":
    sys.exit(main())
