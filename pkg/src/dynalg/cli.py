"""Command-line front end.

Commands load a system description plus element data from JSON files,
run the library, and emit a machine-readable report.  Reports are
deterministic: identical inputs produce byte-identical output except for
the ``runtime_s`` field.  Exit code 0 means a result was computed (even
when the mathematical verdict is false); nonzero is reserved for errors.

File formats
------------

System file::

    {"group": {"elements": ["0", "1"], "table": [["0", "1"], ["1", "0"]]},
     "points": ["a", "b"],
     "action": [["a", "b"], ["b", "a"]]}

``table`` and ``action`` rows are indexed by group element, columns by
element/point, entries are labels.

Scalar literals: ``"p/q"``, ``"p/q i"``, ``"p/q sqrt r/s"``,
``"p/q i sqrt r/s"`` (integers allowed without the ``/q``), or the
object form ``{"re": "p/q", "im": "p/q", "sqrt": "r/s"}`` when both real
and imaginary parts are present.

A function on the space is ``[[point_label, scalar], ...]`` (omitted
points are zero).  A crossed-product element is
``{"coeffs": [[group_label, function], ...]}``.  Diagonal-tuple entries
on the command line are ``chi:lbl1,lbl2`` (an indicator), ``zero``, or
``@file.json`` holding a function.  Castles are
``{"towers": [{"base": [...], "shape": [...]}]}``; castle map data adds
``n``, ``weights``, and optional ``phases``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys as _sys
import time
from fractions import Fraction
from pathlib import Path

from .algebra import CrossedElement, DiagTuple, Func, MatrixElement, operator_norm
from .castles import (
    Castle,
    CastleOzmData,
    OrderZeroMap,
    TzsInstance,
    build_castle_ozm,
    check_tzs_instance,
    decompose_ozm,
    identity_embedding,
    validate_castle,
)
from .comparison import (
    Witness,
    almost_unperforation_check,
    cuntz_oracle,
    d_tau,
    diag_subequivalent,
    type_semigroup,
)
from .dynsys import DynSystem, FiniteGroup, extreme_invariant_measures, validate_system
from .errors import DynalgError, NotFree, ParseError
from .scalars import FloatScalar, RadScalar
from .witness import compile_witness, extract_witness

__all__ = ["main"]


# -- literal parsing -------------------------------------------------------


def parse_fraction(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError("bad rational literal %r: %s" % (text, exc))


_SCALAR_RE = re.compile(
    r"^\s*(?P<coeff>[+-]?\d+(?:/\d+)?)\s*(?P<imag>i)?"
    r"(?:\s*sqrt\s*(?P<rad>\d+(?:/\d+)?))?\s*$"
)


def parse_scalar(value, float_mode: bool = False):
    """Parse a scalar literal (string or object form)."""
    if isinstance(value, dict):
        re_part = parse_fraction(value.get("re", 0))
        im_part = parse_fraction(value.get("im", 0))
        rad = parse_fraction(value.get("sqrt", 1))
        out = RadScalar(re_part, im_part, rad)
    elif isinstance(value, int):
        out = RadScalar(value)
    elif isinstance(value, str):
        m = _SCALAR_RE.match(value)
        if not m:
            raise ParseError("bad scalar literal %r" % value)
        coeff = parse_fraction(m.group("coeff"))
        rad = parse_fraction(m.group("rad")) if m.group("rad") else Fraction(1)
        if m.group("imag"):
            out = RadScalar(0, coeff, rad)
        else:
            out = RadScalar(coeff, 0, rad)
    else:
        raise ParseError("bad scalar literal %r" % (value,))
    if float_mode:
        return FloatScalar(complex(out))
    return out


def format_scalar(v):
    if isinstance(v, FloatScalar):
        return {"float": repr(v.value.real), "float_imag": repr(v.value.imag)}
    if v.im == 0:
        text = str(v.re)
    elif v.re == 0:
        text = "%s i" % v.im
    else:
        return {"re": str(v.re), "im": str(v.im), "sqrt": str(v.rad)}
    if v.rad != 1:
        text += " sqrt %d" % v.rad
    return text


# -- file parsing ----------------------------------------------------------


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError("cannot read %s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise ParseError("bad JSON in %s at line %d: %s" % (path, exc.lineno, exc.msg))


def parse_system(payload) -> DynSystem:
    try:
        elements = [str(e) for e in payload["group"]["elements"]]
        table_lbl = payload["group"]["table"]
        points = [str(p) for p in payload["points"]]
        action_lbl = payload["action"]
    except (KeyError, TypeError) as exc:
        raise ParseError("system file missing field: %s" % exc)
    eidx = {e: i for i, e in enumerate(elements)}
    pidx = {p: i for i, p in enumerate(points)}
    try:
        table = [[eidx[str(v)] for v in row] for row in table_lbl]
        action = [[pidx[str(v)] for v in row] for row in action_lbl]
    except KeyError as exc:
        raise ParseError("unknown label %s in system tables" % exc)
    group = FiniteGroup(elements, table)
    return DynSystem(group, points, action)


def load_system(path: str) -> DynSystem:
    sys_obj = parse_system(_load_json(path))
    validate_system(sys_obj)
    return sys_obj


def parse_func(sys_obj: DynSystem, payload, float_mode: bool = False) -> Func:
    values = {}
    try:
        for label, scalar in payload:
            values[sys_obj.point_index(str(label))] = parse_scalar(scalar, float_mode)
    except (TypeError, ValueError) as exc:
        raise ParseError("bad function payload: %s" % exc)
    except KeyError as exc:
        raise ParseError("unknown point label %s" % exc)
    return Func.from_dict(sys_obj, values)


def func_payload(f: Func):
    return [[f.system.points[x], format_scalar(f.values[x])] for x in sorted(f.support)]


def parse_element(sys_obj: DynSystem, payload, float_mode: bool = False) -> CrossedElement:
    try:
        items = payload["coeffs"]
    except (KeyError, TypeError):
        raise ParseError("element payload needs a 'coeffs' list")
    acc = CrossedElement.zero(sys_obj)
    for label, func in items:
        try:
            g = sys_obj.group.index(str(label))
        except KeyError:
            raise ParseError("unknown group label %r" % label)
        acc = acc + CrossedElement.monomial(parse_func(sys_obj, func, float_mode), g)
    return acc


def element_payload(a: CrossedElement):
    return {
        "coeffs": [
            [a.system.group.elements[g], func_payload(a.coeffs[g])]
            for g in a.nonzero_groups
        ]
    }


def parse_diag_entry(sys_obj: DynSystem, spec: str, float_mode: bool = False) -> Func:
    if spec == "zero":
        return Func.zero(sys_obj)
    if spec.startswith("chi:"):
        labels = [s for s in spec[4:].split(",") if s]
        try:
            pts = [sys_obj.point_index(lbl) for lbl in labels]
        except KeyError as exc:
            raise ParseError("unknown point label %s" % exc)
        return Func.indicator(sys_obj, pts)
    if spec.startswith("@"):
        return parse_func(sys_obj, _load_json(spec[1:]), float_mode)
    raise ParseError("bad tuple entry %r (use chi:..., zero, or @file)" % spec)


def parse_diag_tuple(sys_obj, specs, float_mode=False) -> DiagTuple:
    if not specs:
        raise ParseError("empty diagonal tuple")
    return DiagTuple(sys_obj, tuple(parse_diag_entry(sys_obj, s, float_mode) for s in specs))


def parse_witness(sys_obj: DynSystem, payload) -> Witness:
    rows = []
    try:
        for row in payload["rows"]:
            triples = []
            for pts, glabel, k in row:
                U = frozenset(sys_obj.point_index(str(p)) for p in pts)
                triples.append((U, sys_obj.group.index(str(glabel)), int(k)))
            rows.append(tuple(triples))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("bad witness payload: %s" % exc)
    return Witness(tuple(rows))


def witness_payload(sys_obj: DynSystem, w: Witness):
    return {
        "rows": [
            [
                [sorted(sys_obj.points[x] for x in U), sys_obj.group.elements[s], k]
                for U, s, k in row
            ]
            for row in w.rows
        ]
    }


def matrix_payload(m: MatrixElement):
    return {
        "n": m.n,
        "entries": [[element_payload(m.entries[i][j]) for j in range(m.n)] for i in range(m.n)],
    }


def parse_matrix(sys_obj: DynSystem, payload, float_mode=False) -> MatrixElement:
    try:
        n = int(payload["n"])
        entries = payload["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("bad matrix payload: %s" % exc)
    rows = []
    for i in range(n):
        rows.append(
            tuple(parse_element(sys_obj, entries[i][j], float_mode) for j in range(n))
        )
    return MatrixElement(sys_obj, rows)


def parse_castle(sys_obj: DynSystem, payload) -> Castle:
    towers = []
    try:
        for tower in payload["towers"]:
            base = frozenset(sys_obj.point_index(str(p)) for p in tower["base"])
            shape = tuple(sys_obj.group.index(str(g)) for g in tower["shape"])
            towers.append((base, shape))
    except (KeyError, TypeError) as exc:
        raise ParseError("bad castle payload: %s" % exc)
    return Castle(sys_obj, tuple(towers))


def castle_payload(c: Castle):
    return {
        "towers": [
            {
                "base": sorted(c.system.points[x] for x in base),
                "shape": [c.system.group.elements[s] for s in shape],
            }
            for base, shape in c.towers
        ]
    }


def parse_ozm_data(sys_obj: DynSystem, payload, float_mode=False) -> CastleOzmData:
    castle = parse_castle(sys_obj, payload)
    try:
        n = int(payload["n"])
        weights = tuple(parse_func(sys_obj, w, float_mode) for w in payload["weights"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("bad castle data payload: %s" % exc)
    if "phases" in payload:
        phases = tuple(
            tuple(parse_func(sys_obj, th, float_mode) for th in row)
            for row in payload["phases"]
        )
        return CastleOzmData(castle=castle, weights=weights, phases=phases, n=n)
    return CastleOzmData.with_trivial_phases(castle, weights, n)


def ozm_data_payload(data: CastleOzmData):
    out = castle_payload(data.castle)
    out["n"] = data.n
    out["weights"] = [func_payload(f) for f in data.weights]
    out["phases"] = [[func_payload(th) for th in row] for row in data.phases]
    return out


def ozm_payload(phi: OrderZeroMap):
    return {
        "n": phi.n,
        "images": [
            [i, j, element_payload(phi.images[(i, j)])]
            for i in range(phi.n)
            for j in range(phi.n)
            if not phi.images[(i, j)].is_zero
        ],
    }


def parse_tzs_instance(sys_obj: DynSystem, payload, float_mode=False) -> TzsInstance:
    try:
        n = int(payload["n"])
        eps = parse_fraction(payload["epsilon"])
        F = tuple(parse_element(sys_obj, e, float_mode) for e in payload["F"])
        h = parse_func(sys_obj, payload["h"], float_mode)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("bad instance payload: %s" % exc)
    return TzsInstance(n=n, epsilon=eps, F=F, h=h)


# -- report plumbing -------------------------------------------------------


def _digest(parts) -> str:
    blob = json.dumps(parts, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def _report(command, args, inputs, result, certificates=None, margins=None, started=None):
    report = {
        "command": command,
        "inputs": {"digest": _digest(inputs)},
        "params": {
            "mode": "float" if args.float_mode else "exact",
            "tolerance": args.tolerance,
        },
        "result": result,
        "certificates": certificates or {},
        "margins": margins or {},
        "runtime_s": round(time.perf_counter() - started, 6) if started else 0.0,
    }
    return report


def _emit(report, args) -> int:
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.json_out:
        Path(args.json_out).write_text(text + "\n")
    print(text)
    return 0


# -- command handlers ------------------------------------------------------


def cmd_system_check(args) -> int:
    started = time.perf_counter()
    payload = _load_json(args.system)
    sys_obj = parse_system(payload)
    rep = validate_system(sys_obj)
    measures = extreme_invariant_measures(sys_obj)
    result = {
        "group_order": rep.group_order,
        "points": rep.n_points,
        "free": rep.free,
        "minimal": rep.minimal,
        "orbits": [[sys_obj.points[x] for x in orbit] for orbit in rep.orbits],
        "extreme_measures": [
            [str(w) for w in mu.weights] for mu in measures
        ],
    }
    return _emit(_report("system-check", args, payload, result, started=started), args)


def cmd_compare(args) -> int:
    started = time.perf_counter()
    payload = _load_json(args.system)
    sys_obj = parse_system(payload)
    validate_system(sys_obj)
    a = parse_diag_tuple(sys_obj, args.a, args.float_mode)
    b = parse_diag_tuple(sys_obj, args.b, args.float_mode)
    holds, w = diag_subequivalent(a, b)
    result = {"subequivalent": holds}
    certificates = {}
    if args.witness and w is not None:
        certificates["witness"] = witness_payload(sys_obj, w)
    measures = extreme_invariant_measures(sys_obj)
    result["d_tau"] = [
        {
            "a": [str(d_tau(f, mu)) for f in a.entries],
            "b": [str(d_tau(f, mu)) for f in b.entries],
        }
        for mu in measures
    ]
    if args.oracle:
        try:
            result["cuntz_oracle"] = cuntz_oracle(a, b, tol=args.tolerance)
        except NotFree as exc:
            raise
    if args.semigroup:
        W = type_semigroup(sys_obj, args.max_n, budget=args.budget)
        result["semigroup"] = {
            "classes": W.n_classes,
            "class_of_a": W.class_of(a),
            "class_of_b": W.class_of(b),
        }
    inputs = {"system": payload, "a": args.a, "b": args.b}
    return _emit(
        _report("compare", args, inputs, result, certificates, started=started), args
    )


def cmd_witness(args) -> int:
    started = time.perf_counter()
    payload = _load_json(args.system)
    sys_obj = parse_system(payload)
    validate_system(sys_obj)
    a = parse_diag_tuple(sys_obj, args.a, args.float_mode)
    b = parse_diag_tuple(sys_obj, args.b, args.float_mode)
    inputs = {"system": payload, "a": args.a, "b": args.b, "verb": args.verb}
    certificates = {}
    if args.verb == "extract":
        if not args.certificate:
            raise ParseError("witness extract needs --certificate")
        cert_payload = _load_json(args.certificate)
        eps = parse_fraction(cert_payload["epsilon"])
        delta = parse_fraction(cert_payload["delta"])
        t = parse_matrix(sys_obj, cert_payload["t"], args.float_mode)
        w = extract_witness(a, b, eps, delta, t)
        certificates["witness"] = witness_payload(sys_obj, w)
        result = {"extracted": True}
        return _emit(
            _report("witness-extract", args, inputs, result, certificates, started=started),
            args,
        )

    eps = parse_fraction(args.epsilon)
    if args.witness_file:
        w = parse_witness(sys_obj, _load_json(args.witness_file))
    else:
        from .comparison import search_subequivalence

        w = search_subequivalence(
            sys_obj, a.cutdown(eps).supports(), b.supports()
        )
        if w is None:
            result = {"compiled": False, "reason": "no witness exists"}
            return _emit(_report("witness-" + args.verb, args, inputs, result, started=started), args)
    cert = compile_witness(a, b, eps, w)
    certificates["certificate"] = {
        "epsilon": str(cert.epsilon),
        "delta": str(cert.delta),
        "t": matrix_payload(cert.t),
        "h": [[i, j, func_payload(f)] for (i, j), f in sorted(cert.partition_roots.items())],
        "bhat": [[l, func_payload(f)] for l, f in sorted(cert.target_inverse_roots.items())],
    }
    result = {"compiled": True, "delta": str(cert.delta)}
    if args.verb == "roundtrip":
        w2 = extract_witness(a, b, cert.epsilon, cert.delta, cert.t)
        certificates["witness"] = witness_payload(sys_obj, w2)
        result["roundtrip"] = True
    return _emit(
        _report("witness-" + args.verb, args, inputs, result, certificates, started=started),
        args,
    )


def cmd_castle(args) -> int:
    started = time.perf_counter()
    payload = _load_json(args.system)
    sys_obj = parse_system(payload)
    validate_system(sys_obj)
    inputs = {"system": payload, "verb": args.verb}
    certificates = {}
    margins = {}
    if args.verb == "validate":
        if not args.castle:
            raise ParseError("castle validate needs --castle")
        castle = parse_castle(sys_obj, _load_json(args.castle))
        inputs["castle"] = castle_payload(castle)
        result = {"valid": validate_castle(castle)}
    elif args.verb == "build-ozm":
        if not args.data:
            raise ParseError("castle build-ozm needs --data")
        data = parse_ozm_data(sys_obj, _load_json(args.data), args.float_mode)
        inputs["data"] = ozm_data_payload(data)
        phi = build_castle_ozm(data)
        certificates["map"] = ozm_payload(phi)
        result = {
            "built": True,
            "unit_image_norm": operator_norm(phi.unit_image()).value,
        }
    elif args.verb == "decompose":
        if not args.data:
            raise ParseError("castle decompose needs --data")
        data = parse_ozm_data(sys_obj, _load_json(args.data), args.float_mode)
        inputs["data"] = ozm_data_payload(data)
        phi = build_castle_ozm(data)
        recovered = decompose_ozm(phi)
        certificates["data"] = ozm_data_payload(recovered)
        result = {"decomposed": True, "towers": len(recovered.castle.towers)}
    elif args.verb == "tzs":
        if not args.instance:
            raise ParseError("castle tzs needs --instance")
        inst = parse_tzs_instance(sys_obj, _load_json(args.instance), args.float_mode)
        inputs["instance"] = _load_json(args.instance)
        if args.identity:
            phi = identity_embedding(sys_obj)
        elif args.data:
            data = parse_ozm_data(sys_obj, _load_json(args.data), args.float_mode)
            phi = build_castle_ozm(data)
        else:
            raise ParseError("castle tzs needs --data or --identity")
        report = check_tzs_instance(inst, phi)
        result = {
            "normalizer_condition": report.normalizer_condition,
            "remainder_condition": report.remainder_condition,
            "commutator_condition": report.commutator_condition,
            "all_pass": report.all_pass,
        }
        margins = {
            "max_commutator": repr(report.max_commutator),
            "bound_factor": report.commutator_bound_factor,
            "per_unit": [
                [ai, i, j, repr(v)] for ai, i, j, v in report.commutator_margins
            ],
        }
        if report.remainder_witness is not None:
            certificates["remainder_witness"] = witness_payload(
                sys_obj, report.remainder_witness
            )
    else:  # pragma: no cover - argparse restricts the choices
        raise ParseError("unknown castle verb %r" % args.verb)
    return _emit(
        _report("castle-" + args.verb, args, inputs, result, certificates, margins, started),
        args,
    )


def cmd_semigroup(args) -> int:
    started = time.perf_counter()
    payload = _load_json(args.system)
    sys_obj = parse_system(payload)
    validate_system(sys_obj)
    W = type_semigroup(sys_obj, args.max_n, budget=args.budget)
    unperforated, violation = almost_unperforation_check(W)
    result = {
        "max_n": args.max_n,
        "classes": [
            [sorted(sys_obj.points[x] for x in f.support) for f in rep.entries]
            for rep in W.classes
        ],
        "order": [[bool(v) for v in row] for row in W.order],
        "addition": [
            [W.add[(i, j)] for j in range(W.n_classes)] for i in range(W.n_classes)
        ],
        "almost_unperforated_within_bound": unperforated,
        "violation": list(violation) if violation else None,
    }
    inputs = {"system": payload, "max_n": args.max_n}
    return _emit(_report("semigroup", args, inputs, result, started=started), args)


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynalg",
        description="Exact crossed-product and dynamical-comparison computations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--system", required=True, help="system description file")
        mode = p.add_mutually_exclusive_group()
        mode.add_argument(
            "--exact", dest="float_mode", action="store_false", default=False,
            help="exact scalars (default)",
        )
        mode.add_argument(
            "--float", dest="float_mode", action="store_true",
            help="parse scalars as floats (exploratory mode)",
        )
        p.add_argument("--tolerance", type=float, default=1e-9)
        p.add_argument("--budget", type=int, default=500_000)
        p.add_argument("--json", dest="json_out", default=None, help="also write the report here")

    p = sub.add_parser("system-check", help="validate a system file")
    common(p)
    p.set_defaults(handler=cmd_system_check)

    p = sub.add_parser("compare", help="decide subequivalence of diagonal tuples")
    common(p)
    p.add_argument("--a", action="append", required=True, help="tuple entry (repeatable)")
    p.add_argument("--b", action="append", required=True, help="tuple entry (repeatable)")
    p.add_argument("--witness", action="store_true", help="include the witness")
    p.add_argument("--oracle", action="store_true", help="include the rank oracle verdict")
    p.add_argument("--semigroup", action="store_true", help="include semigroup class data")
    p.add_argument("--max-n", type=int, default=2)
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("witness", help="compile, extract, or round-trip certificates")
    p.add_argument("verb", choices=["compile", "extract", "roundtrip"])
    common(p)
    p.add_argument("--a", action="append", required=True)
    p.add_argument("--b", action="append", required=True)
    p.add_argument("--epsilon", default="1/2")
    p.add_argument("--witness-file", default=None)
    p.add_argument("--certificate", default=None, help="certificate file (extract)")
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("castle", help="castle and order-zero-map operations")
    p.add_argument("verb", choices=["validate", "build-ozm", "decompose", "tzs"])
    common(p)
    p.add_argument("--castle", default=None)
    p.add_argument("--data", default=None, help="castle map data file")
    p.add_argument("--instance", default=None, help="stability instance file")
    p.add_argument("--identity", action="store_true", help="use the identity embedding")
    p.set_defaults(handler=cmd_castle)

    p = sub.add_parser("semigroup", help="compute the type semigroup table")
    common(p)
    p.add_argument("--max-n", type=int, default=2)
    p.set_defaults(handler=cmd_semigroup)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except DynalgError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=_sys.stderr,
        )
        return 1


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
