"""Command-line front end.

JSON reports go to stdout (or ``-o``), human-readable lines to stderr.
Exit codes: 0 success, 1 semantic failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import constructions as cons
from .errors import (
    ConstructionFailed,
    DSPError,
    ExtDimensionMismatch,
    NotDiagonalizable,
    SchemaError,
    SizeLimit,
)
from .io import class_file_model, dumps, load_json, parse_class_file, parse_tuple_file, tuple_file_model
from .relations import DEFAULT_BUDGET, check_global_condition, enumerate_relations
from .scalar import parse_scalar
from .spectra import (
    check_inequalities,
    class_jnf_tuple,
    d_of_jnf,
    delta_min_rank_sum,
    expected_dimension,
    kappa,
    necessary_condition,
    r_of_jnf,
)
from .subspaces import invariant_subspaces
from .tuples import (
    algebra_dimension,
    centralizer_dimension,
    tangent_dimension,
    verify_tuple,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _say(msg):
    print(msg, file=sys.stderr)


def _emit(obj, output):
    text = dumps(obj)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path):
    try:
        return load_json(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


# --------------------------------------------------------------------------
# check / relations


def _relation_json(w):
    return {"cardinality": w.cardinality, "sets": [list(s) for s in w.sets],
            "splits": [list(s) for s in w.splits]}


def _trail_json(trail):
    return [
        {"n": t.n, "jnfs": [[{"id": str(eid), "blocks": list(b)} for eid, b in j.entries] for j in t]}
        for t in trail
    ]


def cmd_check(args):
    _, n, classes = parse_class_file(_load(args.classfile), args.flavor)
    t = class_jnf_tuple(classes)
    global_ok = check_global_condition(classes)
    alpha, beta, omega = check_inequalities(t)
    try:
        relations = enumerate_relations(classes, args.max_card, args.budget)
        rel = {"generic": not relations, "count": len(relations),
               "witnesses": [_relation_json(w) for w in relations]}
    except SizeLimit as exc:
        relations = None
        rel = {"error": str(exc)}
    report = necessary_condition(t, generic=relations == [])
    delta = delta_min_rank_sum(classes)
    out = {
        "n": n,
        "flavor": classes[0].flavor,
        "global_condition": global_ok,
        "inequalities": {"alpha": alpha, "beta": beta, "omega": omega},
        "kappa": report.kappa,
        "expected_dimension": expected_dimension(t),
        "necessary": {
            "verdict": report.describe(),
            "final_n": report.final_n,
            "generic_sufficient": report.generic_sufficient,
            "trail": _trail_json(report.trail),
        },
        "relations": rel,
        "delta": {
            "min": delta.min_value,
            "bound": 2 * n,
            "holds": delta.holds,
            "witness": [None if x is None else str(x) for x in delta.witness],
        },
    }
    passed = global_ok and report.satisfied
    out["necessary_conditions_pass"] = passed
    _emit(out, args.output)
    _say(f"global trace/determinant condition: {'ok' if global_ok else 'FAIL'}")
    _say(f"alpha={alpha} beta={beta} omega={omega} kappa={report.kappa} "
         f"expected dimension={out['expected_dimension']}")
    _say("reduction sizes: " + " -> ".join(str(s.n) for s in report.trail))
    _say(f"necessary condition: {report.describe()}")
    if relations is None:
        _say(f"relations: {rel['error']}")
    else:
        _say(f"relations: {len(relations)}" + (" (generic)" if not relations else ""))
    _say(f"delta: min rank sum {delta.min_value} vs 2n = {2 * n} ({'ok' if delta.holds else 'fails'})")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_relations(args):
    _, _, classes = parse_class_file(_load(args.classfile), args.flavor)
    try:
        relations = enumerate_relations(classes, args.max_card, args.budget)
    except SizeLimit as exc:
        _say(str(exc))
        return EXIT_FAIL
    _emit({"generic": not relations, "count": len(relations),
           "witnesses": [_relation_json(w) for w in relations]}, args.output)
    _say(f"{len(relations)} relation(s)")
    return EXIT_OK


# --------------------------------------------------------------------------
# tuple analysis


def analyze(t, max_dim=2):
    """Every verification the tuple admits, as a JSON-ready dict."""
    rep = verify_tuple(t)
    alg = algebra_dimension(t)
    out = {
        "n": t.n,
        "constraint": rep.constraint_ok,
        "membership": list(rep.membership_ok) if t.classes is not None else None,
        "centralizer": centralizer_dimension(t),
        "algebra_dimension": alg,
        "irreducible": alg == t.n * t.n,
        "invariant_subspaces": None,
        "tangent": None,
    }
    if t.classes is not None:
        note = None
        try:
            subs = invariant_subspaces(t, max_dim)
        except NotDiagonalizable:
            subs = invariant_subspaces(t, 1)
            note = "dimension 2 skipped: classes are not diagonalizable"
        out["invariant_subspaces"] = {
            "note": note,
            "found": [
                {"dim": s.dim, "kind": s.kind,
                 "eigenvalues": [_pair_str(e) for e in s.eigenvalues],
                 "basis": [[str(x) for x in v] for v in s.basis]}
                for s in subs
            ],
        }
        if rep.ok:
            td = tangent_dimension(t)
            out["tangent"] = {"direct": td.direct, "formula": td.formula, "agree": td.agree}
    return out


def _pair_str(e):
    if isinstance(e, tuple):
        return [str(x) for x in e]
    return str(e)


def _membership_lines(t, analysis):
    lines = []
    if analysis["membership"] is None:
        return lines
    for j, (ok, a, c) in enumerate(zip(analysis["membership"], t.matrices, t.classes)):
        if not ok:
            why = " (scalar limit)" if a.is_scalar() and not c.is_scalar() else ""
            lines.append(f"membership c{j + 1}: FAIL{why}")
    return lines


def _summary(t, analysis):
    parts = [f"constraint={'ok' if analysis['constraint'] else 'FAIL'}"]
    if analysis["membership"] is not None:
        parts.append("membership=" + ("ok" if all(analysis["membership"]) else "FAIL"))
    parts.append(f"centralizer={analysis['centralizer']}")
    parts.append(f"irreducible={str(analysis['irreducible']).lower()}")
    tan = analysis["tangent"]
    if tan is not None:
        parts.append(f"tangent={tan['direct']}" + ("" if tan["agree"] else f" (formula {tan['formula']})"))
    return [", ".join(parts)] + _membership_lines(t, analysis)


def _expectation_failures(expect, analysis):
    failures = []
    for key, want in expect.items():
        if key == "membership":
            have = analysis["membership"]
            if have is None:
                failures.append("membership: no classes to check against")
                continue
            ok = (all(have) == want) if isinstance(want, bool) else (have == want)
        elif key == "tangent":
            tan = analysis["tangent"]
            have = None if tan is None else tan["direct"]
            ok = have == want
        elif key == "tangent_agree":
            tan = analysis["tangent"]
            have = None if tan is None else tan["agree"]
            ok = have == want
        else:
            have = analysis[key]
            ok = have == want
        if not ok:
            if key == "irreducible" and want and not have:
                failures.append(_reducible_reason(analysis))
            else:
                failures.append(f"{key}: expected {want}, found {have}")
    return failures


def _reducible_reason(analysis):
    subs = analysis["invariant_subspaces"]
    if subs and subs["found"]:
        d = min(s["dim"] for s in subs["found"])
        return f"reducible: found {d}-dim invariant"
    return f"reducible: algebra dimension {analysis['algebra_dimension']} < {analysis['n'] ** 2}"


def cmd_verify(args):
    classes_obj = _load(args.classes) if args.classes else None
    t, expect = parse_tuple_file(_load(args.tuplefile), classes_obj, args.flavor)
    analysis = analyze(t)
    failures = _expectation_failures(expect, analysis)
    analysis["expectations"] = {"declared": expect, "failures": failures}
    _emit(analysis, args.output)
    for line in _summary(t, analysis):
        _say(line)
    for f in failures:
        _say(f)
    return EXIT_FAIL if failures else EXIT_OK


# --------------------------------------------------------------------------
# construct


def _data(params):
    if "lambdas" in params or "mus" in params:
        lam = [parse_scalar(str(x)) for x in params.get("lambdas", [])]
        mu = [parse_scalar(str(x)) for x in params.get("mus", [])]
        return cons.SpectralData2x2(tuple(lam), tuple(mu))
    return cons.SAMPLE_DATA


def _int(params, key, default):
    value = params.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"parameter {key!r} must be an integer")
    return value


def _sec4_setup(params, args):
    n = _int(params, "n", 4)
    p = _int(params, "p", 5)
    seed = args.seed if args.seed is not None else _int(params, "seed", 0)
    budget = args.budget if args.budget is not None else 64
    if n != 4:
        raise SchemaError("only n = 4 is constructible (the inner block must be 2 x 2)")
    inst = cons.make_sec4_instance(n, p, seed, params.get("m"), budget=budget)
    inner = cons.build_2x2_tuple(inst.star_classes(), seed=seed, budget=budget)
    return inst, inner


def _construct(kind, params, args):
    if kind == "exB":
        return cons.build_exB(_data(params), parse_scalar(str(params.get("u", "1"))))
    if kind == "exH":
        return cons.build_exH(_int(params, "l", 1), _data(params), bool(params.get("permuted", False)))
    if kind == "HB":
        n, s = _int(params, "n", 5), _int(params, "s", 0)
        us = params.get("u", list(range(1, s + 1)))
        if not isinstance(us, list):
            raise SchemaError("parameter 'u' must be a list")
        seed = args.seed if args.seed is not None else params.get("seed")
        return cons.build_HB_point(s, _data(params), n, [parse_scalar(str(u)) for u in us], seed)
    if kind == "sec3":
        variant = params.get("variant", "V1")
        if variant not in cons.SEC3_VARIANTS:
            raise SchemaError(f"variant must be one of {', '.join(cons.SEC3_VARIANTS)}")
        eps = params.get("eps")
        return cons.build_sec3(variant, None if eps is None else parse_scalar(str(eps)))
    if kind == "sec4":
        return _sec4_setup(params, args)[1]
    if kind == "extend":
        side = params.get("side", "left")
        inst, inner = _sec4_setup(params, args)
        ext = cons.extend_propH(inner, inst.mus, side)
        _say(f"dim L = {ext.dim_l}, dim N = {ext.dim_n}, quotient = {ext.dim_l - ext.dim_n}")
        return ext.tuple
    raise SchemaError(f"unknown kind {kind!r}")


def _parse_params(args):
    params = {}
    if args.params:
        loaded = _load(args.params)
        if not isinstance(loaded, dict):
            raise SchemaError("parameter file must hold a JSON object")
        params.update(loaded)
    for item in args.assignments:
        if "=" not in item:
            raise SchemaError(f"expected key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            params[key] = json.loads(raw)
        except json.JSONDecodeError:
            params[key] = raw
    return params


def cmd_construct(args):
    params = _parse_params(args)
    try:
        t = _construct(args.kind, params, args)
    except ConstructionFailed as exc:
        _say(f"construction failed: {exc}")
        if exc.witness is not None:
            _say("witness: " + json.dumps(tuple_file_model(exc.witness)["matrices"]))
        return EXIT_FAIL
    except ExtDimensionMismatch as exc:
        _say(f"construction failed: {exc} (dim L = {exc.dim_l}, dim N = {exc.dim_n})")
        return EXIT_FAIL
    analysis = analyze(t)
    expect = {
        "constraint": analysis["constraint"],
        "membership": analysis["membership"],
        "centralizer": analysis["centralizer"],
        "irreducible": analysis["irreducible"],
    }
    if analysis["tangent"] is not None:
        expect["tangent"] = analysis["tangent"]["direct"]
    _emit(tuple_file_model(t, expect), args.output)
    for line in _summary(t, analysis):
        _say(line)
    return EXIT_OK


# --------------------------------------------------------------------------
# dims


def _sec4_params(raw):
    if os.path.exists(raw):
        params = _load(raw)
    else:
        try:
            params = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"--sec4 expects a parameter file or inline JSON: {raw!r}") from exc
    if not isinstance(params, dict):
        raise SchemaError("--sec4 parameters must be a JSON object")
    return params


def cmd_dims(args):
    if args.hb:
        try:
            n, s = (int(x) for x in args.hb)
        except ValueError as exc:
            raise InputError("--hb expects two integers") from exc
        d = cons.hb_stratum_dims(n, s)
        out = {"kind": "HB", **d.as_dict()}
        _say(f"dim HB_{s} = n^2 + s - 1 = {d.dim_hb} (Sigma {d.dim_sigma} + transversal {d.dim_transversal})")
        if d.top_stratum_alt is not None:
            _say(f"n^2 + (n-3)/2 = {d.top_stratum_alt}")
    elif args.sec4:
        params = _sec4_params(args.sec4)
        n = _int(params, "n", 4)
        if "rs" in params:
            rs = params["rs"]
        else:
            m = cons._sec4_shape(n, _int(params, "p", 5), params.get("m"))
            rs = [n - x for x in m]
        d = cons.sec4_stratum_dims(n, rs)
        out = {"kind": "sec4", **d.as_dict()}
        _say(f"dim U = {d.dim_u}, dim W = {d.dim_w}, expected = {d.expected}, kappa = {d.kappa}")
        _say(f"audit: u' = {d.u_prime}, u* = {d.u_star}, transversals {d.transversal_u} and {d.transversal_w}")
    elif args.classfile:
        _, n, classes = parse_class_file(_load(args.classfile), args.flavor)
        t = class_jnf_tuple(classes)
        out = {
            "kind": "classes",
            "n": n,
            "r": [r_of_jnf(j) for j in t],
            "d": [d_of_jnf(j) for j in t],
            "kappa": kappa(t),
            "expected": expected_dimension(t),
        }
        _say(f"kappa = {out['kappa']}, expected dimension = {out['expected']}")
    else:
        raise InputError("dims needs a class file, --hb N S or --sec4 PARAMS")
    _emit(out, args.output)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="dsvariety", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("-o", "--output", help="write the JSON report here instead of stdout")
        p.add_argument("--flavor", choices=["additive", "multiplicative"], help="override the file's flavor")
        p.add_argument("--budget", type=int, default=None, help="relation enumeration / retry budget")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--max-card", type=int, default=None, help="largest relation cardinality to search")

    p = sub.add_parser("check", help="necessary conditions for a class file")
    p.add_argument("classfile")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("relations", help="non-genericity relations of a class file")
    p.add_argument("classfile")
    common(p)
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("construct", help="build an explicit tuple")
    p.add_argument("kind", choices=["exB", "exH", "HB", "sec3", "sec4", "extend"])
    p.add_argument("assignments", nargs="*", metavar="key=value", help="parameters (values parsed as JSON)")
    p.add_argument("--params", help="JSON file with parameters")
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="analyze a tuple file")
    p.add_argument("tuplefile")
    p.add_argument("classfile", nargs="?", default=None, help="class file (overrides inline classes)")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dims", help="dimension formulas")
    p.add_argument("classfile", nargs="?")
    p.add_argument("--hb", nargs=2, metavar=("N", "S"))
    p.add_argument("--sec4", metavar="PARAMS")
    common(p)
    p.set_defaults(func=cmd_dims)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if getattr(args, "budget", None) is None and args.command in ("check", "relations"):
        args.budget = DEFAULT_BUDGET
    if args.command == "verify":
        args.classes = args.classfile
    try:
        return args.func(args)
    except InputError as exc:
        _say(f"error: {exc}")
    except (DSPError, ValueError) as exc:
        _say(f"error: {type(exc).__name__}: {exc}")
    return EXIT_INPUT


__all__ = ["main", "build_parser", "analyze", "class_file_model"]
