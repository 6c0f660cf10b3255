"""JSON layouts for class lists and matrix tuples.

Class file::

    {"version": "1", "flavor": "additive", "n": 2,
     "classes": [{"spectrum": [{"value": "t1", "mult": 1}, {"value": "2", "mult": 1}]}, ...]}

``blocks`` may accompany an entry (Jordan block sizes adding up to ``mult``);
without it the eigenvalue is semisimple.

Tuple file::

    {"version": "1", "flavor": "additive", "n": 2,
     "matrices": [[["t1", "1"], ["0", "2"]], ...],
     "classes": <class file object, optional>,
     "expect": {"irreducible": true, "centralizer": 1, ...}}

All expressions use the scalar grammar of :func:`dsvariety.scalar.parse_scalar`.
"""

from __future__ import annotations

import json

from .classes import ADDITIVE, FLAVORS, ConjugacyClassSpec
from .errors import SchemaError, ShapeMismatch
from .linalg import ExactMatrix
from .scalar import parse_scalar
from .tuples import MatrixTuple

FORMAT_VERSION = "1"
EXPECT_KEYS = ("constraint", "membership", "centralizer", "irreducible",
               "algebra_dimension", "tangent", "tangent_agree")


def _require(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise SchemaError(f"{where}: field {key!r} must be an integer")
    if not isinstance(value, kind):
        raise SchemaError(f"{where}: field {key!r} has the wrong type")
    return value


def _expr(value, where):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise SchemaError(f"{where}: expressions must be strings")
    return parse_scalar(str(value))


def _flavor(obj, override):
    flavor = override or obj.get("flavor", ADDITIVE)
    if flavor not in FLAVORS:
        raise SchemaError(f"unknown flavor {flavor!r}")
    return flavor


def parse_class_file(obj, flavor=None):
    """Class list from a decoded class file; returns ``(flavor, n, classes)``."""
    if not isinstance(obj, dict):
        raise SchemaError("class file must be a JSON object")
    flavor = _flavor(obj, flavor)
    n = _require(obj, "n", int, "class file")
    if n < 1:
        raise SchemaError("class file: n must be positive")
    raw = _require(obj, "classes", list, "class file")
    if not raw:
        raise SchemaError("class file: no classes")
    classes = []
    for ci, entry in enumerate(raw):
        where = f"class {ci + 1}"
        spectrum = []
        for item in _require(entry, "spectrum", list, where):
            value = _expr(_require(item, "value", (str, int), where), where)
            mult = _require(item, "mult", int, where)
            blocks = item.get("blocks")
            if blocks is None:
                blocks = [1] * mult
            elif (not isinstance(blocks, list) or any(isinstance(b, bool) or not isinstance(b, int) for b in blocks)
                  or sum(blocks) != mult):
                raise SchemaError(f"{where}: blocks must be integers adding up to mult")
            spectrum.append((value, tuple(blocks)))
        c = ConjugacyClassSpec(sum(sum(b) for _, b in spectrum), tuple(spectrum), flavor)
        if c.n != n:
            raise ShapeMismatch(f"{where}: sizes add up to {c.n}, not n = {n}")
        classes.append(c)
    return flavor, n, tuple(classes)


def class_file_model(classes):
    classes = tuple(classes)
    return {
        "version": FORMAT_VERSION,
        "flavor": classes[0].flavor,
        "n": classes[0].n,
        "classes": [
            {"spectrum": [_spectrum_entry(v, b) for v, b in c.spectrum]} for c in classes
        ],
    }


def _spectrum_entry(value, blocks):
    entry = {"value": str(value), "mult": sum(blocks)}
    if any(b > 1 for b in blocks):
        entry["blocks"] = list(blocks)
    return entry


def parse_tuple_file(obj, classes_obj=None, flavor=None):
    """Matrix tuple (with classes when given) and the expectation block."""
    if not isinstance(obj, dict):
        raise SchemaError("tuple file must be a JSON object")
    flavor = _flavor(obj, flavor)
    n = _require(obj, "n", int, "tuple file")
    raw = _require(obj, "matrices", list, "tuple file")
    if not raw:
        raise SchemaError("tuple file: no matrices")
    mats = []
    for mi, rows in enumerate(raw):
        where = f"matrix {mi + 1}"
        if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
            raise ShapeMismatch(f"{where}: expected {n} rows of {n} entries")
        mats.append(ExactMatrix([[_expr(x, where) for x in r] for r in rows]))
    if classes_obj is None:
        classes_obj = obj.get("classes")
    classes = None
    if classes_obj is not None:
        _, cn, classes = parse_class_file(classes_obj, flavor)
        if cn != n:
            raise ShapeMismatch(f"classes have size {cn} but the matrices are {n} x {n}")
        if len(classes) != len(mats):
            raise ShapeMismatch(f"{len(classes)} classes for {len(mats)} matrices")
    expect = obj.get("expect") or {}
    if not isinstance(expect, dict) or any(k not in EXPECT_KEYS for k in expect):
        raise SchemaError(f"expect may only contain {', '.join(EXPECT_KEYS)}")
    return MatrixTuple(tuple(mats), classes, flavor), expect


def tuple_file_model(t, expect=None):
    out = {
        "version": FORMAT_VERSION,
        "flavor": t.flavor,
        "n": t.n,
        "matrices": [[[str(x) for x in row] for row in m.tolist()] for m in t],
    }
    if t.classes is not None:
        out["classes"] = class_file_model(t.classes)
    if expect:
        out["expect"] = expect
    return out


def dumps(obj):
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
