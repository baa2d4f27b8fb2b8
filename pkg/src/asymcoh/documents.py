"""JSON documents: model files in, reports out.

Rationals travel as strings, ``"p/q"`` or ``"p"``, so nothing is lost to
floating point. Plain JSON integers are accepted on input too.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from decimal import Decimal, localcontext
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from .abelian import AbelianModel, HermitianForm
from .core import Sentinel
from .exactlin import to_fraction
from .surface import ModelValidationError, SurfaceModel

RATIONAL_PATTERN = r"^-?[0-9]+(/[0-9]*[1-9][0-9]*)?$"

_rational = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": RATIONAL_PATTERN},
    ]
}
_vector = {"type": "array", "items": _rational}
_matrix = {"type": "array", "items": _vector}

SURFACE_SCHEMA = {
    "type": "object",
    "required": ["kind", "rank", "gram", "curves", "cone", "ample"],
    "properties": {
        "kind": {"const": "surface"},
        "name": {"type": "string"},
        "rank": {"type": "integer", "minimum": 1},
        "basis": {"type": "array", "items": {"type": "string"}},
        "gram": _matrix,
        "curves": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "coords"],
                "properties": {"name": {"type": "string"}, "coords": _vector},
            },
        },
        "cone": {
            "oneOf": [
                {
                    "type": "object",
                    "required": ["mode", "mori"],
                    "properties": {"mode": {"const": "polyhedral"}, "mori": _matrix},
                },
                {
                    "type": "object",
                    "required": ["mode"],
                    "properties": {"mode": {"const": "quadric"}},
                },
            ]
        },
        "ample": _vector,
    },
}

ABELIAN_SCHEMA = {
    "type": "object",
    "required": ["kind", "g", "basis_forms", "lattice"],
    "properties": {
        "kind": {"const": "abelian"},
        "name": {"type": "string"},
        "g": {"type": "integer", "minimum": 1},
        "basis": {"type": "array", "items": {"type": "string"}},
        "basis_forms": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["re"],
                "properties": {"re": _matrix, "im": _matrix},
            },
        },
        "lattice": _matrix,
    },
}

_exact_vector = {
    "type": "object",
    "required": ["exact", "decimal"],
    "properties": {
        "exact": {"type": "array", "items": {"type": "string", "pattern": RATIONAL_PATTERN}},
        "decimal": {"type": "array", "items": {"type": "string"}},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "model"],
    "properties": {
        "command": {"enum": ["flag", "surface", "abelian", "check"]},
        "model": {"type": "string"},
        "class": {"type": "array", "items": {"type": "string", "pattern": RATIONAL_PATTERN}},
        "chamber": {},
        "h": _exact_vector,
        "certificates": {"type": "object"},
        "oracle": {"type": "object"},
        "chambers": {"type": "array"},
        "suites": {"type": "object"},
        "passed": {"type": "boolean"},
    },
}


class DocumentError(ValueError):
    """Unparseable or schema-violating input (CLI exit code 2)."""


def rational_str(q) -> str:
    q = to_fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def decimal_str(q) -> str:
    q = to_fraction(q)
    with localcontext() as ctx:
        ctx.prec = 6
        d = Decimal(q.numerator) / Decimal(q.denominator)
    return f"{d:g}"


def exact_vector(v) -> dict:
    return {"exact": [rational_str(a) for a in v], "decimal": [decimal_str(a) for a in v]}


def parse_rational_list(text: str) -> tuple:
    """``"3,-1/2,0"`` -> Fractions. No spaces allowed."""
    if not text:
        raise DocumentError("empty class")
    parts = text.split(",")
    for p in parts:
        if not re.fullmatch(RATIONAL_PATTERN, p):
            raise DocumentError(f"bad rational {p!r} in {text!r}")
    return tuple(Fraction(p) for p in parts)


def jsonable(obj):
    """Recursively turn Fractions and sentinels into strings."""
    if isinstance(obj, Fraction):
        return rational_str(obj)
    if isinstance(obj, Sentinel):
        return obj.name
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def dumps(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def validate_report(doc: dict) -> None:
    jsonschema.validate(doc, REPORT_SCHEMA)


def load_report(text: str) -> dict:
    """Parse and schema-check a report; ``h`` and ``class`` come back as Fractions."""
    doc = json.loads(text)
    validate_report(doc)
    if "h" in doc:
        doc["h"]["exact"] = [Fraction(a) for a in doc["h"]["exact"]]
    if "class" in doc:
        doc["class"] = [Fraction(a) for a in doc["class"]]
    return doc


# --- models -------------------------------------------------------------------


def _vec(v):
    return tuple(to_fraction(a) for a in v)


def _mat(m):
    return [list(_vec(r)) for r in m]


def model_from_document(doc: dict):
    """Build a surface or abelian model; schema errors raise :class:`DocumentError`.

    Inconsistent but well-formed data raises
    :class:`~asymcoh.surface.ModelValidationError`.
    """
    if not isinstance(doc, dict):
        raise DocumentError("model document must be a JSON object")
    kind = doc.get("kind")
    schema = {"surface": SURFACE_SCHEMA, "abelian": ABELIAN_SCHEMA}.get(kind)
    if schema is None:
        raise DocumentError(f"unknown model kind {kind!r}")
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        raise DocumentError(f"schema violation: {exc.message}") from None
    try:
        if kind == "surface":
            r = doc["rank"]
            if len(doc["gram"]) != r:
                raise DocumentError("gram size does not match rank")
            cone = doc["cone"]
            return SurfaceModel(
                gram=_mat(doc["gram"]),
                curves=[(c["name"], _vec(c["coords"])) for c in doc["curves"]],
                ample=_vec(doc["ample"]),
                mori=[_vec(g) for g in cone.get("mori", [])],
                cone_mode=cone["mode"],
                basis_labels=doc.get("basis"),
                name=doc.get("name", "surface"),
            )
        forms = [HermitianForm.from_lists(_mat(f["re"]), _mat(f["im"]) if "im" in f else None)
                 for f in doc["basis_forms"]]
        return AbelianModel(doc["g"], forms, _mat(doc["lattice"]),
                            basis_labels=doc.get("basis"), name=doc.get("name", "abelian"))
    except (DocumentError, ModelValidationError):
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(str(exc)) from None


def load_model(path: str | os.PathLike):
    try:
        text = Path(path).read_text(encoding="utf-8")
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise DocumentError(f"cannot read model file {path}: {exc}") from None
    return model_from_document(doc)


PRESETS = ("bl1p2", "bl2p2", "exe", "elliptic")


def preset_path(name: str) -> Path:
    if name not in PRESETS:
        raise DocumentError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return Path(str(resources.files("asymcoh") / "data" / f"{name}.json"))


def load_preset(name: str):
    return load_model(preset_path(name))
