"""JSON model files.

Geometric model::

    {"scheme": "homogeneous" | "point-normal",
     "collinearity": "cross" | "t-form",            (optional, default "cross")
     "entities": [{"id", "kind", "params": [...]}],
     "constraints": [{"id", "kind", "refs": [...], "value": ...}]}

Raw linear system::

    {"linear": {"A": [[...]], "b": [...]}}

UnitNorm constraints are implicit and rejected when present in a file.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .linear import LinearSystem
from .model import Constraint, Entity, GcsModel, RepresentationScheme


def load_model(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    return loads_model(text, source=str(path))


def loads_model(text, source="<string>"):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object")
    if "linear" in data:
        return _linear(data["linear"], source)
    return _model(data, source)


def _linear(obj, source):
    if not isinstance(obj, dict) or "A" not in obj or "b" not in obj:
        raise ParseError(f"{source}: field 'linear' needs 'A' and 'b'")
    try:
        return LinearSystem(obj["A"], obj["b"])
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{source}: linear system: {exc}") from exc


def _model(data, source):
    problems = []
    for key in ("entities", "constraints"):
        if not isinstance(data.get(key, []), list):
            raise ParseError(f"{source}: field {key!r} must be a list")
    try:
        scheme = RepresentationScheme.parse(data.get("scheme", "homogeneous"))
    except ValueError as exc:
        raise ValidationError(f"{source}: field 'scheme': {exc}") from exc

    entities = []
    for i, e in enumerate(data.get("entities", [])):
        where = f"{source}: entities[{i}]"
        if not isinstance(e, dict):
            raise ParseError(f"{where}: must be an object")
        missing = [k for k in ("id", "kind", "params") if k not in e]
        if missing:
            problems.append(f"{where}: missing field(s) {', '.join(missing)}")
            continue
        try:
            entities.append(Entity(str(e["id"]), str(e["kind"]), tuple(e["params"])))
        except (TypeError, ValueError):
            problems.append(f"{where}: field 'params' must be a list of numbers")

    constraints = []
    for i, c in enumerate(data.get("constraints", [])):
        where = f"{source}: constraints[{i}]"
        if not isinstance(c, dict):
            raise ParseError(f"{where}: must be an object")
        missing = [k for k in ("id", "kind", "refs") if k not in c]
        if missing:
            problems.append(f"{where}: missing field(s) {', '.join(missing)}")
            continue
        if c["kind"] == "UnitNorm":
            problems.append(f"{where} ({c['id']!r}): implicit constraint supplied explicitly "
                            f"(UnitNorm is injected on load)")
            continue
        try:
            constraints.append(Constraint(str(c["id"]), str(c["kind"]), tuple(c["refs"]),
                                          c.get("value"), float(c.get("scale", 1.0))))
        except (TypeError, ValueError):
            problems.append(f"{where}: field 'value' must be a number")
    if problems:
        raise ValidationError(problems)
    return GcsModel.create(entities, constraints, scheme, data.get("collinearity", "cross"))


def model_to_dict(model):
    if isinstance(model, LinearSystem):
        return {"linear": {"A": model.A.tolist(), "b": model.b.tolist()}}
    out = {"scheme": model.scheme.value}
    if model.collinearity != "cross":
        out["collinearity"] = model.collinearity
    out["entities"] = [{"id": e.id, "kind": e.kind, "params": list(e.params)} for e in model.entities]
    cons = []
    for c in model.user_constraints:
        d = {"id": c.id, "kind": c.kind, "refs": list(c.refs)}
        if c.value is not None:
            d["value"] = c.value
        if c.scale != 1.0:
            d["scale"] = c.scale
        cons.append(d)
    out["constraints"] = cons
    return out


def dumps_model(model):
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays for json.dumps."""
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj
