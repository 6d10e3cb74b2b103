"""Geometric entities, constraints and the model <-> parameter vector mapping.

Parameter layouts per entity kind::

    Point             p(3)
    Line              p(3) d(3)
    PlaneHomogeneous  a b c d          (plane a*x + b*y + c*z + d = 0)
    PlanePointNormal  p(3) n(3)
    Cylinder          p(3) d(3) r

Every entity carrying a direction or normal gets exactly one implicit
``UnitNorm`` constraint; those are injected by :meth:`GcsModel.create` and
are never written to model files.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import DegenerateEntityError, LayoutError, ValidationError

PARAM_COUNTS = {
    "Point": 3,
    "Line": 6,
    "PlaneHomogeneous": 4,
    "PlanePointNormal": 6,
    "Cylinder": 7,
}

# entity kind -> slice of its anchor point / direction-or-normal vector
ANCHOR = {
    "Point": slice(0, 3),
    "Line": slice(0, 3),
    "PlanePointNormal": slice(0, 3),
    "Cylinder": slice(0, 3),
}
VECTOR = {
    "Line": slice(3, 6),
    "PlaneHomogeneous": slice(0, 3),
    "PlanePointNormal": slice(3, 6),
    "Cylinder": slice(3, 6),
}

POINTLIKE = frozenset(ANCHOR)
VECTORLIKE = frozenset(VECTOR)
PLANES = frozenset({"PlaneHomogeneous", "PlanePointNormal"})
LINELIKE = frozenset({"Line", "Cylinder"})

# constraint kind -> (allowed kinds per ref, needs value)
CONSTRAINT_SIGNATURES = {
    "PointPointDistance": ((POINTLIKE, POINTLIKE), True),
    "PointPlaneDistance": ((POINTLIKE, PLANES), True),
    "PointLineDistance": ((POINTLIKE, LINELIKE), True),
    "PlanePlaneDistance": ((PLANES, PLANES), True),
    "LineLineDistance": ((LINELIKE, LINELIKE), True),
    "VectorAngle": ((VECTORLIKE, VECTORLIKE), True),
    "VectorParallel": ((VECTORLIKE, VECTORLIKE), False),
    "PointOnPlane": ((POINTLIKE, PLANES), False),
    "PointOnLine": ((POINTLIKE, LINELIKE), False),
    "Coaxial": ((LINELIKE, LINELIKE), False),
    "Radius": ((frozenset({"Cylinder"}),), True),
    "UnitNorm": ((VECTORLIKE,), False),
}

NORM_EPS = 1e-9


class RepresentationScheme(str, Enum):
    HOMOGENEOUS = "homogeneous"
    POINT_NORMAL = "point-normal"

    @property
    def plane_kind(self):
        if self is RepresentationScheme.HOMOGENEOUS:
            return "PlaneHomogeneous"
        return "PlanePointNormal"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"homogeneous": cls.HOMOGENEOUS, "rep1": cls.HOMOGENEOUS,
                   "point-normal": cls.POINT_NORMAL, "pointnormal": cls.POINT_NORMAL,
                   "rep2": cls.POINT_NORMAL}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown representation scheme {value!r}") from None


COLLINEARITY_MODES = ("cross", "t-form")


@dataclass(frozen=True)
class Entity:
    id: str
    kind: str
    params: tuple

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(v) for v in self.params))

    @property
    def anchor(self):
        return np.array(self.params[ANCHOR[self.kind]])

    @property
    def vector(self):
        return np.array(self.params[VECTOR[self.kind]])


@dataclass(frozen=True)
class Constraint:
    """A constraint over entity ids.

    ``value`` holds distances in model units and angles as cosines.
    ``scale`` multiplies every residual row of the constraint; it never
    changes any discrete analysis result.
    """

    id: str
    kind: str
    refs: tuple
    value: float | None = None
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "refs", tuple(self.refs))
        if self.value is not None:
            object.__setattr__(self, "value", float(self.value))


def unit_norm_id(entity_id):
    return f"{entity_id}.unit"


@dataclass(frozen=True)
class GcsModel:
    entities: tuple
    constraints: tuple
    scheme: RepresentationScheme = RepresentationScheme.HOMOGENEOUS
    collinearity: str = "cross"
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "scheme", RepresentationScheme.parse(self.scheme))
        object.__setattr__(self, "_index", {e.id: i for i, e in enumerate(self.entities)})
        problems = _validate(self)
        if problems:
            raise ValidationError(problems)

    @classmethod
    def create(cls, entities, constraints, scheme=RepresentationScheme.HOMOGENEOUS,
               collinearity="cross"):
        """Build a model, injecting one UnitNorm per vector-carrying entity."""
        explicit = [c for c in constraints if c.kind == "UnitNorm"]
        if explicit:
            raise ValidationError(
                [f"constraint {c.id!r}: implicit constraint supplied explicitly (UnitNorm)"
                 for c in explicit])
        units = [Constraint(unit_norm_id(e.id), "UnitNorm", (e.id,))
                 for e in entities if e.kind in VECTORLIKE]
        return cls(tuple(entities), tuple(units) + tuple(constraints), scheme, collinearity)

    def entity(self, eid):
        try:
            return self.entities[self._index[eid]]
        except KeyError:
            raise LookupError(f"unknown entity {eid!r}") from None

    @property
    def entity_ids(self):
        return [e.id for e in self.entities]

    @property
    def user_constraints(self):
        return [c for c in self.constraints if c.kind != "UnitNorm"]

    def aux_constraints(self):
        """Constraints owning an auxiliary unknown (t-form collinearity)."""
        if self.collinearity != "t-form":
            return []
        return [c for c in self.constraints if c.kind == "VectorParallel"]

    def with_constraints(self, constraints):
        return replace(self, constraints=tuple(constraints))


def _validate(model):
    problems = []
    seen = set()
    for e in model.entities:
        if e.id in seen:
            problems.append(f"duplicate entity id {e.id!r}")
        seen.add(e.id)
        if e.kind not in PARAM_COUNTS:
            problems.append(f"entity {e.id!r}: unknown kind {e.kind!r}")
            continue
        if len(e.params) != PARAM_COUNTS[e.kind]:
            problems.append(f"entity {e.id!r}: {e.kind} needs {PARAM_COUNTS[e.kind]} params, "
                            f"got {len(e.params)}")
            continue
        if not np.all(np.isfinite(e.params)):
            problems.append(f"entity {e.id!r}: non-finite parameter")
        if e.kind in VECTORLIKE and np.linalg.norm(e.vector) <= NORM_EPS:
            problems.append(f"entity {e.id!r}: zero direction/normal vector")
        if e.kind in PLANES and e.kind != model.scheme.plane_kind:
            problems.append(f"entity {e.id!r}: {e.kind} does not match scheme "
                            f"{model.scheme.value!r}")
    if model.collinearity not in COLLINEARITY_MODES:
        problems.append(f"unknown collinearity mode {model.collinearity!r}")

    seen = set()
    units = {}
    for c in model.constraints:
        if c.id in seen:
            problems.append(f"duplicate constraint id {c.id!r}")
        seen.add(c.id)
        sig = CONSTRAINT_SIGNATURES.get(c.kind)
        if sig is None:
            problems.append(f"constraint {c.id!r}: unknown kind {c.kind!r}")
            continue
        allowed, needs_value = sig
        if len(c.refs) != len(allowed):
            problems.append(f"constraint {c.id!r}: {c.kind} takes {len(allowed)} refs")
            continue
        for ref, kinds in zip(c.refs, allowed):
            if ref not in model._index:
                problems.append(f"constraint {c.id!r}: unknown entity {ref!r}")
            elif model.entities[model._index[ref]].kind not in kinds:
                problems.append(f"constraint {c.id!r}: entity {ref!r} of kind "
                                f"{model.entities[model._index[ref]].kind} not allowed")
        if needs_value and c.value is None:
            problems.append(f"constraint {c.id!r}: {c.kind} requires a value")
        if c.scale == 0 or not np.isfinite(c.scale):
            problems.append(f"constraint {c.id!r}: row scale must be finite and nonzero")
        if c.kind == "UnitNorm":
            units[c.refs[0]] = units.get(c.refs[0], 0) + 1
    for e in model.entities:
        if e.kind in VECTORLIKE and units.get(e.id, 0) != 1:
            problems.append(f"entity {e.id!r}: expected exactly one UnitNorm, "
                            f"found {units.get(e.id, 0)}")
    return problems


@dataclass(frozen=True)
class Configuration:
    """Packed parameter vector.

    ``layout`` maps entity id -> (offset, length); auxiliary unknowns (one per
    t-form collinearity) follow all entity parameters, in ``aux`` order.
    """

    values: np.ndarray
    layout: dict
    aux: tuple = ()

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "aux", tuple(self.aux))

    def __len__(self):
        return len(self.values)

    @property
    def n_geometric(self):
        return len(self.values) - len(self.aux)

    def block(self, eid):
        off, n = self.layout[eid]
        return self.values[off:off + n]

    def aux_index(self, cid):
        return self.n_geometric + self.aux.index(cid)

    def with_values(self, values):
        values = np.asarray(values, dtype=float)
        if values.shape != self.values.shape:
            raise LayoutError(f"expected {self.values.shape[0]} values, got {values.shape}")
        return Configuration(values, self.layout, self.aux)


def model_layout(model):
    layout = {}
    off = 0
    for e in model.entities:
        n = PARAM_COUNTS[e.kind]
        layout[e.id] = (off, n)
        off += n
    return layout


def _t_value(model, c):
    v1 = model.entity(c.refs[0]).vector
    v2 = model.entity(c.refs[1]).vector
    return -float(v1 @ v2) / float(v2 @ v2)


def pack_parameters(model):
    """Pack entity parameters (declaration order) into a configuration."""
    parts = [np.asarray(e.params, dtype=float) for e in model.entities]
    aux_cs = model.aux_constraints()
    parts.append(np.array([_t_value(model, c) for c in aux_cs], dtype=float))
    values = np.concatenate(parts) if parts else np.zeros(0)
    return Configuration(values, model_layout(model), tuple(c.id for c in aux_cs))


def check_layout(model, x):
    expected = model_layout(model)
    aux = tuple(c.id for c in model.aux_constraints())
    n = sum(PARAM_COUNTS[e.kind] for e in model.entities) + len(aux)
    if x.layout != expected or x.aux != aux or len(x.values) != n:
        raise LayoutError(f"configuration layout does not match model "
                          f"(expected {n} values, got {len(x.values)})")


def unpack_parameters(model, x):
    """Return ``model`` with entity parameters taken from ``x``.

    Auxiliary unknowns are not stored on the model; packing recomputes them.
    """
    check_layout(model, x)
    entities = [replace(e, params=tuple(x.block(e.id).tolist())) for e in model.entities]
    return replace(model, entities=tuple(entities))


def convert_scheme(model, target):
    """Re-express every plane in ``target`` scheme, preserving its point set."""
    target = RepresentationScheme.parse(target)
    if target is model.scheme:
        return model
    entities = []
    for e in model.entities:
        if e.kind == "PlaneHomogeneous":
            n = e.vector
            nn = float(n @ n)
            if np.sqrt(nn) <= NORM_EPS:
                raise DegenerateEntityError(f"plane {e.id!r} has a zero normal")
            p = -e.params[3] * n / nn
            e = Entity(e.id, "PlanePointNormal", tuple(p) + tuple(n))
        elif e.kind == "PlanePointNormal":
            n = e.vector
            if np.linalg.norm(n) <= NORM_EPS:
                raise DegenerateEntityError(f"plane {e.id!r} has a zero normal")
            e = Entity(e.id, "PlaneHomogeneous", tuple(n) + (-float(n @ e.anchor),))
        entities.append(e)
    return replace(model, entities=tuple(entities), scheme=target)
