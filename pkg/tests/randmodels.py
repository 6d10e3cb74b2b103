"""Random satisfied models and linear systems for property tests.

Geometry is drawn first; incidences are built in (points placed on planes or
lines, copied direction vectors) and every metric value is measured from the
drawn configuration, so each model's configuration is a witness.
"""
import numpy as np

from gcsa import Constraint, Entity, GcsModel, RepresentationScheme, pack_parameters, residual
from gcsa.model import CONSTRAINT_SIGNATURES

SQUARED = {"PointPointDistance", "PointLineDistance", "LineLineDistance"}
METRIC = ["PointPointDistance", "PointPlaneDistance", "PointLineDistance", "PlanePlaneDistance",
          "LineLineDistance", "VectorAngle", "Radius"]


def _unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _perp(rng, n):
    u = np.cross(n, _unit(rng))
    return u / np.linalg.norm(u)


def random_model(rng, scheme=RepresentationScheme.HOMOGENEOUS, n_entities=None,
                 n_constraints=None, collinearity="cross"):
    scheme = RepresentationScheme.parse(scheme)
    n_entities = n_entities or int(rng.integers(2, 6))
    kinds = ["Point", "Line", scheme.plane_kind, "Cylinder"]
    ents, vectors, planes, lines = [], {}, [], []
    incid = []
    for i in range(n_entities):
        eid = f"G{i + 1}"
        kind = kinds[int(rng.integers(len(kinds)))]
        vec = _unit(rng)
        if vectors and rng.random() < 0.35:
            other = list(vectors)[int(rng.integers(len(vectors)))]
            vec = vectors[other] * (1 if rng.random() < 0.5 else -1)
            if kind != "Point":
                incid.append(Constraint(f"par_{eid}_{other}", "VectorParallel", (eid, other)))
        anchor = rng.uniform(-2, 2, 3)
        if kind != scheme.plane_kind and planes and rng.random() < 0.3:
            pid, pn, pp = planes[int(rng.integers(len(planes)))]
            anchor = pp + 1.5 * rng.uniform(-1, 1) * _perp(rng, pn) + rng.uniform(-1, 1) * _perp(rng, pn)
            incid.append(Constraint(f"on_{eid}_{pid}", "PointOnPlane", (eid, pid)))
        elif kind != scheme.plane_kind and lines and rng.random() < 0.3:
            lid, lp, ld = lines[int(rng.integers(len(lines)))]
            anchor = lp + rng.uniform(-2, 2) * ld
            incid.append(Constraint(f"online_{eid}_{lid}", "PointOnLine", (eid, lid)))
        if kind == "Point":
            params = tuple(anchor)
        elif kind == "PlaneHomogeneous":
            params = tuple(vec) + (float(-vec @ anchor),)
        elif kind == "Cylinder":
            params = tuple(anchor) + tuple(vec) + (float(rng.uniform(0.2, 2.0)),)
        else:
            params = tuple(anchor) + tuple(vec)
        ents.append(Entity(eid, kind, params))
        if kind != "Point":
            vectors[eid] = vec
        if kind in ("PlaneHomogeneous", "PlanePointNormal"):
            planes.append((eid, vec, anchor))
        if kind in ("Line", "Cylinder"):
            lines.append((eid, anchor, vec))

    kind_of = {e.id: e.kind for e in ents}
    pool = []
    for ck in METRIC:
        sig, _ = CONSTRAINT_SIGNATURES[ck]
        if len(sig) == 1:
            pool += [(ck, (a,)) for a in kind_of if kind_of[a] in sig[0]]
        else:
            pool += [(ck, (a, b)) for a in kind_of for b in kind_of
                     if a != b and kind_of[a] in sig[0] and kind_of[b] in sig[1]]
    if "PlanePlaneDistance" in dict(pool) and scheme is RepresentationScheme.HOMOGENEOUS:
        # offset difference is a distance only for co-oriented normals
        pool = [p for p in pool if p[0] != "PlanePlaneDistance"
                or np.allclose(vectors[p[1][0]], vectors[p[1][1]])]
    n_constraints = n_constraints if n_constraints is not None else int(rng.integers(1, 8))
    picks = rng.permutation(len(pool))[:n_constraints] if pool else []
    probe = [Constraint(f"m{k}_{pool[i][0]}", pool[i][0], pool[i][1], 0.0) for k, i in enumerate(picks)]

    model = GcsModel.create(ents, incid + probe, scheme, collinearity)
    if probe:
        r = residual(model, pack_parameters(model))
        by_id = {}
        for (cid, _), v in zip(r.rowmap, r.values):
            by_id[cid] = v
        measured = []
        for c in probe:
            v = by_id[c.id]
            v = float(np.sqrt(max(v, 0.0))) if c.kind in SQUARED else float(v)
            measured.append(Constraint(c.id, c.kind, c.refs, v))
        model = GcsModel.create(ents, incid + measured, scheme, collinearity)
    return model


def random_linear(rng, max_rows=10, max_cols=6):
    """Small integer system, often rank-deficient, so circuits are common."""
    m = int(rng.integers(2, max_rows + 1))
    n = int(rng.integers(1, max_cols + 1))
    r = int(rng.integers(1, min(m, n) + 1))
    A = rng.integers(-3, 4, (m, r)) @ rng.integers(-2, 3, (r, n))
    if rng.random() < 0.3:
        A[int(rng.integers(m))] = 0
    b = rng.integers(-3, 4, m)
    return A.astype(float), b.astype(float)
