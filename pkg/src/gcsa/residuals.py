"""Constraint residuals F(X) and their analytic Jacobian.

Residual forms (``v`` is the constraint value, ``n`` a plane normal, ``d`` a
line/cylinder direction, ``p`` an anchor point, ``q`` the constrained point)::

    PointPointDistance   |q1 - q2|^2 - v^2
    PointPlaneDistance   n.q + d - v           (homogeneous)
                         n.(q - p) - v         (point-normal)
    PointOnPlane         as above with v = 0
    PointLineDistance    |(q - p) x d|^2 - v^2
    LineLineDistance     anchor of the second line against the first, as above
    PlanePlaneDistance   d1 - d2 - v           (homogeneous, co-oriented normals)
                         n1.(p2 - p1) - v      (point-normal)
    VectorAngle          v1.v2 - cos
    VectorParallel       v1 x v2               (3 rows, rank 2 at parallel inputs)
                         v1 + t v2             (t-form, t is an auxiliary unknown)
    PointOnLine          two components of (q - p) x d
    Coaxial              d1 x d2  +  two components of (p2 - p1) x d1
    Radius               r - v
    UnitNorm             |v|^2 - 1

Signed point/plane distances follow the normal orientation. The two kept
components of a 3-vector cross condition drop the coordinate where the
stored line direction is largest, so the row structure is fixed by the model
and never switches with the evaluation point.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidStepError, UnsupportedConstraintError
from .model import ANCHOR, VECTOR, check_layout

ROW_COUNTS = {
    "PointPointDistance": 1,
    "PointPlaneDistance": 1,
    "PointLineDistance": 1,
    "PlanePlaneDistance": 1,
    "LineLineDistance": 1,
    "VectorAngle": 1,
    "VectorParallel": 3,
    "PointOnPlane": 1,
    "PointOnLine": 2,
    "Coaxial": 5,
    "Radius": 1,
    "UnitNorm": 1,
}

# kinds whose every row is a polynomial of total degree <= 2 in X
QUADRATIC_KINDS = frozenset(ROW_COUNTS) - {"PointLineDistance", "LineLineDistance"}


def scalar_equation_count(constraint):
    try:
        return ROW_COUNTS[constraint.kind]
    except KeyError:
        raise UnsupportedConstraintError(f"unsupported constraint kind {constraint.kind!r}") from None


@dataclass(frozen=True)
class ResidualVector:
    values: np.ndarray
    rowmap: list


@dataclass(frozen=True)
class JacobianMatrix:
    """Dense m x n Jacobian with row and column provenance.

    ``aux_mask`` flags auxiliary columns; they are excluded from
    :attr:`column_size`. ``implicit_dependencies`` counts row dependencies
    that are built into the equation forms (one per cross-product triple)
    rather than caused by redundant constraints.
    """

    entries: np.ndarray
    rowmap: list
    colmap: list
    aux_mask: np.ndarray = None
    implicit_dependencies: int = 0

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.ndim != 2:
            e = e.reshape(len(self.rowmap), len(self.colmap))
        object.__setattr__(self, "entries", e)
        if self.aux_mask is None:
            object.__setattr__(self, "aux_mask", np.zeros(e.shape[1], dtype=bool))

    @property
    def shape(self):
        return self.entries.shape

    @property
    def row_size(self):
        return self.entries.shape[0]

    @property
    def column_size(self):
        return int(self.entries.shape[1] - np.count_nonzero(self.aux_mask))

    @property
    def row_labels(self):
        out = []
        for cid, k in self.rowmap:
            out.append(cid if k == 0 and _single_row(self.rowmap, cid) else f"{cid}[{k}]")
        return out

    def select(self, rows=None, cols=None, implicit_dependencies=None):
        rows = np.arange(self.row_size) if rows is None else np.asarray(rows, dtype=int)
        cols = np.arange(self.entries.shape[1]) if cols is None else np.asarray(cols, dtype=int)
        return JacobianMatrix(
            self.entries[np.ix_(rows, cols)],
            [self.rowmap[i] for i in rows],
            [self.colmap[j] for j in cols],
            self.aux_mask[cols],
            self.implicit_dependencies if implicit_dependencies is None else implicit_dependencies,
        )


def _single_row(rowmap, cid):
    return sum(1 for c, _ in rowmap if c == cid) == 1


def skew(a):
    return np.array([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]])


def _cols(x, eid, sl):
    off, _ = x.layout[eid]
    return np.arange(off + sl.start, off + sl.stop)


def _dropped_axis(model, eid):
    return int(np.argmax(np.abs(model.entity(eid).vector)))


def _rows(model, c, x):
    """Residual rows of one constraint and their gradient blocks.

    Returns ``(values, [(columns, block), ...])`` with ``block`` of shape
    ``(rows, len(columns))``.
    """
    X = x.values
    kind = c.kind
    ents = [model.entity(r) for r in c.refs]

    def anchor(i):
        cols = _cols(x, c.refs[i], ANCHOR[ents[i].kind])
        return X[cols], cols

    def vector(i):
        cols = _cols(x, c.refs[i], VECTOR[ents[i].kind])
        return X[cols], cols

    if kind == "UnitNorm":
        v, cv = vector(0)
        return np.array([v @ v - 1.0]), [(cv, 2.0 * v[None, :])]

    if kind == "Radius":
        off, n = x.layout[c.refs[0]]
        return np.array([X[off + 6] - c.value]), [(np.array([off + 6]), np.ones((1, 1)))]

    if kind == "PointPointDistance":
        q1, c1 = anchor(0)
        q2, c2 = anchor(1)
        w = q1 - q2
        return np.array([w @ w - c.value ** 2]), [(c1, 2 * w[None, :]), (c2, -2 * w[None, :])]

    if kind in ("PointPlaneDistance", "PointOnPlane"):
        value = c.value if kind == "PointPlaneDistance" else 0.0
        q, cq = anchor(0)
        n, cn = vector(1)
        if ents[1].kind == "PlaneHomogeneous":
            off, _ = x.layout[c.refs[1]]
            r = n @ q + X[off + 3] - value
            return np.array([r]), [(cq, n[None, :]), (cn, q[None, :]),
                                   (np.array([off + 3]), np.ones((1, 1)))]
        p, cp = anchor(1)
        r = n @ (q - p) - value
        return np.array([r]), [(cq, n[None, :]), (cp, -n[None, :]), (cn, (q - p)[None, :])]

    if kind in ("PointLineDistance", "LineLineDistance"):
        # point = first ref's anchor for point-line, second line's anchor for line-line
        qi, li = (0, 1) if kind == "PointLineDistance" else (1, 0)
        q, cq = anchor(qi)
        p, cp = anchor(li)
        d, cd = vector(li)
        w = q - p
        cr = np.cross(w, d)
        g = 2 * np.cross(d, cr)
        return np.array([cr @ cr - c.value ** 2]), [
            (cq, g[None, :]), (cp, -g[None, :]), (cd, 2 * np.cross(cr, w)[None, :])]

    if kind == "PlanePlaneDistance":
        if ents[0].kind == "PlaneHomogeneous":
            o1, _ = x.layout[c.refs[0]]
            o2, _ = x.layout[c.refs[1]]
            r = X[o1 + 3] - X[o2 + 3] - c.value
            return np.array([r]), [(np.array([o1 + 3]), np.ones((1, 1))),
                                   (np.array([o2 + 3]), -np.ones((1, 1)))]
        p1, cp1 = anchor(0)
        n1, cn1 = vector(0)
        p2, cp2 = anchor(1)
        r = n1 @ (p2 - p1) - c.value
        return np.array([r]), [(cn1, (p2 - p1)[None, :]), (cp2, n1[None, :]), (cp1, -n1[None, :])]

    if kind == "VectorAngle":
        v1, c1 = vector(0)
        v2, c2 = vector(1)
        return np.array([v1 @ v2 - c.value]), [(c1, v2[None, :]), (c2, v1[None, :])]

    if kind == "VectorParallel":
        v1, c1 = vector(0)
        v2, c2 = vector(1)
        if model.collinearity == "t-form":
            ti = x.aux_index(c.id)
            t = X[ti]
            return v1 + t * v2, [(c1, np.eye(3)), (c2, t * np.eye(3)),
                                 (np.array([ti]), v2[:, None])]
        return np.cross(v1, v2), [(c1, -skew(v2)), (c2, skew(v1))]

    if kind == "PointOnLine":
        q, cq = anchor(0)
        p, cp = anchor(1)
        d, cd = vector(1)
        keep = [k for k in range(3) if k != _dropped_axis(model, c.refs[1])]
        w = q - p
        return np.cross(w, d)[keep], [(cq, -skew(d)[keep]), (cp, skew(d)[keep]),
                                      (cd, skew(w)[keep])]

    if kind == "Coaxial":
        p1, cp1 = anchor(0)
        d1, cd1 = vector(0)
        p2, cp2 = anchor(1)
        d2, cd2 = vector(1)
        keep = [k for k in range(3) if k != _dropped_axis(model, c.refs[0])]
        w = p2 - p1
        vals = np.concatenate([np.cross(d1, d2), np.cross(w, d1)[keep]])
        z = np.zeros((3, 3))
        blocks = [
            (cd1, np.vstack([-skew(d2), skew(w)[keep]])),
            (cd2, np.vstack([skew(d1), z[keep]])),
            (cp2, np.vstack([z, -skew(d1)[keep]])),
            (cp1, np.vstack([z, skew(d1)[keep]])),
        ]
        return vals, blocks

    raise UnsupportedConstraintError(f"unsupported constraint kind {kind!r}")


def rowmap(model):
    return [(c.id, k) for c in model.constraints for k in range(scalar_equation_count(c))]


def colmap(model, x):
    cols = []
    for e in model.entities:
        cols.extend((e.id, k) for k in range(x.layout[e.id][1]))
    cols.extend((cid, "t") for cid in x.aux)
    return cols


def residual(model, x):
    check_layout(model, x)
    vals = [c.scale * _rows(model, c, x)[0] for c in model.constraints]
    values = np.concatenate(vals) if vals else np.zeros(0)
    return ResidualVector(values, rowmap(model))


def implicit_dependencies(model):
    """One built-in row dependency per cross-product triple (the triple has
    rank 2 whenever its two vectors are parallel and nonzero)."""
    n = 0
    for c in model.constraints:
        if c.kind == "Coaxial" or (c.kind == "VectorParallel" and model.collinearity == "cross"):
            n += 1
    return n


def jacobian(model, x):
    check_layout(model, x)
    rmap = rowmap(model)
    J = np.zeros((len(rmap), len(x.values)))
    row = 0
    for c in model.constraints:
        vals, blocks = _rows(model, c, x)
        k = len(vals)
        for cols, g in blocks:
            J[row:row + k, cols] += c.scale * g
        row += k
    aux_mask = np.zeros(len(x.values), dtype=bool)
    aux_mask[x.n_geometric:] = True
    return JacobianMatrix(J, rmap, colmap(model, x), aux_mask, implicit_dependencies(model))


def fd_jacobian(model, x, h=1e-6):
    """Central-difference Jacobian; a test oracle only."""
    if not h > 0:
        raise InvalidStepError(f"finite-difference step must be positive, got {h!r}")
    check_layout(model, x)
    X = x.values
    cols = []
    for j in range(len(X)):
        xp = X.copy()
        xm = X.copy()
        xp[j] += h
        xm[j] -= h
        cols.append((residual(model, x.with_values(xp)).values
                     - residual(model, x.with_values(xm)).values) / (2 * h))
    rmap = rowmap(model)
    J = np.column_stack(cols) if cols else np.zeros((len(rmap), 0))
    aux_mask = np.zeros(len(X), dtype=bool)
    aux_mask[x.n_geometric:] = True
    return JacobianMatrix(J, rmap, colmap(model, x), aux_mask, implicit_dependencies(model))


def jacobian_error(model, x, h=1e-6):
    """Max |J_analytic - J_fd| relative to 1 + max |J_analytic|."""
    Ja = jacobian(model, x).entries
    Jf = fd_jacobian(model, x, h).entries
    if Ja.size == 0:
        return 0.0
    return float(np.max(np.abs(Ja - Jf)) / (1.0 + np.max(np.abs(Ja))))
