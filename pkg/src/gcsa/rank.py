"""Numerical rank, rigid-motion generators, degree of rigidity and
constraint-state classification."""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .errors import NotAWitnessError, NumericalError
from .model import ANCHOR, VECTOR, check_layout, pack_parameters
from .residuals import JacobianMatrix, jacobian

EPS = np.finfo(float).eps


class State(str, Enum):
    WELL = "Well"
    OVER = "Over"
    UNDER = "Under"
    OVER_AND_UNDER = "OverAndUnder"
    # neither over- nor under-constrained, yet kernel dimension below the
    # rigid-motion count, so the well-constrained criterion is not met
    MISMATCH = "Mismatch"


def default_tol():
    """Absolute rank tolerance from ``GCSA_TOL``, or None for the spectral default."""
    raw = os.environ.get("GCSA_TOL")
    return float(raw) if raw not in (None, "") else None


@dataclass(frozen=True)
class RankResult:
    rank: int
    singular_values: np.ndarray
    kernel_basis: np.ndarray
    cokernel_basis: np.ndarray
    tol_used: float

    @property
    def kernel_dim(self):
        return self.kernel_basis.shape[1]


def _entries(J):
    return J.entries if isinstance(J, JacobianMatrix) else np.asarray(J, dtype=float)


def numerical_rank(J, tol=None):
    """SVD rank; singular values above ``tol`` count.

    Default tolerance is ``max(m, n) * eps * sigma_max`` unless ``tol`` or
    ``GCSA_TOL`` provides an absolute threshold.
    """
    A = _entries(J)
    if not np.all(np.isfinite(A)):
        raise NumericalError("matrix has non-finite entries")
    m, n = A.shape
    if tol is None:
        tol = default_tol()
    if A.size == 0:
        return RankResult(0, np.zeros(0), np.eye(n), np.eye(m), 0.0 if tol is None else tol)
    U, s, Vt = np.linalg.svd(A)
    if tol is None:
        tol = max(m, n) * EPS * (s[0] if s.size else 0.0)
    r = int(np.sum(s > tol))
    return RankResult(r, s, Vt[r:].T.copy(), U[:, r:].copy(), float(tol))


@dataclass(frozen=True)
class RigidGenerators:
    """Parameter velocities of the six rigid motions, one column each.

    Columns 0-2 are translations along x, y, z; columns 3-5 rotations about
    axes through ``origin`` parallel to x, y, z.
    """

    matrix: np.ndarray
    origin: np.ndarray

    @property
    def vectors(self):
        return [self.matrix[:, k] for k in range(6)]


def entity_velocity(kind, params, v, w, origin):
    """Parameter velocity of one entity under the rigid velocity field (v, w)."""
    params = np.asarray(params, dtype=float)
    out = np.zeros(len(params))
    if kind in ANCHOR:
        sl = ANCHOR[kind]
        out[sl] = v + np.cross(w, params[sl] - origin)
    if kind in VECTOR:
        sl = VECTOR[kind]
        out[sl] = np.cross(w, params[sl])
    if kind == "PlaneHomogeneous":
        n = params[:3]
        out[3] = -n @ (v - np.cross(w, origin))
    return out


def rigid_generators(model, x=None, origin=(0.0, 0.0, 0.0)):
    x = pack_parameters(model) if x is None else x
    check_layout(model, x)
    origin = np.asarray(origin, dtype=float)
    R = np.zeros((len(x.values), 6))
    basis = np.eye(3)
    for k in range(6):
        v = basis[k] if k < 3 else np.zeros(3)
        w = basis[k - 3] if k >= 3 else np.zeros(3)
        for e in model.entities:
            off, n = x.layout[e.id]
            R[off:off + n, k] = entity_velocity(e.kind, x.values[off:off + n], v, w, origin)
    return RigidGenerators(R, origin)


def dor(model, x=None, origin=(0.0, 0.0, 0.0), tol=None):
    """Degree of rigidity: number of independent rigid generator vectors."""
    return numerical_rank(rigid_generators(model, x, origin).matrix, tol).rank


def state_from_counts(rank, row_size, column_size, reference, implicit_dependencies=0):
    """Constraint state from rank/size counts against ``reference`` rigid motions."""
    over = rank < row_size - implicit_dependencies
    under = column_size - rank > reference
    if over and under:
        return State.OVER_AND_UNDER
    if over:
        return State.OVER
    if under:
        return State.UNDER
    if column_size - rank == reference:
        return State.WELL
    return State.MISMATCH


def _classify(J, reference, rank=None, tol=None):
    if rank is None:
        rank = numerical_rank(J, tol).rank
    return state_from_counts(rank, J.row_size, J.column_size, reference, J.implicit_dependencies)


def classify_plain(J, rank=None, tol=None):
    """State under the fixed six-rigid-motion criteria.

    Over when rank < RowSize, Under when ColumnSize - rank > 6, Well when
    rank = RowSize and ColumnSize - rank = 6. RowSize discounts the built-in
    dependency of each cross-product triple.
    """
    return _classify(J, 6, rank, tol)


def classify_dor(J, dor_value, rank=None, tol=None):
    """As :func:`classify_plain` with 6 replaced by the degree of rigidity."""
    return _classify(J, dor_value, rank, tol)


@dataclass(frozen=True)
class AnalysisReport:
    column_size: int
    row_size: int
    rank: int
    kernel_dim: int
    dor: int
    plain_state: State
    dor_state: State
    matched: bool
    plain_matched: bool
    implicit_dependencies: int = 0
    aux_columns: int = 0
    tol_used: float = 0.0
    name: str = ""

    def to_dict(self):
        d = asdict(self)
        d["plain_state"] = self.plain_state.value
        d["dor_state"] = self.dor_state.value
        return d


def analyze(model, x=None, tol=None, policy=None, origin=(0.0, 0.0, 0.0), name=""):
    """Full constraint-state report at a witness configuration."""
    from .witness import WitnessPolicy, is_witness

    x = pack_parameters(model) if x is None else x
    ok, violations = is_witness(model, x, policy or WitnessPolicy())
    if not ok:
        raise NotAWitnessError(
            f"configuration is not a witness: {len(violations)} degenerate rows violated",
            violations)
    J = jacobian(model, x)
    rr = numerical_rank(J, tol)
    d = dor(model, x, origin, tol)
    return report_from(J, rr, d, name=name)


def report_from(J, rr, dor_value, name=""):
    kernel = J.column_size - rr.rank
    plain = classify_plain(J, rr.rank)
    with_dor = classify_dor(J, dor_value, rr.rank)
    return AnalysisReport(
        column_size=J.column_size,
        row_size=J.row_size,
        rank=rr.rank,
        kernel_dim=kernel,
        dor=dor_value,
        plain_state=plain,
        dor_state=with_dor,
        matched=with_dor is State.WELL,
        plain_matched=plain is State.WELL,
        implicit_dependencies=J.implicit_dependencies,
        aux_columns=int(np.count_nonzero(J.aux_mask)),
        tol_used=rr.tol_used,
        name=name,
    )
