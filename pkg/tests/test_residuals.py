import numpy as np
import pytest
from randmodels import random_model

from gcsa import Constraint, Entity, GcsModel, RepresentationScheme, corpus, pack_parameters
from gcsa.errors import InvalidStepError, UnsupportedConstraintError
from gcsa.residuals import (
    QUADRATIC_KINDS,
    fd_jacobian,
    jacobian,
    jacobian_error,
    residual,
    scalar_equation_count,
)

PN = RepresentationScheme.POINT_NORMAL


def _model(ents, cons, scheme=RepresentationScheme.HOMOGENEOUS, collinearity="cross"):
    return GcsModel.create(ents, cons, scheme, collinearity)


def _user_residual(m):
    r = residual(m, pack_parameters(m))
    return np.array([v for (cid, _), v in zip(r.rowmap, r.values) if not cid.endswith(".unit")])


def test_row_counts():
    assert scalar_equation_count(Constraint("p", "VectorParallel", ("a", "b"))) == 3
    assert scalar_equation_count(Constraint("p", "PointOnLine", ("a", "b"))) == 2
    assert scalar_equation_count(Constraint("p", "Coaxial", ("a", "b"))) == 5
    assert scalar_equation_count(Constraint("p", "PointPointDistance", ("a", "b"), 1)) == 1
    with pytest.raises(UnsupportedConstraintError):
        scalar_equation_count(Constraint("p", "Tangent", ("a", "b")))


def test_point_plane_distance_value():
    ents = [Entity("Q", "Point", (1, 2, 3)), Entity("P", "PlaneHomogeneous", (0, 0, 1, -1))]
    m = _model(ents, [Constraint("d", "PointPlaneDistance", ("Q", "P"), 2.0)])
    assert abs(_user_residual(m)[0]) < 1e-12
    pn = _model([ents[0], Entity("P", "PlanePointNormal", (5, 5, 1, 0, 0, 1))],
                [Constraint("d", "PointPlaneDistance", ("Q", "P"), 2.0)], PN)
    assert abs(_user_residual(pn)[0]) < 1e-12


def test_parallel_cross_rows():
    ents = [Entity("L1", "Line", (0, 0, 0, 0, 0, 1)), Entity("L2", "Line", (1, 0, 0, 0, 0, -1))]
    m = _model(ents, [Constraint("par", "VectorParallel", ("L1", "L2"))])
    assert np.allclose(_user_residual(m), 0, atol=1e-12)
    J = jacobian(m, pack_parameters(m))
    rows = [i for i, (cid, _) in enumerate(J.rowmap) if cid == "par"]
    assert np.linalg.matrix_rank(J.entries[rows]) == 2
    assert J.implicit_dependencies == 1


def test_parallel_cross_rows_full_rank_off_parallel():
    # two rows suffice only at parallel vectors; elsewhere the triple is rank 3
    ents = [Entity("L1", "Line", (0, 0, 0, 0, 0, 1)), Entity("L2", "Line", (1, 0, 0, 0.6, 0, 0.8))]
    m = _model(ents, [Constraint("par", "VectorParallel", ("L1", "L2"))])
    J = jacobian(m, pack_parameters(m))
    assert np.linalg.matrix_rank(J.entries[2:5]) == 3


def test_t_form_has_aux_column():
    m = corpus.load("four-plane-rep2")
    J = jacobian(m, pack_parameters(m))
    assert J.shape == (13, 26)
    assert J.column_size == 24
    assert J.implicit_dependencies == 0


def test_satisfied_corpus_residuals_vanish():
    for name in ("four-plane-rep1", "four-plane-rep2", "two-line", "crank"):
        m = corpus.load(name)
        assert np.abs(residual(m, pack_parameters(m)).values).max() < 1e-12, name


@pytest.mark.parametrize("seed", range(12))
def test_random_satisfied_models_vanish(seed):
    rng = np.random.default_rng(seed)
    for scheme in ("homogeneous", "point-normal"):
        m = random_model(rng, scheme)
        assert np.abs(residual(m, pack_parameters(m)).values).max() < 1e-12


@pytest.mark.parametrize("seed", range(12))
def test_analytic_matches_finite_differences(seed):
    rng = np.random.default_rng(100 + seed)
    m = random_model(rng, ("homogeneous", "point-normal")[seed % 2],
                     collinearity=("cross", "t-form")[seed // 2 % 2])
    x = pack_parameters(m)
    x = x.with_values(x.values + rng.uniform(-0.5, 0.5, len(x)))
    assert jacobian_error(m, x) < 1e-6


def test_quadratic_rows_exact_at_coarse_step():
    rng = np.random.default_rng(7)
    for _ in range(10):
        m = random_model(rng, "point-normal", n_entities=5, n_constraints=7)
        x = pack_parameters(m)
        x = x.with_values(x.values + rng.uniform(-1, 1, len(x)))
        J = jacobian(m, x)
        kinds = {c.id: c.kind for c in m.constraints}
        rows = [i for i, (cid, _) in enumerate(J.rowmap) if kinds[cid] in QUADRATIC_KINDS]
        err = np.abs(J.entries[rows] - fd_jacobian(m, x, 1e-4).entries[rows])
        assert err.max() <= 1e-9


def test_scale_multiplies_rows():
    m = corpus.load("two-line")
    cons = [Constraint(c.id, c.kind, c.refs, c.value, 3.0 if c.id == "dist" else 1.0)
            for c in m.constraints]
    x = pack_parameters(m)
    J1 = jacobian(m, x).entries
    J3 = jacobian(m.with_constraints(cons), x).entries
    assert np.allclose(J3[-1], 3 * J1[-1])
    assert np.allclose(J3[:-1], J1[:-1])


@pytest.mark.parametrize("h", [0.0, -1e-6])
def test_nonpositive_step_rejected(h):
    m = corpus.load("two-line")
    with pytest.raises(InvalidStepError):
        fd_jacobian(m, pack_parameters(m), h)
