"""Built-in example corpus.

The model geometries are reconstructions: each is a drawn configuration that
satisfies all of its constraints and reproduces the reference counts stored
in ``EXPECTED``. The frozen JSON copies live in ``gcsa/data``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .linear import LinearSystem
from .model import Constraint as C
from .model import Entity, GcsModel, RepresentationScheme, convert_scheme

EQ5 = LinearSystem(
    [[1, 1, 1], [2, 1, 1], [3, 2, 1], [1, 2, 3], [2, 4, 3]],
    [0, 1, 1, 1, 2],
)
EQ6 = LinearSystem(
    [[1, 1, 1], [2, 1, 1], [3, 2, 1], [1, 2, 3], [2, 4, 6]],
    [0, 1, 1, 1, 2],
)
IDENTITY3 = LinearSystem(np.eye(3), [1.0, 2.0, 3.0])


def _unit(deg):
    a = np.radians(deg)
    return (float(np.cos(a)), float(np.sin(a)), 0.0)


def four_plane(scheme=RepresentationScheme.HOMOGENEOUS, collinearity="cross"):
    """Two pairs of parallel planes, all parallel to the z axis.

    P1 || P2 and P3 || P4 at fixed offsets, with a fixed angle between the
    pairs: a parallelogram-section tube. Sharing the z direction leaves one
    rigid translation without effect on homogeneous plane parameters.
    """
    theta = 70.0
    n1 = (1.0, 0.0, 0.0)
    n3 = _unit(theta)
    ents = [
        Entity("P1", "PlaneHomogeneous", n1 + (-0.5,)),
        Entity("P2", "PlaneHomogeneous", n1 + (-2.5,)),
        Entity("P3", "PlaneHomogeneous", n3 + (0.25,)),
        Entity("P4", "PlaneHomogeneous", n3 + (-1.25,)),
    ]
    cons = [
        C("par12", "VectorParallel", ("P1", "P2")),
        C("par34", "VectorParallel", ("P3", "P4")),
        C("ang13", "VectorAngle", ("P1", "P3"), float(np.dot(n1, n3))),
        C("dist12", "PlanePlaneDistance", ("P1", "P2"), 2.0),
        C("dist34", "PlanePlaneDistance", ("P3", "P4"), 1.5),
    ]
    model = GcsModel.create(ents, cons, RepresentationScheme.HOMOGENEOUS, collinearity)
    return convert_scheme(model, scheme)


def two_line(collinearity="cross"):
    """Two parallel lines at a fixed distance."""
    ents = [
        Entity("L1", "Line", (0.0, 0.0, 0.0, 0.0, 0.0, 1.0)),
        Entity("L2", "Line", (1.5, 0.4, 0.7, 0.0, 0.0, 1.0)),
    ]
    cons = [
        C("par", "VectorParallel", ("L1", "L2")),
        C("dist", "LineLineDistance", ("L1", "L2"), float(np.hypot(1.5, 0.4))),
    ]
    return GcsModel.create(ents, cons, RepresentationScheme.HOMOGENEOUS, collinearity)


def crank():
    """Crank: base face F1 with shaft bore F4, planes F2, F3, F5 tangent-offset
    to the shaft axis, and crank pin F7 positioned from F3.

    F2, F3 and F5 each turn freely about F4's axis; fixing F5 as the base
    leaves the two rotations of F2 and F3. F7 rides with F3.
    """
    n2, n3, n5 = _unit(100.0), _unit(220.0), (1.0, 0.0, 0.0)
    q7 = 4.0 * np.array(_unit(200.0))
    d3 = -1.5
    ents = [
        Entity("F1", "PlaneHomogeneous", (0.0, 0.0, 1.0, 0.0)),
        Entity("F2", "PlaneHomogeneous", n2 + (-2.0,)),
        Entity("F3", "PlaneHomogeneous", n3 + (d3,)),
        Entity("F4", "Cylinder", (0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0)),
        Entity("F5", "PlaneHomogeneous", n5 + (-3.0,)),
        Entity("F7", "Cylinder", tuple(q7) + (0.0, 0.0, 1.0, 0.5)),
    ]
    cons = [
        C("axis4_perp_F1", "VectorParallel", ("F4", "F1")),
        C("base4_on_F1", "PointOnPlane", ("F4", "F1")),
        C("r4", "Radius", ("F4",), 1.0),
        C("F2_along_axis", "VectorAngle", ("F2", "F4"), 0.0),
        C("F2_offset", "PointPlaneDistance", ("F4", "F2"), -2.0),
        C("F3_along_axis", "VectorAngle", ("F3", "F4"), 0.0),
        C("F3_offset", "PointPlaneDistance", ("F4", "F3"), d3),
        C("F5_along_axis", "VectorAngle", ("F5", "F4"), 0.0),
        C("F5_offset", "PointPlaneDistance", ("F4", "F5"), -3.0),
        C("axis7_par_axis4", "VectorParallel", ("F7", "F4")),
        C("base7_on_F1", "PointOnPlane", ("F7", "F1")),
        C("pin_radius_arm", "PointLineDistance", ("F7", "F4"), 4.0),
        C("pin_to_F3", "PointPlaneDistance", ("F7", "F3"), float(np.dot(n3, q7) + d3)),
        C("r7", "Radius", ("F7",), 0.5),
    ]
    return GcsModel.create(ents, cons, RepresentationScheme.HOMOGENEOUS)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    payload: object
    expected: dict | None = None


# reference results each corpus entry must reproduce
EXPECTED = {
    "four-plane-rep1": {"column_size": 16, "rank": 11, "dor": 5, "matched": True,
                        "plain_matched": False},
    "four-plane-rep2": {"column_size": 24, "rank": 13, "dor": 6, "matched": False,
                        "plain_matched": False},
    "two-line": {"column_size": 12, "rank": 5, "dor": 6, "matched": False,
                 "plain_matched": False},
    "crank": {"residual_dofs": 2,
              "greedy_seed_order": ["F3", "F7", "F2"]},
    "eq5": {"labels": ["Inconsistent", "Over"],
            "greedy_full_basis": [["E1", "E2", "E3", "E4"], ["E1", "E2", "E3", "E5"]]},
    "eq6": {"labels": ["Inconsistent", "Over"],
            "greedy_full_basis": [["E1", "E2", "E3", "E4"], ["E1", "E2", "E3", "E5"]],
            "min_circuit": ["E4", "E5"]},
}


def build(name):
    """Construct a corpus payload from its generator (not the frozen file)."""
    builders = {
        "eq5": lambda: EQ5,
        "eq6": lambda: EQ6,
        "identity3": lambda: IDENTITY3,
        "four-plane-rep1": lambda: four_plane(RepresentationScheme.HOMOGENEOUS),
        # the point-normal variant is analyzed with the auxiliary-scalar
        # collinearity form (v1 + t v2 = 0); its t columns stay out of ColumnSize
        "four-plane-rep2": lambda: four_plane(RepresentationScheme.POINT_NORMAL, "t-form"),
        "two-line": two_line,
        "crank": crank,
    }
    try:
        return builders[name]()
    except KeyError:
        raise KeyError(f"unknown corpus entry {name!r}; known: {sorted(builders)}") from None


NAMES = ("eq5", "eq6", "four-plane-rep1", "four-plane-rep2", "two-line", "crank")
EXTRA_NAMES = ("identity3",)
ALIASES = {"four-plane": "four-plane-rep1"}


def data_path(name):
    return resources.files("gcsa") / "data" / f"{name}.json"


def load(name):
    """Load a frozen corpus file by name."""
    from .io import loads_model

    name = ALIASES.get(name, name)
    path = data_path(name)
    if not path.is_file():
        raise KeyError(f"unknown corpus entry {name!r}")
    return loads_model(path.read_text(), source=str(path))


def entry(name):
    name = ALIASES.get(name, name)
    return CorpusEntry(name, load(name), EXPECTED.get(name))


def entries():
    return [entry(n) for n in NAMES]


def freeze(directory):
    """Write every corpus payload to ``directory`` as JSON."""
    from .io import dumps_model

    for name in NAMES + EXTRA_NAMES:
        (directory / f"{name}.json").write_text(dumps_model(build(name)))


if __name__ == "__main__":  # pragma: no cover
    import pathlib

    freeze(pathlib.Path(__file__).parent / "data")
    print(json.dumps(sorted(NAMES + EXTRA_NAMES)))
