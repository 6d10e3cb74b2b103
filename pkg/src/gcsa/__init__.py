"""Witness-configuration analysis of geometric constraint systems."""
from .decomposition import (
    DependencyGroup,
    GroupKind,
    WcPartition,
    exact_max_wc_parts,
    exact_minimal_dependency_groups,
    greedy_dependency_groups,
    greedy_max_independent,
    greedy_wc_parts,
    induced_subsystem,
)
from .errors import *  # noqa: F401,F403
from .linear import LinearSystem, classify_linear
from .model import (
    Configuration,
    Constraint,
    Entity,
    GcsModel,
    RepresentationScheme,
    convert_scheme,
    pack_parameters,
    unpack_parameters,
)
from .rank import (
    AnalysisReport,
    State,
    analyze,
    classify_dor,
    classify_plain,
    dor,
    numerical_rank,
    rigid_generators,
)
from .residuals import JacobianMatrix, fd_jacobian, jacobian, residual, scalar_equation_count
from .witness import WitnessPolicy, is_witness, perturb_to_witness

__version__ = "0.1.0"
