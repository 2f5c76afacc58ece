"""Numerical models of VMRT affine cones in graded tensor spaces, with
second-fundamental-form verification machinery and a scenario-runner CLI."""

from .errors import AmbientMismatch, ConstraintViolation, NumericalFailure
from .linalg import (
    AmbientVector,
    GradedAmbient,
    Subspace,
    kernel,
    numerical_rank,
    pairing,
    quotient_project,
    sym_square,
    symplectic_form,
    symplectic_matrix,
    wedge_to_E,
)
from .cones import (
    DEGENERATE_LINEAR,
    GENERIC,
    ConeModel,
    ConePoint,
    F4Alpha3VMRT,
    F4SchubertB3,
    F4SchubertC2,
    F4SectionCone,
    OddSymplecticSubVMRT,
    SegreBaseline,
    SymplecticVMRT,
    TransformedCone,
    pairing_perp,
)
from .schubert import SchubertShape, schubert_classify
from .f4_grading import f4_root_grading
from .sff import (
    SFFRep,
    base_locus,
    check_pair_nondegenerate,
    gauss_map,
    sff_closed_form,
    sff_kernel,
    sff_oracle,
    sff_value_closed_form,
)
from .actions import (
    F4Levi,
    F4UnipotentH1,
    SymplecticLevi,
    act,
    act_on_subcone,
    compose,
    hyperplane_transport,
    levi_equivalence_forward,
    random_symplectic,
    tangency_implies_equality_experiment,
    tangency_test,
)
from .suites import ScenarioConfig, run

__all__ = [name for name in dir() if not name.startswith("_")]
