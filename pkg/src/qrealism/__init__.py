"""Operational wave/particle realism in quantum-controlled interferometers."""

from .qmath import (
    DensityOperator,
    ProjectiveObservable,
    StateError,
    binary_entropy,
    eigh,
    fidelity,
    partial_trace,
    relative_entropy,
    tensor_product,
    von_neumann_entropy,
)
from .realism import (
    bound_incompatible,
    correlations,
    dephase,
    discord,
    irrealism,
    mutual_information,
    nonseparability_gap,
    qcre_bound,
    realism,
)
from .interferometer import (
    CircuitKind,
    CircuitParams,
    Stage,
    detection_probability,
    detector_model,
    input_state,
    realism_inside,
    stage_state,
    visibility,
    wave_particle_observables,
)

__version__ = "0.1.0"
