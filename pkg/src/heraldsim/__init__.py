"""Simulator for heralded polarization entanglement from a down-conversion source.

The package builds the n-pair components of the source, propagates them
through passive linear optics in a sparse Fock representation, and
conditions on single-photon detections at the trigger modes.
"""

from .errors import (
    BadAngle,
    BadEfficiency,
    CheckFailed,
    DuplicateMode,
    HeraldSimError,
    NoRoot,
    RegistryMismatch,
    TruncationExceeded,
    ZeroTrace,
)
from .fock import (
    ModeRegistry,
    PureState,
    StateEnsemble,
    apply_creation,
    inner,
    project_pattern,
    project_state,
    serialize,
    vacuum,
)
from .formulas import (
    MAX_PROBABILITY,
    f_formula,
    p_ideal_formula,
    p_lossy_formula,
    p_n4_formula,
    rate_estimate,
)
from .herald import (
    DetectorModel,
    HeraldOutcome,
    HeraldPattern,
    fidelity,
    ideal_herald,
    intermediate_collapse,
    lossy_herald,
    target_state,
)
from .optics import (
    LinearTransform,
    SetupParams,
    apply_transform,
    attach_loss,
    beam_splitter,
    half_wave_rotation,
    setup_transform,
)
from .spdc import SourceParams, pair_amplitude, psi_n, truncated_source_state
from .sweep import SweepRow, SweepSpec, run_sweep

__version__ = "0.1.0"
