"""Off-grid DoA estimation (GOMP) with constant-modulus projection design."""

from ._core import (
    DesignTrace,
    EmptySelectionError,
    EstimationResult,
    NumericalError,
    cm_project,
    design_projection,
    dft_projection,
    dictionary_grid,
    estimate,
    mse_frequencies,
    mutual_coherence,
    objective_eta,
    random_projection,
    refine,
    run_sweep,
    sensing_matrix,
    spatial_frequency,
    steering_gradient,
    steering_matrix,
    steering_vector,
    synthesize,
    welch_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
