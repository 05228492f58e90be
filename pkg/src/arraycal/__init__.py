"""Self-calibration toolkit for asynchronous microphone arrays.

Synthesizes and ingests TOA/TDOA timing matrices, cancels unknown clock
offsets with a reference-column-plus-mean centering transform, verifies that
TOA and TDOA land on the same offset-free matrix, and recovers array/source
geometry from that matrix alone.
"""

from .estimators import GeometryEstimator, TimingCenterer
from .experiments import (
    TrialResult,
    ValidationReport,
    histogram,
    run_monte_carlo,
    run_trial,
    trial_f_values,
)
from .ingest import RealDataset, inject_offsets, load_dataset, load_toa_csv, save_toa_csv
from .localize import (
    GeometryEstimate,
    SolveOptions,
    model_f,
    objective_and_gradient,
    procrustes_rmse,
    solve,
)
from .mapping import (
    DerivedOffsets,
    MappedMatrix,
    MapSource,
    closed_form_map,
    column_means,
    derived_offsets,
    geometry_map,
    map_timing,
    map_values,
    read_mapped_values,
    residual,
    write_mapped_csv,
)
from .rng import derive_seed, make_rng
from .scene import (
    DEFAULT_SPEED_OF_SOUND,
    Scene,
    SceneConfig,
    generate_scene,
    load_scene,
    normalize_scene,
    pairwise_distances,
    save_scene,
    scene_diameter,
)
from .timing import TimingKind, TimingMatrix, add_noise, synth_tdoa, synth_toa, tdoa_from_toa

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SPEED_OF_SOUND",
    "DerivedOffsets",
    "GeometryEstimate",
    "GeometryEstimator",
    "MapSource",
    "MappedMatrix",
    "RealDataset",
    "Scene",
    "SceneConfig",
    "SolveOptions",
    "TimingCenterer",
    "TimingKind",
    "TimingMatrix",
    "TrialResult",
    "ValidationReport",
    "add_noise",
    "closed_form_map",
    "column_means",
    "derive_seed",
    "derived_offsets",
    "generate_scene",
    "geometry_map",
    "histogram",
    "inject_offsets",
    "load_dataset",
    "load_scene",
    "load_toa_csv",
    "make_rng",
    "map_timing",
    "map_values",
    "model_f",
    "normalize_scene",
    "objective_and_gradient",
    "pairwise_distances",
    "procrustes_rmse",
    "read_mapped_values",
    "residual",
    "run_monte_carlo",
    "run_trial",
    "save_scene",
    "save_toa_csv",
    "scene_diameter",
    "solve",
    "synth_tdoa",
    "synth_toa",
    "tdoa_from_toa",
    "trial_f_values",
    "write_mapped_csv",
]
