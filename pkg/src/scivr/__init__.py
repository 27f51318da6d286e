"""Semiclassical IVR propagators with an exact split-operator reference.

Library layout:

* ``potentials``  -- 1-d models, derivatives, action-angle frequency
* ``classical``   -- RK4 trajectories with action and stability matrix
* ``gaussians``   -- coherent/squeezed states, overlaps, grid sums
* ``propagators`` -- the IVR variants and the Monte Carlo engine
* ``quantum``     -- split-operator FFT reference propagation
* ``config``/``harness``/``cli`` -- experiment files, runs, comparisons
"""

__version__ = "0.1.0"

from .classical import IntegratorConfig, TrajectoryState, harmonic_monodromy, propagate
from .config import ExperimentConfig, preset, preset_names
from .gaussians import GaussianState, amplitude, overlap, superpose_on_grid
from .potentials import (
    BarangerPotential,
    HarmonicPotential,
    MorsePotential,
    make_potential,
)
from .propagators import (
    CorrelationSeries,
    MethodSpec,
    autocorrelation,
    norm_series,
    run_methods,
    sample_initial_conditions,
    width_diagnostic,
)
from .quantum import GridSpec, autocorrelation_series, split_operator_propagate

__all__ = [
    "BarangerPotential",
    "CorrelationSeries",
    "ExperimentConfig",
    "GaussianState",
    "GridSpec",
    "HarmonicPotential",
    "IntegratorConfig",
    "MethodSpec",
    "MorsePotential",
    "TrajectoryState",
    "amplitude",
    "autocorrelation",
    "autocorrelation_series",
    "harmonic_monodromy",
    "make_potential",
    "norm_series",
    "overlap",
    "preset",
    "preset_names",
    "propagate",
    "run_methods",
    "sample_initial_conditions",
    "split_operator_propagate",
    "superpose_on_grid",
    "width_diagnostic",
]
