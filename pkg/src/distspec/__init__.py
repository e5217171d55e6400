"""Fourier spectra, energies and distance sets of finite atomic measures."""

from .boxdim import box_count, box_dim_estimate
from .distance import A_tau, a_decay_fit, a_decay_table, distance_set, pinned_ft_direct, pinned_ft_lift
from .energy import energy_equivalence_check, riesz_energy, st_energy
from .experiments import EXPERIMENTS, ExperimentReport, list_experiments
from .grammar import parse_measure_spec, realize
from .measure import (
    BudgetError,
    DiscreteMeasure,
    MeasureError,
    autocorrelation,
    brownian_image,
    dirac,
    lift,
    make_cantor_measure,
    make_random_translate_cantor,
    make_sphere_measure,
    make_uniform_ball,
    make_uniform_cube,
    product_measure,
    translate,
)
from .spectrum import SweepConfig, WindowError, check_profile_shape, estimate_fourier_dim, estimate_spectrum_profile
from .thresholds import beta_thm, emit_threshold_table, t_conj, t_lower, t_proved
from .transform import ft_batch, ft_point

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
