"""Decoherence dynamics of a driven qubit coupled to a two-level defect.

Closed-form Gaussian evolution of the qubit Q-distribution, a brute-force
master-equation integrator that independently verifies it, a Green-function
propagator for arbitrary initial distributions, and analysis tools for the
dynamic phases and the limit-cycle recurrence map.
"""
from .constants import HBAR, K_B
from .dynamics import (ClassifyThresholds, Phase, PhaseDiagram, PoincareSeries,
                       Recurrence, classify, first_recurrence, fixed_point,
                       phase_diagram, poincare_map)
from .errors import (ConfigError, DegenerateStart, DimensionTooSmall,
                     DrivenQubitError, GridTooCoarse, HermiticityLoss,
                     NonPositiveInput, NoRecurrence, ResonantDrive,
                     StepTooLarge, TraceDrift, TruncationOverflow, ZeroTime)
from .oracle import (FockSpace, OracleRun, build_space, coherent_state,
                     displaced_amplitude, displaced_fock_mixture,
                     displacement_operator, evolve, excited_state, husimi_q,
                     min_dim_for, moments, quadrature_mean, rhs,
                     steady_state_density)
from .params import (DerivedParams, PhysicalParams, derive,
                     effective_temperature, eta_rate, gamma_rate,
                     linearized_frequency, thermal_inversion)
from .propagator import (QField, TrajectoryOverlay, default_grid, evolve_field,
                         excited_field, gaussian_field, green_function,
                         kernel_mean, kernel_variance, square_grid,
                         trajectory_overlay)
from .solution import (EvolutionSpec, GaussianState, SuperPoissonState,
                       default_horizon, displaced_mean_at, energy_at,
                       fp_residual, gibbs_q, mean_at, q_value, steady_state,
                       super_poisson, variance_at)

__version__ = "0.1.0"
