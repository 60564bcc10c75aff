"""Ergodic optimization for shifts over a finite alphabet.

Equilibrium states and pressure of two-coordinate potentials, maximizing
measures and calibrated subactions, Peierls barriers and Aubry sets,
max-plus spectral theory, and exact zero-temperature limit analysis.
"""

from .aubry import (AubryData, GroundState, RateValue, aubry_set,
                    calibrated_subaction, calibration_residual,
                    component_entropy, deficiency_matrix, ground_state,
                    max_ergodic_value, peierls_barrier,
                    peierls_barrier_matrix, rate_function_cylinder,
                    subaction_from_aubry)
from .involution import (TwistResult, dual_eigenvalue_identity,
                         dual_potential, kernel_matrix, twist_check)
from .maxplus import (NEG_INF, max_cycle_mean, mp_add, mp_eigen,
                      mp_eigen_check, mp_mat_mul, mp_mat_vec, mp_mul)
from .measures import (MarkovMeasure, PeriodicOrbitMeasure, bernoulli_measure,
                       birkhoff_average, integrate_potential, kl_divergence,
                       markov_cylinder_mass, markov_entropy,
                       periodic_cylinder_mass, stationary_vector)
from .shifts import (PeriodicOrbit, cylinder_refinement_children,
                     enumerate_simple_cycles, full_shift_matrix,
                     irreducible_components, sft_allows, word_distance)
from .thermo import (PerronData, ThermoState, free_energy,
                     gibbs_bounds_constant, gibbs_cylinder_mass,
                     log_gibbs_cylinder_mass, perron_eigendata, perron_log,
                     pressure, pressure_derivative_check, thermo_state)
from .zerotemp import (Chapter7Analysis, Chapter7Params, SweepResult,
                       beta_sweep, g_function_chapter7,
                       limit_selection_chapter7, make_beta_schedule,
                       mu_ratio_chapter7, nu_ratio_chapter7, rho_chapter7,
                       sweep_to_csv, two_state_closed_forms)

__version__ = "0.1.0"
