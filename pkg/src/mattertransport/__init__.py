"""Stochastic simulation of legged matter transport over rugose terrain."""
from .estimator import (AnalyticSummary, SimResult, SuccessEstimate, TransportTask,
                        analytic_summary, bound_minimal_redundancy, destination_ci, ensemble,
                        estimate_cs, mean_velocity_approx, minimal_redundancy_empirical,
                        quantile_interval, success_probability)
from .model import (BacOutcome, BacSequence, DragModel, NoiseModel, ThrustProfile, bac_outcome,
                    ripple_profile, discretize, nominal_thrust, quantile_tau_u,
                    sample_bac, sample_bacs)
from .redundancy import (RedundancyConfig, TransportOutcome, first_passage_time,
                         simulate_trajectory, velocity_spatial, velocity_temporal)
from .terrain import ContactLog, TerrainMap, estimate_b, generate_terrain, rugosity

__version__ = "0.1.0"
