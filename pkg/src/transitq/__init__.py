"""Finite-population single-server queue simulation with exact
Brownian-parabolic-drift first-passage analytics."""

__version__ = "0.1.0"

from .distributions import (ArrivalModel, Exponential, Hyperexponential,
                            HalfNormal, Uniform, ServiceModel,
                            critical_service_scale, critically_scaled,
                            sample_sorted_clocks, density_at_zero)
from .queue_sim import (HeavyTrafficConfig, QueuePath, EmbeddedPath,
                        simulate_delta_queue, simulate_embedded_exponential,
                        simulate_embedded_general, first_busy_period,
                        sample_busy_periods, CENSORED)
from .scaling import alpha, RescaledPath, rescale_embedded, rescale_physical, \
    criticality_residual, busy_period_scale
from .diffusion import DriftSpec, DiffusionPath, simulate_w, reflect, \
    hitting_time_zero, sample_hitting_times
from .airy import airy, AiryPair
from .passage import (StdFptParams, GeneralFptParams, fpt_density, fpt_mean,
                      fpt_mass_mean, fpt_general, f3, f3_prime,
                      tail_probability)
from .stats import McSummary, mc_summary, gaussian_kde, ks_distance, \
    relative_error
