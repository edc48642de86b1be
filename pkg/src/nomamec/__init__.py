"""Offloading and energy-comparison probabilities for NOMA-assisted edge computing.

Closed forms, high-SNR approximations and brute-force Monte Carlo estimates
for a two-user uplink (user to one edge server) and a two-server downlink
(one user to two edge servers) over Rayleigh fading.
"""
from .chanstat import (
    ChannelGainPair,
    OrderedPairConfig,
    binomial_identity_lhs,
    db_to_linear,
    order_stat_cdf,
    ordered_joint_pdf,
    sample_ordered_pair,
    sample_ordered_pairs,
)
from .downlink import (
    DownlinkScaling,
    DownlinkTaskSpec,
    QuadratureSpec,
    cr_power_allocation,
    decay_exponent_fit,
    downlink_rates,
    p_d_latency_mc,
    p_d_tilde_quadrature,
    quadrature_doubling_delta,
)
from .errors import ConfigurationError, DomainError, NomaMecError, NumericError, RangeError
from .mc_oracle import MonteCarloSpec, ProbabilityEstimate, estimate_event, p_d_tilde_mc, p_n_mc, p_tilde_mc
from .sweep import GridAxis, SweepConfig, run_sweep
from .uplink_energy import (
    EnergyScaling,
    GrowthPath,
    Regime,
    p_tilde_exact,
    p_tilde_regime,
    plateau_constant,
    vanishing_bound,
)
from .uplink_latency import SnrOperatingPoint, min_noma_power, p_n_exact, p_n_highsnr, p_n_highsnr_dominant

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
