"""Energy-reduced uplink NOMA versus OMA.

In NOMA user ``n`` transmits at ``beta * P_n`` over two slots (one shared with
user ``m``, one alone), spending ``2 beta`` of the OMA energy.  OMA still
delivers at least as many bits when

    |h_n|^2 <= ((1 - beta)(1 + rho_m |h_m|^2) - beta) / (beta^2 rho_n),

and this module evaluates the probability of that event in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .chanstat import OrderedPairConfig, check_probability, order_stat_cdf
from .errors import ConfigurationError, NumericError
from .uplink_latency import SnrOperatingPoint


@dataclass(frozen=True)
class EnergyScaling:
    """Fraction ``beta`` of the OMA power used by user ``n`` in each NOMA slot."""

    beta: float

    def __post_init__(self):
        if not 0 < self.beta < 0.5:
            raise ConfigurationError(f"beta must lie in (0, 1/2), got {self.beta}")

    def kappa1(self, snr: SnrOperatingPoint) -> float:
        """Largest weak gain for which the threshold stays above the ordering floor."""
        b = self.beta
        return (1 - 2 * b) / (b**2 * snr.rho_n - (1 - b) * snr.rho_m)

    def a_tilde(self, cfg: OrderedPairConfig, snr: SnrOperatingPoint, p: int, l: int) -> float:
        b = self.beta
        k = cfg.M - cfg.m - p
        return snr.rho_m * (1 - b) * k / (b**2 * snr.rho_n) + p + l + 1


def threshold_covers_floor(snr: SnrOperatingPoint, scale: EnergyScaling) -> bool:
    """True when the threshold exceeds ``|h_m|^2`` for every weak gain."""
    return (1 - scale.beta) * snr.rho_m >= scale.beta**2 * snr.rho_n


def p_tilde_exact(cfg: OrderedPairConfig, snr: SnrOperatingPoint, scale: EnergyScaling) -> float:
    """Probability that OMA delivers at least as much data as energy-reduced NOMA."""
    cfg.require_range()
    M, m = cfg.M, cfg.m
    beta = scale.beta
    bounded = not threshold_covers_floor(snr, scale)
    kappa = scale.kappa1(snr) if bounded else math.inf

    terms = []
    for p in cfg.p_range:
        k = M - m - p
        lead = math.exp(-k * (1 - 2 * beta) / (beta**2 * snr.rho_n)) / k
        inner = []
        for l in cfg.l_range:
            at = scale.a_tilde(cfg, snr, p, l)
            mass = -math.expm1(-at * kappa) if bounded else 1.0
            t = cfg.c_l(l) * mass / at
            if not math.isfinite(t):
                raise NumericError("non-finite summand", index=(p, l))
            inner.append(t)
        terms.append(cfg.c_p(p) * lead * math.fsum(inner))
    exceed = cfg.c_mn * math.fsum(terms)
    # P(|h_m|^2 <= kappa1); equals 1 in the unbounded branch
    floor_mass = float(order_stat_cdf(kappa, M, m)) if bounded else 1.0
    return check_probability(floor_mass - exceed, "P~_n")


def vanishing_bound(cfg: OrderedPairConfig, rho_n: float, scale: EnergyScaling) -> float:
    """Upper bound ``M!/(M-m)! (1-2beta)^m / (beta^{2m} rho_n^m)`` as ``rho_n -> inf``.

    This is the leading term of ``P(|h_m|^2 <= kappa1)``, which dominates
    ``P~_n``.  The bound is loose: ``P~_n`` itself decays like ``rho_n^{-n}``
    because all ``n`` weakest gains must be ``O(1/rho_n)``.
    """
    M, m, b = cfg.M, cfg.m, scale.beta
    return (
        math.factorial(M) / math.factorial(M - m)
        * (1 - 2 * b) ** m / (b ** (2 * m) * rho_n**m)
    )


def plateau_constant(cfg: OrderedPairConfig, ratio: float, scale: EnergyScaling) -> float:
    """Limit of :func:`p_tilde_exact` when both SNRs grow with ``rho_m/rho_n = ratio``.

    Uses ``sum_l c_l/(z+l) = (m-1)!/prod_{i=0}^{m-1}(z+i)`` to collapse the
    inner sum.  ``ratio = inf`` (``rho_m`` grows alone) gives 1.
    """
    cfg.require_range()
    if ratio < 0:
        raise ConfigurationError(f"ratio must be >= 0, got {ratio}")
    if math.isinf(ratio):
        return 1.0
    M, m, beta = cfg.M, cfg.m, scale.beta
    terms = []
    for p in cfg.p_range:
        k = M - m - p
        b_tilde = ratio * (1 - beta) * k / beta**2
        prod = math.prod(b_tilde + p + i for i in range(1, m + 1))
        terms.append(math.factorial(m - 1) * cfg.c_p(p) / (k * prod))
    return 1.0 - cfg.c_mn * math.fsum(terms)


class Regime(str, Enum):
    VANISHES = "vanishes"
    PLATEAUS = "plateaus"


@dataclass(frozen=True)
class GrowthPath:
    """How the SNRs grow: which ones diverge and, if both, their limiting ratio."""

    rho_m_grows: bool
    rho_n_grows: bool
    ratio: float | None = None  # lim rho_m / rho_n, required when both grow


def p_tilde_regime(
    path: GrowthPath, scale: EnergyScaling, cfg: OrderedPairConfig | None = None
) -> tuple[Regime, float | None]:
    """Classify the asymptotic behaviour of :func:`p_tilde_exact` along ``path``.

    Returns ``(regime, constant)``; the constant is the plateau value when
    ``cfg`` is given and the regime plateaus, otherwise ``None``.
    """
    b = scale.beta
    if path.rho_m_grows and path.rho_n_grows:
        if path.ratio is None or path.ratio < 0 or math.isnan(path.ratio):
            raise ConfigurationError("both SNRs grow: a limiting ratio rho_m/rho_n >= 0 is required")
        if path.ratio < b**2 / (1 - b):
            return Regime.VANISHES, None
        ratio = path.ratio
    elif path.rho_n_grows:
        if path.ratio is not None:
            raise ConfigurationError("ratio is only meaningful when both SNRs grow")
        return Regime.VANISHES, None
    elif path.rho_m_grows:
        if path.ratio is not None:
            raise ConfigurationError("ratio is only meaningful when both SNRs grow")
        ratio = math.inf
    else:
        raise ConfigurationError("growth path must let at least one SNR diverge")
    const = plateau_constant(cfg, ratio, scale) if cfg is not None else None
    return Regime.PLATEAUS, const
