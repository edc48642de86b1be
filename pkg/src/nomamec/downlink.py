"""Downlink NOMA offloading from one user to two MEC servers.

The user superposes the task for server ``n`` on top of the task for server
``m`` with cognitive-radio power allocation: server ``m`` receives exactly its
OMA rate and only the leftover power goes to server ``n``.  Gains are sorted
server channels ``|g_m|^2 <= |g_n|^2`` among ``K`` servers.

Rates are in bits (base-2 logarithm) so that ``epsilon = 2^{N/T} - 1`` is the
SINR needed to move ``N`` bits in ``T`` seconds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chanstat import ChannelGainPair, OrderedPairConfig, check_probability, order_stat_cdf
from .errors import ConfigurationError, DomainError, NumericError

DEFAULT_QUAD_POINTS = 64

#: Overshoot of [0, 1] tolerated from quadrature error before raising.
QUAD_PROB_TOL = 1e-4


@dataclass(frozen=True)
class DownlinkTaskSpec:
    bits: float
    slot: float = 1.0
    epsilon: float = field(default=None)

    def __post_init__(self):
        if not (self.bits > 0 and self.slot > 0):
            raise ConfigurationError(f"bits and slot must be > 0, got {self.bits}, {self.slot}")
        eps = 2.0 ** (self.bits / self.slot) - 1
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", eps)
        elif abs(self.epsilon - eps) > 1e-12 * max(1.0, eps):
            raise ConfigurationError(f"epsilon={self.epsilon} inconsistent with 2^(N/T)-1={eps}")


@dataclass(frozen=True)
class DownlinkScaling:
    """Power split of the superposition and second-slot power fraction.

    Fields may be arrays (one entry per channel realisation).
    """

    beta_tilde: float
    alpha_m_sq: float
    alpha_n_sq: float

    def __post_init__(self):
        bt = np.asarray(self.beta_tilde)
        am = np.asarray(self.alpha_m_sq)
        an = np.asarray(self.alpha_n_sq)
        if np.any((bt < 0) | (bt >= 1)):
            raise ConfigurationError(f"beta_tilde must lie in [0, 1), got {self.beta_tilde}")
        if np.any((am < 0) | (am > 1) | (an < 0) | (an > 1)):
            raise ConfigurationError("power coefficients must lie in [0, 1]")
        if np.any(np.abs(am + an - 1) > 1e-12):
            raise ConfigurationError("alpha_m_sq + alpha_n_sq must equal 1")

    @classmethod
    def fixed(cls, alpha_n_sq: float, beta_tilde: float = 0.0) -> "DownlinkScaling":
        return cls(beta_tilde, 1.0 - alpha_n_sq, alpha_n_sq)


@dataclass(frozen=True)
class QuadratureSpec:
    points: int = DEFAULT_QUAD_POINTS

    def __post_init__(self):
        if isinstance(self.points, bool) or not isinstance(self.points, (int, np.integer)) or self.points < 1:
            raise ConfigurationError(f"points must be a positive integer, got {self.points}")

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Chebyshev nodes ``theta_i`` and the factors ``(pi/N) sqrt(1 - theta_i^2)``."""
        N = self.points
        i = np.arange(1, N + 1)
        theta = np.cos((2 * i - 1) * np.pi / (2 * N))
        return theta, np.pi / N * np.sqrt(1 - theta**2)


def cr_alpha_n_sq(rho, weak_gain, epsilon):
    """Cognitive-radio share of power for server ``n`` (array-friendly)."""
    snr_m = rho * np.asarray(weak_gain, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        share = (snr_m - epsilon) / (snr_m * (1 + epsilon))
    out = np.where(snr_m > epsilon, share, 0.0)
    return out if out.ndim else float(out)


def cr_power_allocation(
    rho: float, weak_gain, task: DownlinkTaskSpec, beta_tilde: float = 0.0
) -> DownlinkScaling:
    """Give server ``m`` exactly its OMA SINR ``epsilon``; the rest goes to server ``n``."""
    if not rho > 0:
        raise ConfigurationError(f"rho must be > 0, got {rho}")
    if np.any(np.asarray(weak_gain) < 0):
        raise ConfigurationError("weak_gain must be >= 0")
    an = cr_alpha_n_sq(rho, weak_gain, task.epsilon)
    return DownlinkScaling(beta_tilde, 1.0 - an, an)


def downlink_rates(rho: float, gains, scaling: DownlinkScaling, task: DownlinkTaskSpec):
    """Bits delivered: ``(to m in slot 1, to n in slot 1, to n in slot 2)``.

    Server ``m`` decodes its own layer treating server ``n``'s layer as noise
    received through its own channel ``|g_m|^2``.  ``gains`` is a
    :class:`ChannelGainPair` or a ``(weak, strong)`` tuple of arrays.
    """
    if isinstance(gains, ChannelGainPair):
        weak, strong = gains.weak_gain, gains.strong_gain
    else:
        weak, strong = (np.asarray(g, dtype=float) for g in gains)
    T = task.slot
    am, an, bt = scaling.alpha_m_sq, scaling.alpha_n_sq, scaling.beta_tilde
    bits_m = T * np.log2(1 + rho * am * weak / (1 + rho * an * weak))
    bits_n1 = T * np.log2(1 + rho * an * strong)
    bits_n2 = T * np.log2(1 + bt * rho * strong)
    if not any(np.ndim(v) for v in (bits_m, bits_n1, bits_n2)):
        return float(bits_m), float(bits_n1), float(bits_n2)
    return bits_m, bits_n1, bits_n2


def oma_bits(rho: float, gain, task: DownlinkTaskSpec):
    return task.slot * np.log2(1 + rho * np.asarray(gain, dtype=float))


def feasible_strong_bound(x, rho: float, beta_tilde: float, epsilon: float):
    """Largest ``|g_n|^2`` for which OMA still beats NOMA, given ``|g_m|^2 = x > epsilon/rho``."""
    x = np.asarray(x, dtype=float)
    num = rho * x * ((1 - beta_tilde) * (1 + epsilon) - 1) + epsilon
    return num / (rho * beta_tilde * (rho * x - epsilon))


def _kernel(x, cfg: OrderedPairConfig, p: int, rho: float, beta_tilde: float, epsilon: float):
    """Integrand over ``|g_m|^2 = x`` after integrating ``|g_n|^2`` out."""
    k = cfg.K - cfg.m - p
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        gap = feasible_strong_bound(x, rho, beta_tilde, epsilon) - x
        # gap -> +inf at x -> epsilon/rho+; -expm1(-inf) = 1 is the analytic limit
        mass = -np.expm1(-k * np.where(np.isnan(gap), np.inf, gap))
    return np.exp(-(p + 1) * x - k * x) * (-np.expm1(-x)) ** (cfg.m - 1) * mass / k


def p_d_tilde_quadrature(
    cfg: OrderedPairConfig,
    rho: float,
    beta_tilde: float,
    task: DownlinkTaskSpec,
    quad: QuadratureSpec | None = None,
) -> float:
    """Probability that OMA delivers at least as many bits to server ``n``.

    The strong-server integral is closed; the weak-server integral over
    ``(epsilon/rho, epsilon/(beta_tilde rho)]`` uses Chebyshev-Gauss quadrature,
    truncated where the exponentially decaying kernel drops below ~1e-17.
    """
    cfg.require_range()
    if not 0 < beta_tilde < 1:
        raise ConfigurationError(f"beta_tilde must lie in (0, 1), got {beta_tilde}")
    if not rho > 0:
        raise ConfigurationError(f"rho must be > 0, got {rho}")
    quad = quad or QuadratureSpec()
    eps = task.epsilon
    lo, hi = eps / rho, eps / (beta_tilde * rho)
    # the kernel is below e^{-(K-m+1)x}; drop the tail once it is negligible
    weight_sum = cfg.c_mn * 2 ** (cfg.n - cfg.m - 1)
    cutoff = (math.log(weight_sum) + 40) / (cfg.K - cfg.m + 1)
    hi = min(hi, cutoff)
    terms = []
    if hi > lo:
        half, mid = (hi - lo) / 2, (hi + lo) / 2
        theta, weight = quad.nodes()
        x = mid + half * theta
        terms = [cfg.c_p(p) * half * float(np.sum(weight * _kernel(x, cfg, p, rho, beta_tilde, eps)))
                 for p in cfg.p_range]
    starved = float(order_stat_cdf(lo, cfg.K, cfg.m))
    try:
        return check_probability(starved + cfg.c_mn * math.fsum(terms), "P~D_n", QUAD_PROB_TOL)
    except NumericError as exc:
        raise NumericError(f"{exc}; {quad.points} nodes are too few here, raise QuadratureSpec.points") from exc


def quadrature_doubling_delta(
    cfg: OrderedPairConfig,
    rho: float,
    beta_tilde: float,
    task: DownlinkTaskSpec,
    quad: QuadratureSpec | None = None,
) -> float:
    """Change in :func:`p_d_tilde_quadrature` when the node count is doubled."""
    quad = quad or QuadratureSpec()
    coarse = p_d_tilde_quadrature(cfg, rho, beta_tilde, task, quad)
    fine = p_d_tilde_quadrature(cfg, rho, beta_tilde, task, QuadratureSpec(2 * quad.points))
    return abs(fine - coarse)


def decay_exponent_fit(curve, window: tuple[float, float]) -> float:
    """Negated least-squares slope of ``log p`` against ``log rho`` inside a dB window.

    ``curve`` is an iterable of ``(rho_linear, probability)``.
    """
    lo_db, hi_db = window
    pts = [(r, p) for r, p in curve if lo_db - 1e-9 <= 10 * math.log10(r) <= hi_db + 1e-9]
    if len(pts) < 4:
        raise DomainError(f"need at least 4 points in window {window}, got {len(pts)}")
    rho, prob = np.array(pts, dtype=float).T
    if np.any(prob <= 0):
        raise DomainError("probabilities in the fit window must be > 0")
    slope = np.polyfit(np.log(rho), np.log(prob), 1)[0]
    return float(-slope)


def p_d_latency_mc(
    cfg: OrderedPairConfig,
    rho: float,
    scaling: DownlinkScaling,
    bits: tuple[float, float],
    trials: int,
    seed: int = 0,
    slot: float = 1.0,
    chunk: int | None = None,
):
    """Monte Carlo probabilities that each server's task fits in one shared slot.

    ``bits = (N_m, N_n)``; the power split is fixed, not CR-adaptive.
    Returns ``(estimate_m, estimate_n)``.
    """
    from .mc_oracle import MonteCarloSpec, downlink_latency_events, estimate_events

    if not rho > 0:
        raise ConfigurationError(f"rho must be > 0, got {rho}")
    bits_m, bits_n = bits
    if bits_m < 0 or bits_n < 0:
        raise ConfigurationError("task sizes must be >= 0")
    spec = MonteCarloSpec(trials, seed, chunk)
    events = downlink_latency_events(rho, scaling, bits_m, bits_n, slot)
    est_m, est_n = estimate_events(events, cfg, spec)
    return est_m, est_n


def raw_region_constraint(x, rho, beta_tilde, epsilon):
    """``x <= feasible_strong_bound(x)``: room left for ``|g_n|^2 >= |g_m|^2 = x``."""
    x = np.asarray(x, dtype=float)
    return x <= feasible_strong_bound(x, rho, beta_tilde, epsilon)


def simplified_region_constraint(x, rho, beta_tilde, epsilon):
    """Equivalent form of :func:`raw_region_constraint` for ``x > epsilon/rho``."""
    return np.asarray(x, dtype=float) <= epsilon / (beta_tilde * np.asarray(rho, dtype=float))
