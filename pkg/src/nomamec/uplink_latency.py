"""Probability that the strong uplink user finishes inside the weak user's slot.

User ``n`` shares user ``m``'s OMA slot ``T_m`` and is decoded first.  It
finishes within ``T_m`` when

    |h_n|^2 > (rho_m/rho_n) |h_m|^2 + (rho_m^2/rho_n) |h_m|^4.

Splitting on whether the threshold exceeds the ordering floor ``|h_m|^2``
gives a Gaussian-type integral (expressed through ``erfcx``) plus the
marginal CDF of ``|h_m|^2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .chanstat import (
    ChannelGainPair,
    OrderedPairConfig,
    check_probability,
    order_stat_cdf,
    scaled_complement,
)
from .errors import ConfigurationError, NumericError

@dataclass(frozen=True)
class SnrOperatingPoint:
    """Linear transmit SNRs of the weak and strong user."""

    rho_m: float
    rho_n: float
    eta: float = field(default=None)

    def __post_init__(self):
        if not (self.rho_m > 0 and self.rho_n > 0):
            raise ConfigurationError(f"SNRs must be > 0, got {self.rho_m}, {self.rho_n}")
        if not (math.isfinite(self.rho_m) and math.isfinite(self.rho_n)):
            raise ConfigurationError("SNRs must be finite")
        ratio = self.rho_n / self.rho_m
        if self.eta is None:
            object.__setattr__(self, "eta", ratio)
        elif abs(self.eta - ratio) > 1e-12 * max(1.0, ratio):
            raise ConfigurationError(f"eta={self.eta} inconsistent with rho_n/rho_m={ratio}")

    @classmethod
    def from_eta(cls, rho_m: float, eta: float) -> "SnrOperatingPoint":
        return cls(rho_m, rho_m * eta)

    @classmethod
    def from_db(cls, rho_m_db: float, rho_n_db: float) -> "SnrOperatingPoint":
        return cls(10 ** (rho_m_db / 10), 10 ** (rho_n_db / 10))


@dataclass(frozen=True)
class HighSnrTerms:
    """Per-summand quantities of the high-SNR expansion."""

    a: float
    b: float
    lam: float
    mu_m: float
    q1_tilde: float
    q2_tilde: float


def p_n_exact(cfg: OrderedPairConfig, snr: SnrOperatingPoint) -> float:
    """Closed-form probability that user ``n`` completes offloading within ``T_m``."""
    cfg.require_range()
    M, m = cfg.M, cfg.m
    rho_m, rho_n = snr.rho_m, snr.rho_n
    # |h_m|^2 below this point: the quadratic threshold sits under the ordering floor.
    split = max(0.0, rho_n - rho_m) / rho_m**2

    terms = []
    for p in cfg.p_range:
        k = M - m - p
        a = rho_m**2 / rho_n * k
        sqrt_a = math.sqrt(a)
        inner = []
        for l in cfg.l_range:
            b = p + l + 1 + k * rho_m / rho_n
            z = sqrt_a * split + b / (2 * sqrt_a)
            # e^{b^2/4a} (1 - Phi(z)) with z^2 = a*split^2 + b*split + b^2/4a
            gauss = scaled_complement(z) * math.exp(-a * split**2 - b * split)
            t = cfg.c_l(l) * math.sqrt(math.pi) / (2 * sqrt_a) * gauss
            if not math.isfinite(t):
                raise NumericError("non-finite summand", index=(p, l))
            inner.append(t)
        terms.append(cfg.c_p(p) / k * math.fsum(inner))
    upper = cfg.c_mn * math.fsum(terms)
    lower = float(order_stat_cdf(split, M, m))
    return check_probability(upper + lower, "P_n")


def _double_factorial(k: int) -> int:
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def high_snr_terms(cfg: OrderedPairConfig, rho_m: float, eta: float, p: int) -> HighSnrTerms:
    """Leading coefficients of the two series in the high-SNR expansion for summand ``p``.

    ``q1_tilde`` and ``q2_tilde`` are the series values with ``a^{m/2}``
    factored out, so the subdominant one still carries ``a^{-1/2}``.
    """
    M, m = cfg.M, cfg.m
    k = M - m - p
    a = rho_m * k / eta
    lam = p + 1 + k / eta
    b = lam  # value at l = 0; b = l + lam in general
    sum_lm = sum(cfg.c_l(l) * l**m for l in cfg.l_range)
    sign = (-1) ** (m - 1)
    mu = sum_lm + math.factorial(m) * lam * sign
    sqrt_pi = math.sqrt(math.pi)
    if m % 2:
        q1 = sqrt_pi * sign * math.factorial(m - 1) / (math.factorial((m - 1) // 2) * 2**m)
        q2 = mu / (_double_factorial(m) * 2 ** ((m + 1) / 2) * math.sqrt(a))
    else:
        q1 = sqrt_pi * mu / (math.factorial(m // 2) * 2 ** (m + 1) * math.sqrt(a))
        q2 = sign * math.factorial(m - 1) / (_double_factorial(m - 1) * 2 ** (m / 2))
    return HighSnrTerms(a=a, b=b, lam=lam, mu_m=mu, q1_tilde=q1, q2_tilde=q2)


def p_n_highsnr(cfg: OrderedPairConfig, rho_m: float, eta: float) -> float:
    """High-SNR approximation of :func:`p_n_exact` for fixed ``eta = rho_n/rho_m``."""
    cfg.require_range()
    M, m = cfg.M, cfg.m
    total = []
    for p in cfg.p_range:
        h = high_snr_terms(cfg, rho_m, eta, p)
        total.append(
            eta ** (m / 2) * cfg.c_mn * cfg.c_p(p) / (M - m - p) ** (m / 2 + 1)
            * (h.q1_tilde - h.q2_tilde)
        )
    return math.fsum(total) / rho_m ** (m / 2)


def p_n_highsnr_dominant(cfg: OrderedPairConfig, rho_m: float, eta: float) -> float:
    """Dominant term only: decays as ``(rho_m/eta)^{-m/2}``."""
    cfg.require_range()
    M, m = cfg.M, cfg.m
    if m % 2:
        coeff = math.sqrt(math.pi) * math.factorial(m - 1) / (
            math.factorial((m - 1) // 2) * 2**m
        )
    else:
        coeff = math.factorial(m - 1) / (_double_factorial(m - 1) * 2 ** (m / 2))
    s = math.fsum(
        cfg.c_mn * cfg.c_p(p) * coeff / (M - m - p) ** (m / 2 + 1) for p in cfg.p_range
    )
    return s / (rho_m / eta) ** (m / 2)


def min_noma_power(rho_m: float, gains: ChannelGainPair) -> tuple[float, float]:
    """Minimal strong-user SNR for NOMA within ``T_m`` and its OMA counterpart.

    Returns ``(noma_power, oma_power)``; their difference is the latency price
    ``(rho_m |h_m|^2)^2 / |h_n|^2``.
    """
    if rho_m <= 0:
        raise ConfigurationError(f"rho_m must be > 0, got {rho_m}")
    if gains.strong_gain == 0:
        raise ZeroDivisionError("strong_gain is zero")
    ratio = gains.weak_gain / gains.strong_gain
    oma = ratio * rho_m
    noma = oma * (1 + rho_m * gains.weak_gain)
    return noma, oma

