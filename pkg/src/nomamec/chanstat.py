"""Order statistics of unit-mean exponential channel gains.

Rayleigh fading with normalised noise gives channel power gains that are
i.i.d. ``Exp(1)``.  Users (or servers) are sorted by gain, and a NOMA pair is
the ``m``-th and ``n``-th smallest of ``population`` draws.  Every closed form
in the package is built from the joint density of that pair,

    f(x, y) = c_mn e^{-x} e^{-(M-n+1) y} (1 - e^{-x})^{m-1} (e^{-x} - e^{-y})^{n-1-m},

expanded with the binomial theorem into alternating sums whose coefficients
are exposed here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConfigurationError, NumericError, RangeError

#: Largest population for which the alternating binomial sums are trusted.
MAX_POPULATION = 20

#: Slack allowed before a closed-form probability is declared out of range.
PROB_TOL = 1e-9


@dataclass(frozen=True)
class OrderedPairConfig:
    """Population size and the two sorted indices paired for NOMA (1-based)."""

    population: int
    weak_index: int
    strong_index: int

    def __post_init__(self):
        M, m, n = self.population, self.weak_index, self.strong_index
        for name, v in (("population", M), ("weak_index", m), ("strong_index", n)):
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise ConfigurationError(f"{name} must be an integer, got {v!r}")
        if M < 2:
            raise ConfigurationError(f"population must be >= 2, got {M}")
        if not 1 <= m < n <= M:
            raise ConfigurationError(
                f"need 1 <= m < n <= M, got m={m}, n={n}, M={M}"
            )

    @property
    def M(self) -> int:
        return self.population

    K = M  # servers in the downlink

    @property
    def m(self) -> int:
        return self.weak_index

    @property
    def n(self) -> int:
        return self.strong_index

    def require_range(self) -> None:
        if self.population > MAX_POPULATION:
            raise RangeError(
                f"population {self.population} exceeds {MAX_POPULATION}; "
                "alternating binomial sums lose precision beyond this"
            )

    @property
    def c_mn(self) -> int:
        M, m, n = self.M, self.m, self.n
        return math.factorial(M) // (
            math.factorial(m - 1) * math.factorial(n - 1 - m) * math.factorial(M - n)
        )

    def c_p(self, p: int) -> int:
        k = self.n - 1 - self.m
        return math.comb(k, p) * (-1) ** (k - p)

    def c_l(self, l: int) -> int:
        return math.comb(self.m - 1, l) * (-1) ** l

    @property
    def p_range(self) -> range:
        return range(self.n - self.m)

    @property
    def l_range(self) -> range:
        return range(self.m)


@dataclass(frozen=True)
class ChannelGainPair:
    """Gains of the weak and strong node of a NOMA pair."""

    weak_gain: float
    strong_gain: float

    def __post_init__(self):
        w, s = self.weak_gain, self.strong_gain
        if not (math.isfinite(w) and math.isfinite(s)) or w < 0 or s < 0:
            raise ConfigurationError(f"gains must be finite and >= 0, got {w}, {s}")
        if w > s:
            raise ConfigurationError(f"weak_gain {w} exceeds strong_gain {s}")


def ordered_joint_pdf(x, y, cfg: OrderedPairConfig):
    """Joint density of the ``m``-th and ``n``-th smallest of ``M`` Exp(1) draws.

    Accepts scalars or broadcastable arrays; zero outside ``0 <= x <= y``.
    """
    M, m, n = cfg.M, cfg.m, cfg.n
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    inside = (x >= 0) & (x <= y)
    xs = np.where(inside, x, 0.0)
    ys = np.where(inside, y, 0.0)
    with np.errstate(invalid="ignore", over="ignore"):
        gap = np.exp(-xs) - np.exp(-ys)
        val = (
            cfg.c_mn
            * np.exp(-xs - (M - n + 1) * ys)
            * (-np.expm1(-xs)) ** (m - 1)
            * gap ** (n - 1 - m)
        )
    out = np.where(inside, val, 0.0)
    return out if out.ndim else float(out)


def order_stat_cdf(t, population: int, index: int):
    """P(X_(index) <= t) for the ``index``-th smallest of ``population`` Exp(1).

    Evaluated as a binomial tail of ``F = 1 - e^{-t}`` with positive terms only,
    so small probabilities keep full relative precision.
    """
    t = np.asarray(t, dtype=float)
    F = -np.expm1(-np.maximum(t, 0.0))
    S = np.exp(-np.maximum(t, 0.0))
    total = np.zeros_like(t)
    for j in range(index, population + 1):
        total = total + math.comb(population, j) * F**j * S ** (population - j)
    total = np.where(t > 0, total, 0.0)
    return total if total.ndim else float(total)


def ordered_pair_from_uniforms(u, cfg: OrderedPairConfig):
    """Map uniforms of shape ``(..., M)`` to sorted gains via ``-ln(1 - U)``.

    Returns ``(weak, strong)`` arrays with the trailing axis removed.
    """
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != cfg.M:
        raise ConfigurationError(f"need {cfg.M} uniforms per draw, got {u.shape[-1]}")
    gains = np.sort(-np.log1p(-u), axis=-1)
    return gains[..., cfg.m - 1], gains[..., cfg.n - 1]


def sample_ordered_pairs(cfg: OrderedPairConfig, rng: np.random.Generator, size: int):
    """Draw ``size`` independent ordered pairs; returns ``(weak, strong)`` arrays."""
    return ordered_pair_from_uniforms(rng.random((size, cfg.M)), cfg)


def sample_ordered_pair(cfg: OrderedPairConfig, rng: np.random.Generator) -> ChannelGainPair:
    weak, strong = ordered_pair_from_uniforms(rng.random(cfg.M), cfg)
    return ChannelGainPair(float(weak), float(strong))


def prob_integral(x):
    """Probability integral (2/sqrt(pi)) * int_0^x exp(-t^2) dt."""
    out = special.erf(x)
    return out if np.ndim(out) else float(out)


def scaled_complement(z):
    """exp(z^2) * (1 - prob_integral(z)), finite for large ``z``."""
    out = special.erfcx(z)
    return out if np.ndim(out) else float(out)


def binomial_identity_lhs(M: int, m: int) -> float:
    """Left-hand side of ``M!/((m-1)!(M-m)!) * sum_l c_l/(M-m+l+1)``, which equals 1.

    The alternating sum is accumulated with ``math.fsum`` (exactly rounded).
    """
    if not 1 <= m < M:
        raise ConfigurationError(f"need 1 <= m < M, got m={m}, M={M}")
    if M > MAX_POPULATION:
        raise RangeError(f"M={M} exceeds {MAX_POPULATION}")
    prefactor = math.factorial(M) // (math.factorial(m - 1) * math.factorial(M - m))
    s = math.fsum(
        math.comb(m - 1, l) * (-1) ** l / (M - m + l + 1) for l in range(m)
    )
    return prefactor * s


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def check_probability(raw: float, what: str = "probability", tol: float = PROB_TOL) -> float:
    """Clamp ``raw`` to [0, 1] after checking it lies within ``tol`` of that range."""
    if not math.isfinite(raw):
        raise NumericError(f"{what} is not finite: {raw}")
    if raw < -tol or raw > 1 + tol:
        raise NumericError(f"{what}={raw!r} outside [0, 1] beyond tolerance")
    return min(max(raw, 0.0), 1.0)
