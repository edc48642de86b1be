"""Brute-force Monte Carlo estimates built from the raw event definitions.

Each built-in event compares bit counts (or the equivalent gain threshold)
directly and never reuses the closed-form algebra it is meant to check.

Trials are split into ``chunk``-sized blocks; block ``i`` draws from
``SeedSequence(seed, spawn_key=(i,))``.  Results therefore depend only on
``(seed, trials, chunk)``, not on how many workers evaluate the blocks.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .chanstat import OrderedPairConfig, sample_ordered_pairs
from .downlink import DownlinkScaling, DownlinkTaskSpec, cr_power_allocation, downlink_rates, oma_bits
from .errors import ConfigurationError
from .uplink_energy import EnergyScaling
from .uplink_latency import SnrOperatingPoint

Event = Callable[[np.ndarray, np.ndarray], np.ndarray]

DEFAULT_CHUNK = 1 << 20


@dataclass(frozen=True)
class MonteCarloSpec:
    trials: int
    seed: int = 0
    chunk: int = field(default=None)

    def __post_init__(self):
        if isinstance(self.trials, bool) or not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise ConfigurationError(f"trials must be a positive integer, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.chunk is None:
            object.__setattr__(self, "chunk", min(self.trials, DEFAULT_CHUNK))
        if not 1 <= self.chunk <= self.trials:
            raise ConfigurationError(f"chunk must lie in [1, trials], got {self.chunk}")

    def blocks(self) -> list[tuple[int, int]]:
        """``(index, size)`` of each sub-stream."""
        full, rest = divmod(self.trials, self.chunk)
        sizes = [self.chunk] * full + ([rest] if rest else [])
        return list(enumerate(sizes))


@dataclass(frozen=True)
class ProbabilityEstimate:
    value: float
    stderr: float
    trials: int

    @classmethod
    def from_hits(cls, hits: int, trials: int) -> "ProbabilityEstimate":
        v = hits / trials
        return cls(v, math.sqrt(v * (1 - v) / trials), trials)

    def agrees_with(self, exact: float, sigmas: float = 3.0, floor: float = 5e-3) -> bool:
        return abs(exact - self.value) <= max(sigmas * self.stderr, floor)


def estimate_events(
    events: Sequence[Event], cfg: OrderedPairConfig, spec: MonteCarloSpec, workers: int = 1
) -> list[ProbabilityEstimate]:
    """Estimate several events on the same ordered-pair samples."""

    def run_block(block):
        index, size = block
        rng = np.random.default_rng(np.random.SeedSequence(spec.seed, spawn_key=(index,)))
        weak, strong = sample_ordered_pairs(cfg, rng, size)
        return [int(np.count_nonzero(ev(weak, strong))) for ev in events]

    blocks = spec.blocks()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(run_block, blocks))
    else:
        counts = [run_block(b) for b in blocks]
    totals = np.sum(np.array(counts, dtype=np.int64), axis=0)
    return [ProbabilityEstimate.from_hits(int(h), spec.trials) for h in totals]


def estimate_event(
    event: Event, cfg: OrderedPairConfig, spec: MonteCarloSpec, workers: int = 1
) -> ProbabilityEstimate:
    return estimate_events([event], cfg, spec, workers)[0]


# -- built-in events ---------------------------------------------------------


def uplink_latency_event(snr: SnrOperatingPoint) -> Event:
    """User ``n`` moves its ``N`` bits inside ``T_m``: ``R_n >= R_m`` under SIC."""
    rho_m, rho_n = snr.rho_m, snr.rho_n

    def event(weak, strong):
        return strong > rho_m / rho_n * weak + rho_m**2 / rho_n * weak**2

    return event


def uplink_energy_event(snr: SnrOperatingPoint, scale: EnergyScaling) -> Event:
    """OMA delivers at least as many bits as the two-slot NOMA scheme at ``beta``."""
    rho_m, rho_n, b = snr.rho_m, snr.rho_n, scale.beta

    def event(weak, strong):
        return strong <= ((1 - b) * (1 + rho_m * weak) - b) / (b**2 * rho_n)

    return event


def downlink_energy_event(rho: float, beta_tilde: float, task: DownlinkTaskSpec) -> Event:
    """Server ``n`` gets no more bits from NOMA (both slots) than from OMA."""

    def event(weak, strong):
        scaling = cr_power_allocation(rho, weak, task, beta_tilde)
        _, slot1, slot2 = downlink_rates(rho, (weak, strong), scaling, task)
        return slot1 + slot2 <= oma_bits(rho, strong, task)

    return event


def downlink_latency_events(
    rho: float, scaling: DownlinkScaling, bits_m: float, bits_n: float, slot: float = 1.0
) -> tuple[Event, Event]:
    """Both servers' tasks fit in one slot under a fixed power split."""
    # epsilon is irrelevant to the rates; any positive bit count builds a valid spec
    task = DownlinkTaskSpec(bits=1.0, slot=slot)

    def event_m(weak, strong):
        to_m, _, _ = downlink_rates(rho, (weak, strong), scaling, task)
        return to_m >= bits_m

    def event_n(weak, strong):
        _, to_n, _ = downlink_rates(rho, (weak, strong), scaling, task)
        return to_n >= bits_n

    return event_m, event_n


# -- convenience wrappers ----------------------------------------------------


def p_n_mc(cfg, snr, spec, workers=1) -> ProbabilityEstimate:
    return estimate_event(uplink_latency_event(snr), cfg, spec, workers)


def p_tilde_mc(cfg, snr, scale, spec, workers=1) -> ProbabilityEstimate:
    return estimate_event(uplink_energy_event(snr, scale), cfg, spec, workers)


def p_d_tilde_mc(cfg, rho, beta_tilde, task, spec, workers=1) -> ProbabilityEstimate:
    return estimate_event(downlink_energy_event(rho, beta_tilde, task), cfg, spec, workers)
