"""Acceptance checks comparing closed forms, asymptotics and Monte Carlo.

Each ``check_*`` function runs one numbered criterion and returns a
:class:`CriterionResult` whose ``lines`` hold one entry per grid point.
:func:`validate` runs them all and prints the report.
"""
from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import downlink, mc_oracle, sweep, uplink_energy, uplink_latency
from .chanstat import OrderedPairConfig, binomial_identity_lhs
from .downlink import DownlinkTaskSpec, QuadratureSpec
from .mc_oracle import MonteCarloSpec
from .uplink_energy import EnergyScaling, GrowthPath, Regime
from .uplink_latency import SnrOperatingPoint

UPLINK_PAIRS = ((1, 2), (2, 4), (4, 5))
ENERGY_PAIRS = ((1, 2), (3, 5))
DOWNLINK_PAIRS = ((1, 2), (2, 4))
DOWNLINK_BETAS = (0.2, 0.5)
DOWNLINK_RHO_DB = tuple(range(10, 41, 5))


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool = True
    lines: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def record(self, ok: bool, text: str) -> None:
        self.passed &= bool(ok)
        self.lines.append(f"  [{'PASS' if ok else 'FAIL'}] {text}")

    def summary(self) -> str:
        return f"criterion {self.number:2d} {'PASS' if self.passed else 'FAIL'}  {self.name} ({self.seconds:.1f} s)"


def _mc_line(label: str, exact: float, est) -> tuple[bool, str]:
    ok = est.agrees_with(exact)
    tol = max(3 * est.stderr, 5e-3)
    return ok, f"{label}: analytic={exact:.6f} mc={est.value:.6f} stderr={est.stderr:.2e} |d|={abs(exact - est.value):.2e} tol={tol:.2e}"


def check_identity() -> CriterionResult:
    res = CriterionResult(1, "binomial identity for 1 <= m < M <= 12")
    start = time.perf_counter()
    worst = max(abs(binomial_identity_lhs(M, m) - 1) for M in range(2, 13) for m in range(1, M))
    elapsed = time.perf_counter() - start
    res.record(worst <= 1e-10, f"max |lhs - 1| = {worst:.2e} (limit 1e-10)")
    res.record(elapsed < 1.0, f"runtime {elapsed * 1e3:.1f} ms (limit 1 s)")
    return res


def check_uplink_oracle(trials: int = 10**6, seed: int = 1) -> CriterionResult:
    res = CriterionResult(2, "uplink latency closed form against Monte Carlo")
    spec = MonteCarloSpec(trials, seed)
    for m, n in UPLINK_PAIRS:
        cfg = OrderedPairConfig(5, m, n)
        for rho_m_db in (0, 10, 20):
            for eta in (0.5, 2, 5):
                snr = SnrOperatingPoint.from_eta(10 ** (rho_m_db / 10), eta)
                ok, text = _mc_line(
                    f"(m,n)=({m},{n}) rho_m={rho_m_db} dB eta={eta}",
                    uplink_latency.p_n_exact(cfg, snr),
                    mc_oracle.p_n_mc(cfg, snr, spec),
                )
                res.record(ok, text)
    return res


def check_uplink_limits() -> CriterionResult:
    res = CriterionResult(3, "uplink latency low-SNR and strong-user limits")
    for m, n in UPLINK_PAIRS:
        cfg = OrderedPairConfig(5, m, n)
        low = uplink_latency.p_n_exact(cfg, SnrOperatingPoint.from_eta(1e-3, 2))
        res.record(low >= 0.99, f"(m,n)=({m},{n}) rho_m=-30 dB eta=2: P={low:.6f} (>= 0.99)")
        strong = uplink_latency.p_n_exact(cfg, SnrOperatingPoint.from_db(0, 60))
        res.record(strong >= 0.99, f"(m,n)=({m},{n}) rho_m=0 dB rho_n=60 dB: P={strong:.6f} (>= 0.99)")
    return res


def _loglog_slope(xs_db, ys) -> float:
    x = np.log(10 ** (np.asarray(xs_db, dtype=float) / 10))
    return float(np.polyfit(x, np.log(ys), 1)[0])


def check_uplink_decay() -> CriterionResult:
    res = CriterionResult(4, "uplink latency high-SNR decay slope -m/2")
    grid_db = np.arange(35, 55.1, 2.5)
    for m in (1, 2, 3):
        for n in range(m + 1, 6):
            cfg = OrderedPairConfig(5, m, n)
            vals = [uplink_latency.p_n_exact(cfg, SnrOperatingPoint.from_db(d - 10 * math.log10(2), d)) for d in grid_db]
            slope = _loglog_slope(grid_db, vals)
            res.record(abs(slope + m / 2) <= 0.1, f"(m,n)=({m},{n}) eta=2: slope={slope:.4f} target={-m / 2}")
    return res


def check_energy_oracle(trials: int = 10**6, seed: int = 2) -> CriterionResult:
    res = CriterionResult(5, "uplink energy closed form against Monte Carlo")
    spec = MonteCarloSpec(trials, seed)
    for m, n in ENERGY_PAIRS:
        cfg = OrderedPairConfig(5, m, n)
        for beta in (1 / 8, 1 / 4, 1 / 3):
            scale = EnergyScaling(beta)
            for rho_n_db in range(10, 41, 5):
                snr = SnrOperatingPoint.from_db(10, rho_n_db)
                exact = uplink_energy.p_tilde_exact(cfg, snr, scale)
                branch = "covers" if uplink_energy.threshold_covers_floor(snr, scale) else "bounded"
                ok, text = _mc_line(
                    f"(m,n)=({m},{n}) beta={beta:.4f} rho_n={rho_n_db} dB [{branch}]",
                    exact,
                    mc_oracle.p_tilde_mc(cfg, snr, scale, spec),
                )
                res.record(ok and 0 <= exact <= 1, text)
    return res


def check_energy_anchor() -> CriterionResult:
    res = CriterionResult(6, "uplink energy anchor near 1e-2 at rho_n = 25 dB")
    snr, scale = SnrOperatingPoint.from_db(10, 25), EnergyScaling(1 / 8)
    hits = []
    for n in (2, 5):
        val = uplink_energy.p_tilde_exact(OrderedPairConfig(5, 1, n), snr, scale)
        inside = 1e-2 / 3 <= val <= 3e-2
        if inside:
            hits.append(n)
        res.lines.append(f"  [info] n={n}: P~={val:.6f} ({'within' if inside else 'outside'} a factor 3 of 1e-2)")
    res.record(bool(hits), f"chosen n = {hits[0] if hits else 'none'}")
    return res


def check_energy_regimes() -> CriterionResult:
    res = CriterionResult(7, "uplink energy vanishing and plateau regimes")
    for m, n in ENERGY_PAIRS:
        cfg = OrderedPairConfig(5, m, n)
        quarter = EnergyScaling(1 / 4)
        val = uplink_energy.p_tilde_exact(cfg, SnrOperatingPoint.from_db(10, 55), quarter)
        regime, _ = uplink_energy.p_tilde_regime(GrowthPath(False, True), quarter)
        res.record(val < 1e-3 and regime is Regime.VANISHES,
                   f"(m,n)=({m},{n}) rho_m=10 dB rho_n=55 dB beta=1/4: P~={val:.3e} (< 1e-3), regime={regime.value}")

        fifth = EnergyScaling(1 / 5)
        at = [uplink_energy.p_tilde_exact(cfg, SnrOperatingPoint.from_db(d - 10 * math.log10(2), d), fifth) for d in (50, 60)]
        regime, const = uplink_energy.p_tilde_regime(GrowthPath(True, True, 0.5), fifth, cfg)
        res.record(abs(at[0] - at[1]) < 1e-2 and regime is Regime.PLATEAUS,
                   f"(m,n)=({m},{n}) ratio=1/2 beta=1/5: P~(50 dB)={at[0]:.6f} P~(60 dB)={at[1]:.6f}")
        res.record(abs(at[1] - const) < 1e-2, f"(m,n)=({m},{n}) plateau constant {const:.6f} vs P~(60 dB)={at[1]:.6f}")
    return res


def _downlink_grid():
    task = DownlinkTaskSpec(bits=1.0, slot=1.0)
    for m, n in DOWNLINK_PAIRS:
        for bt in DOWNLINK_BETAS:
            for rho_db in DOWNLINK_RHO_DB:
                yield OrderedPairConfig(5, m, n), bt, rho_db, task


def check_downlink_oracle(trials: int = 10**7, seed: int = 3) -> CriterionResult:
    res = CriterionResult(8, "downlink energy quadrature against Monte Carlo")
    spec = MonteCarloSpec(trials, seed)
    for cfg, bt, rho_db, task in _downlink_grid():
        rho = 10 ** (rho_db / 10)
        ok, text = _mc_line(
            f"(m,n)=({cfg.m},{cfg.n}) beta~={bt} rho={rho_db} dB",
            downlink.p_d_tilde_quadrature(cfg, rho, bt, task),
            mc_oracle.p_d_tilde_mc(cfg, rho, bt, task, spec),
        )
        res.record(ok, text)
    return res


def check_downlink_decay() -> CriterionResult:
    res = CriterionResult(9, "downlink energy high-SNR decay exponent m")
    task = DownlinkTaskSpec(bits=1.0, slot=1.0)
    rho_db = np.arange(35, 55.1, 2.5)
    for m, n in DOWNLINK_PAIRS:
        cfg = OrderedPairConfig(5, m, n)
        for bt in DOWNLINK_BETAS:
            curve = [(10 ** (d / 10), downlink.p_d_tilde_quadrature(cfg, 10 ** (d / 10), bt, task)) for d in rho_db]
            d = downlink.decay_exponent_fit(curve, (35, 55))
            res.record(abs(d - m) <= 0.15, f"(m,n)=({m},{n}) beta~={bt}: exponent={d:.4f} target={m}")
    return res


def check_quadrature_stability() -> CriterionResult:
    res = CriterionResult(10, "quadrature stable under doubling the node count")
    quad = QuadratureSpec()
    for cfg, bt, rho_db, task in _downlink_grid():
        delta = downlink.quadrature_doubling_delta(cfg, 10 ** (rho_db / 10), bt, task, quad)
        res.record(delta < 1e-4, f"(m,n)=({cfg.m},{cfg.n}) beta~={bt} rho={rho_db} dB: delta={delta:.2e}")
    return res


def sample_region_tuples(count: int = 10**4, seed: int = 11):
    """Random ``(x, rho, beta_tilde, epsilon)`` with ``x`` above ``epsilon/rho``.

    ``x`` is spread log-uniformly on both sides of ``epsilon/(beta_tilde rho)``.
    """
    rng = np.random.default_rng(seed)
    rho = 10 ** rng.uniform(0, 6, count)
    bt = rng.uniform(0.01, 0.99, count)
    eps = 2 ** rng.uniform(0.1, 4, count) - 1
    lo = eps / rho
    x = lo * (1 + 10 ** rng.uniform(-4, 3, count))
    return x, rho, bt, eps


def check_region_identity(count: int = 10**4, seed: int = 11) -> CriterionResult:
    res = CriterionResult(11, "raw and simplified downlink region constraints agree")
    x, rho, bt, eps = sample_region_tuples(count, seed)
    raw = downlink.raw_region_constraint(x, rho, bt, eps)
    simple = downlink.simplified_region_constraint(x, rho, bt, eps)
    mismatches = int(np.count_nonzero(raw != simple))
    res.record(mismatches == 0, f"{count} tuples with x > eps/rho: {mismatches} mismatches, {int(raw.sum())} inside")
    return res


def check_determinism(trials: int = 10**6, seed: int = 1) -> CriterionResult:
    res = CriterionResult(12, "sweep CSV is byte-identical for a repeated seed")
    texts = []
    for _ in range(2):
        body = []
        for m, n in UPLINK_PAIRS:
            for eta in (0.5, 2, 5):
                cfg = sweep.SweepConfig(
                    "uplink-latency",
                    sweep.GridAxis("rho_m_db", 0, 20, 10),
                    {"M": 5, "m": m, "n": n, "eta": eta},
                    MonteCarloSpec(trials, seed),
                )
                body.append(sweep.run_sweep(cfg))
        texts.append("".join(body).encode())
    res.record(texts[0] == texts[1], f"{len(texts[0])} bytes, identical={texts[0] == texts[1]}")
    return res


CHECKS: dict[int, Callable[[], CriterionResult]] = {
    1: check_identity,
    2: check_uplink_oracle,
    3: check_uplink_limits,
    4: check_uplink_decay,
    5: check_energy_oracle,
    6: check_energy_anchor,
    7: check_energy_regimes,
    8: check_downlink_oracle,
    9: check_downlink_decay,
    10: check_quadrature_stability,
    11: check_region_identity,
    12: check_determinism,
}


def run_check(number: int) -> CriterionResult:
    start = time.perf_counter()
    res = CHECKS[number]()
    res.seconds = time.perf_counter() - start
    return res


def validate(numbers=None, stream=None, verbose: bool = True) -> list[CriterionResult]:
    """Run the selected criteria (all by default) and print the report."""
    stream = stream or sys.stdout
    results = []
    for number in numbers or sorted(CHECKS):
        res = run_check(number)
        print(res.summary(), file=stream)
        if verbose:
            for line in res.lines:
                print(line, file=stream)
        stream.flush()
        results.append(res)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f"; failed: {failed}" if failed else ""), file=stream)
    return results
