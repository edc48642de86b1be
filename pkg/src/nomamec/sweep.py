"""SNR sweeps written as CSV, one row per grid point.

Every mode evaluates the closed form (where one exists), an asymptotic
approximation (where one exists) and, optionally, a Monte Carlo estimate on
the same grid.  SNR inputs are in dB; ``linear = 10**(dB/10)``.

All grid points share the Monte Carlo seed (common random numbers), so a
curve is smooth in its parameter and the file depends only on the config.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import downlink, mc_oracle, uplink_energy, uplink_latency
from .chanstat import OrderedPairConfig
from .errors import ConfigurationError
from .mc_oracle import MonteCarloSpec
from .uplink_latency import SnrOperatingPoint

MODES = (
    "uplink-latency",
    "uplink-latency-asymptotic",
    "uplink-energy",
    "downlink-energy",
    "downlink-latency",
)

RESULT_COLUMNS = ["analytic", "asymptotic", "mc_value", "mc_stderr", "mc_trials"]
EXTRA_COLUMNS = {"downlink-latency": ["mc_value_n", "mc_stderr_n"]}

_UPLINK_PARAMS = ["M", "m", "n", "rho_m_db", "rho_n_db", "eta"]
PARAM_COLUMNS = {
    "uplink-latency": _UPLINK_PARAMS,
    "uplink-latency-asymptotic": _UPLINK_PARAMS,
    "uplink-energy": _UPLINK_PARAMS + ["beta"],
    "downlink-energy": ["K", "m", "n", "rho_db", "beta_tilde", "bits", "slot", "quad_points"],
    "downlink-latency": ["K", "m", "n", "rho_db", "alpha_n_sq", "bits_m", "bits_n", "slot"],
}
GRID_PARAMS = {
    "uplink-latency": ("rho_m_db", "rho_n_db"),
    "uplink-latency-asymptotic": ("rho_m_db", "rho_n_db"),
    "uplink-energy": ("rho_m_db", "rho_n_db"),
    "downlink-energy": ("rho_db",),
    "downlink-latency": ("rho_db",),
}
DEFAULTS = {"slot": 1.0, "quad_points": downlink.DEFAULT_QUAD_POINTS}
INT_PARAMS = {"M", "K", "m", "n", "quad_points"}


@dataclass(frozen=True)
class GridAxis:
    param: str
    start_db: float
    stop_db: float
    step_db: float

    @classmethod
    def parse(cls, text: str) -> "GridAxis":
        """Parse ``param:start:stop:step`` (dashes in ``param`` are accepted)."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigurationError(f"sweep must look like param:start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(v) for v in parts[1:])
        except ValueError as exc:
            raise ConfigurationError(f"bad sweep bounds in {text!r}") from exc
        return cls(parts[0].replace("-", "_"), start, stop, step)

    def values(self) -> list[float]:
        if not self.step_db > 0 or self.stop_db < self.start_db:
            raise ConfigurationError(f"empty or ill-formed grid {self}")
        count = int(math.floor((self.stop_db - self.start_db) / self.step_db + 1e-9)) + 1
        return [round(self.start_db + i * self.step_db, 10) for i in range(count)]


@dataclass
class SweepConfig:
    mode: str
    grid: GridAxis
    fixed: dict = field(default_factory=dict)
    mc: MonteCarloSpec | None = None
    output: str | Path | None = None

    def validate(self) -> None:
        """Reject bad modes, missing parameters and out-of-range values up front."""
        if self.mode not in MODES:
            raise ConfigurationError(f"unknown mode {self.mode!r}; choose from {MODES}")
        if self.grid.param not in GRID_PARAMS[self.mode]:
            raise ConfigurationError(
                f"mode {self.mode} sweeps one of {GRID_PARAMS[self.mode]}, got {self.grid.param}"
            )
        for point in self.points():
            self._build(point)  # dataclass validators raise on bad values

    def points(self) -> list[dict]:
        base = {**DEFAULTS, **{k: v for k, v in self.fixed.items() if v is not None}}
        try:
            base = {k: int(v) if k in INT_PARAMS else float(v) for k, v in base.items()}
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"non-numeric parameter: {exc}") from exc
        pts = []
        for value in self.grid.values():
            pt = dict(base)
            pt[self.grid.param] = value
            if self.mode.startswith("uplink"):
                _complete_uplink(pt, self.mode, self.grid.param)
            if self.mode == "downlink-latency":
                pt.setdefault("bits_m", pt.get("bits"))
                pt.setdefault("bits_n", pt.get("bits"))
            pts.append(pt)
        return pts

    def _build(self, pt: dict):
        if self.mode == "downlink-latency" and self.mc is None:
            raise ConfigurationError("downlink-latency is simulation-only: --mc-trials is required")
        missing = [c for c in PARAM_COLUMNS[self.mode] if pt.get(c) is None]
        if missing:
            raise ConfigurationError(f"mode {self.mode} is missing parameters: {missing}")
        pop = pt.get("M", pt.get("K"))
        cfg = OrderedPairConfig(int(pop), int(pt["m"]), int(pt["n"]))
        cfg.require_range()
        if self.mode.startswith("uplink"):
            snr = SnrOperatingPoint.from_db(pt["rho_m_db"], pt["rho_n_db"])
            extra = uplink_energy.EnergyScaling(pt["beta"]) if self.mode == "uplink-energy" else None
            return cfg, snr, extra
        rho = 10 ** (pt["rho_db"] / 10)
        if self.mode == "downlink-energy":
            if not 0 < pt["beta_tilde"] < 1:
                raise ConfigurationError(f"beta_tilde must lie in (0, 1), got {pt['beta_tilde']}")
            task = downlink.DownlinkTaskSpec(pt["bits"], pt["slot"])
            return cfg, rho, (task, downlink.QuadratureSpec(int(pt["quad_points"])))
        if not 0 <= pt["alpha_n_sq"] <= 1:
            raise ConfigurationError(f"alpha_n_sq must lie in [0, 1], got {pt['alpha_n_sq']}")
        if pt["bits_m"] < 0 or pt["bits_n"] < 0 or not pt["slot"] > 0:
            raise ConfigurationError("task sizes must be >= 0 and slot > 0")
        return cfg, rho, downlink.DownlinkScaling.fixed(pt["alpha_n_sq"])


def _complete_uplink(pt: dict, mode: str, swept: str) -> None:
    """Fill whichever of rho_m_db / rho_n_db / eta is implied by the other two."""
    eta = pt.get("eta")
    if mode == "uplink-latency-asymptotic" and eta is None:
        raise ConfigurationError("uplink-latency-asymptotic needs a fixed eta")
    other = "rho_n_db" if swept == "rho_m_db" else "rho_m_db"
    if eta is not None:
        if eta <= 0:
            raise ConfigurationError(f"eta must be > 0, got {eta}")
        shift = 10 * math.log10(eta)
        pt[other] = pt[swept] + shift if other == "rho_n_db" else pt[swept] - shift
    elif pt.get(other) is None:
        raise ConfigurationError(f"need either eta or a fixed {other}")
    pt["eta"] = 10 ** ((pt["rho_n_db"] - pt["rho_m_db"]) / 10) if eta is None else eta


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _evaluate(config: SweepConfig, pt: dict) -> dict:
    mode, mc = config.mode, config.mc
    cfg, first, extra = config._build(pt)
    row = {f"param_{c}": pt.get(c) for c in PARAM_COLUMNS[mode]}
    res = dict.fromkeys(RESULT_COLUMNS + EXTRA_COLUMNS.get(mode, []))

    if mode in ("uplink-latency", "uplink-latency-asymptotic"):
        snr = first
        res["analytic"] = uplink_latency.p_n_exact(cfg, snr)
        res["asymptotic"] = uplink_latency.p_n_highsnr(cfg, snr.rho_m, snr.eta)
        if mc:
            est = mc_oracle.p_n_mc(cfg, snr, mc)
    elif mode == "uplink-energy":
        snr, scale = first, extra
        res["analytic"] = uplink_energy.p_tilde_exact(cfg, snr, scale)
        if uplink_energy.threshold_covers_floor(snr, scale):
            res["asymptotic"] = uplink_energy.plateau_constant(cfg, snr.rho_m / snr.rho_n, scale)
        if mc:
            est = mc_oracle.p_tilde_mc(cfg, snr, scale, mc)
    elif mode == "downlink-energy":
        rho, (task, quad) = first, extra
        res["analytic"] = downlink.p_d_tilde_quadrature(cfg, rho, pt["beta_tilde"], task, quad)
        if mc:
            est = mc_oracle.p_d_tilde_mc(cfg, rho, pt["beta_tilde"], task, mc)
    else:
        rho, scaling = first, extra
        est, est_n = downlink.p_d_latency_mc(
            cfg, rho, scaling, (pt["bits_m"], pt["bits_n"]), mc.trials, mc.seed, pt["slot"], mc.chunk
        )
        res["mc_value_n"], res["mc_stderr_n"] = est_n.value, est_n.stderr

    if mc:
        res["mc_value"], res["mc_stderr"], res["mc_trials"] = est.value, est.stderr, est.trials
    row.update(res)
    return row


def sweep_rows(config: SweepConfig, workers: int = 1) -> list[dict]:
    """Evaluate every grid point; rows come back in grid order."""
    config.validate()
    pts = config.points()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda pt: _evaluate(config, pt), pts))
    return [_evaluate(config, pt) for pt in pts]


def rows_to_csv(rows: list[dict], mode: str) -> str:
    header = [f"param_{c}" for c in PARAM_COLUMNS[mode]] + RESULT_COLUMNS + EXTRA_COLUMNS.get(mode, [])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row.get(col)) for col in header])
    return buf.getvalue()


def run_sweep(config: SweepConfig, workers: int = 1) -> str:
    """Run the sweep and write the CSV to ``config.output`` (if set); returns the text."""
    if config.output is not None:
        out = Path(config.output)
        if not out.parent.exists():
            raise ConfigurationError(f"output directory {out.parent} does not exist")
    text = rows_to_csv(sweep_rows(config, workers), config.mode)
    if config.output is not None:
        try:
            Path(config.output).write_text(text)
        except OSError as exc:
            raise ConfigurationError(f"cannot write {config.output}: {exc}") from exc
    return text
