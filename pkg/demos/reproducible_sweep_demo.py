"""Sweeps with simulation columns are reproducible bit for bit.

Every grid point draws the same channel samples (one seed per sweep) and
each chunk has its own seed stream, so the CSV does not depend on the
number of worker threads.

Run:  python demos/reproducible_sweep_demo.py
"""
from nomamec import GridAxis, MonteCarloSpec, SweepConfig, run_sweep


def make():
    return SweepConfig(
        "uplink-latency",
        GridAxis("rho_m_db", 0, 20, 5),
        {"M": 5, "m": 2, "n": 4, "eta": 2.0},
        MonteCarloSpec(200_000, seed=42, chunk=50_000),
    )


if __name__ == "__main__":
    one = run_sweep(make(), workers=1)
    print(one)
    four = run_sweep(make(), workers=4)
    print("identical with 4 workers:", one == four)
