"""When does NOMA beat OMA on uplink latency?

Two users share one edge server.  ``p_n_exact`` is the probability that the
NOMA strong user's rate cannot improve on what OMA would give it.  Lower
is better for NOMA.

Run:  python demos/uplink_latency_demo.py
"""
import numpy as np

from nomamec import OrderedPairConfig, SnrOperatingPoint, p_n_exact, p_n_highsnr, p_n_highsnr_dominant


def fixed_weak_power():
    print("1) Weak user fixed at 10 dB, strong user power swept (M=5)")
    print(f"   {'rho_n dB':>8}  {'(1,2)':>9}  {'(2,4)':>9}  {'(4,5)':>9}")
    pairs = [OrderedPairConfig(5, m, n) for m, n in ((1, 2), (2, 4), (4, 5))]
    for db in np.arange(10, 41, 5):
        vals = [p_n_exact(cfg, SnrOperatingPoint.from_db(10, db)) for cfg in pairs]
        print(f"   {db:8.0f}  " + "  ".join(f"{v:9.5f}" for v in vals))
    print("   More power at the strong user pushes the probability toward 1.\n")


def fixed_ratio():
    print("2) Both powers grow together with rho_n = 2 rho_m (M=5)")
    print(f"   {'rho_m dB':>8}  {'pair':>5}  {'exact':>11}  {'high-SNR':>11}  {'leading':>11}")
    for m, n in ((1, 2), (2, 3), (3, 4)):
        cfg = OrderedPairConfig(5, m, n)
        for db in (20, 30, 40, 50):
            rho = 10 ** (db / 10)
            exact = p_n_exact(cfg, SnrOperatingPoint.from_eta(rho, 2.0))
            approx = p_n_highsnr(cfg, rho, 2.0)
            lead = p_n_highsnr_dominant(cfg, rho, 2.0)
            print(f"   {db:8d}  ({m},{n})  {exact:11.4e}  {approx:11.4e}  {lead:11.4e}")
    print("   Each decade of power cuts the probability by about 10^(m/2),")
    print("   so the weak user's index sets how fast NOMA takes over.")


if __name__ == "__main__":
    fixed_weak_power()
    fixed_ratio()
