"""One user offloads to two edge servers over the downlink.

Server ``m`` gets just enough power to match its OMA rate (cognitive-radio
allocation), the rest goes to server ``n``.  In the second slot the user
only spends ``beta_tilde`` of its power on server ``n``.
``p_d_tilde_quadrature`` is the chance that OMA still wins for server ``n``.

Run:  python demos/downlink_demo.py  (about half a minute)
"""
import numpy as np

from nomamec import (
    DownlinkTaskSpec,
    MonteCarloSpec,
    OrderedPairConfig,
    QuadratureSpec,
    cr_power_allocation,
    decay_exponent_fit,
    p_d_tilde_mc,
    p_d_tilde_quadrature,
)

TASK = DownlinkTaskSpec(bits=1.0, slot=1.0)


def allocation():
    print("1) Power split at rho = 20 dB for a few weak-server gains")
    for g in (0.005, 0.05, 0.5, 5.0):
        s = cr_power_allocation(100.0, g, TASK)
        print(f"   |g_m|^2={g:<6}  alpha_m^2={s.alpha_m_sq:.4f}  alpha_n^2={s.alpha_n_sq:.4f}")
    print("   Below epsilon/rho everything stays with server m.\n")


def against_simulation():
    print("2) Quadrature against 10^6 simulated channels, K=5, (m,n)=(1,2), beta_tilde=0.5")
    cfg = OrderedPairConfig(5, 1, 2)
    for db in (10, 20, 30):
        rho = 10 ** (db / 10)
        q = p_d_tilde_quadrature(cfg, rho, 0.5, TASK)
        est = p_d_tilde_mc(cfg, rho, 0.5, TASK, MonteCarloSpec(10**6, seed=5))
        print(f"   rho={db} dB: quadrature {q:.5f}  simulation {est.value:.5f} +/- {est.stderr:.5f}")
    print()


def decay():
    print("3) Decay with rho (window 25..40 dB)")
    db = np.arange(25, 40.1, 2.5)
    for m, n in ((1, 2), (2, 4)):
        cfg = OrderedPairConfig(5, m, n)
        curve = [(10 ** (d / 10), p_d_tilde_quadrature(cfg, 10 ** (d / 10), 0.2, TASK)) for d in db]
        print(f"   (m,n)=({m},{n}) beta_tilde=0.2: exponent {decay_exponent_fit(curve, (25, 40)):.3f}")
    fine = p_d_tilde_quadrature(OrderedPairConfig(5, 1, 2), 1e3, 0.2, TASK, QuadratureSpec(128))
    coarse = p_d_tilde_quadrature(OrderedPairConfig(5, 1, 2), 1e3, 0.2, TASK)
    print(f"   64 vs 128 nodes at 30 dB differ by {abs(fine - coarse):.2e}")
    print("   The exponent matches the weak server's index m.")


if __name__ == "__main__":
    allocation()
    against_simulation()
    decay()
