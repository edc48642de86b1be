"""Can NOMA save energy on the uplink?

The strong user scales its transmit power down by ``beta**2`` and only
keeps what the weak user leaves over.  ``p_tilde_exact`` is the chance
that OMA still delivers at least as many bits.

Run:  python demos/uplink_energy_demo.py
"""
from nomamec import (
    EnergyScaling,
    GrowthPath,
    OrderedPairConfig,
    SnrOperatingPoint,
    p_tilde_exact,
    p_tilde_regime,
    plateau_constant,
)

ANCHOR = SnrOperatingPoint.from_db(10, 25)


def anchor():
    print("1) rho_m = 10 dB, rho_n = 25 dB, beta = 1/8 (M=5)")
    for m, n in ((1, 2), (1, 5)):
        val = p_tilde_exact(OrderedPairConfig(5, m, n), ANCHOR, EnergyScaling(1 / 8))
        print(f"   (m,n)=({m},{n}): {val:.6f}")
    print("   Pairing the weakest user with the strongest one makes OMA rarely win.\n")


def strong_power_grows():
    print("2) Strong user's power grows alone, beta = 1/4, rho_m = 10 dB")
    cfg, scale = OrderedPairConfig(5, 1, 2), EnergyScaling(1 / 4)
    for db in (25, 35, 45, 55):
        print(f"   rho_n={db} dB: {p_tilde_exact(cfg, SnrOperatingPoint.from_db(10, db), scale):.3e}")
    print(f"   regime: {p_tilde_regime(GrowthPath(False, True), scale)[0].value}\n")


def both_grow():
    print("3) Both powers grow, rho_m = rho_n / 2, beta = 1/5")
    scale = EnergyScaling(1 / 5)
    for m, n in ((1, 2), (3, 5)):
        cfg = OrderedPairConfig(5, m, n)
        vals = [p_tilde_exact(cfg, SnrOperatingPoint(10 ** (d / 10) / 2, 10 ** (d / 10)), scale) for d in (30, 40, 50, 60)]
        regime, const = p_tilde_regime(GrowthPath(True, True, 0.5), scale, cfg)
        print(f"   (m,n)=({m},{n}): " + "  ".join(f"{v:.6f}" for v in vals) + f"  -> {regime.value} at {const:.6f}")
    print("   A fixed power ratio leaves a floor that extra power cannot remove.")
    print(f"   With ratio 1/25 (below beta^2/(1-beta)) the floor is gone: "
          f"{p_tilde_regime(GrowthPath(True, True, 0.04), scale)[0].value}")
    print(f"   Constant at ratio 1/2 for (1,2): {plateau_constant(OrderedPairConfig(5, 1, 2), 0.5, scale):.6f} (= 36/41)")


if __name__ == "__main__":
    anchor()
    strong_power_grows()
    both_grow()
