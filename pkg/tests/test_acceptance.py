"""Acceptance criteria 1-12 at their stated tolerances and trial counts.

Each test prints one PASS/FAIL line straight to the terminal; the per-point
detail lines go to the captured output and show up on failure.
"""
import pytest

from nomamec import validation

NAMES = {
    1: "identity",
    2: "uplink_latency_oracle",
    3: "uplink_latency_limits",
    4: "uplink_latency_decay",
    5: "uplink_energy_oracle",
    6: "uplink_energy_anchor",
    7: "uplink_energy_regimes",
    8: "downlink_energy_oracle",
    9: "downlink_energy_decay",
    10: "quadrature_stability",
    11: "region_identity",
    12: "sweep_determinism",
}


@pytest.mark.parametrize("number", sorted(NAMES), ids=[f"{k:02d}_{v}" for k, v in sorted(NAMES.items())])
def test_criterion(number, capsys):
    result = validation.run_check(number)
    for line in result.lines:
        print(line)
    with capsys.disabled():
        print(f"\n{result.summary()}")
    assert result.passed, "\n".join(result.lines)


def test_every_criterion_is_wired():
    assert sorted(validation.CHECKS) == list(range(1, 13))
