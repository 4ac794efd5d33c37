import numpy as np
import pytest

from qwalk.continuation.poles import f_y, fy_poles
from qwalk.models.simple import (
    expected_fy_poles,
    fy_closed,
    ledger_poles,
    srw_phi_decomposition,
)


def _match(parts, expected, lattice):
    for part in expected:
        found = [p for p in parts if lattice.equivalent(p.pole, part.pole, tol=1e-6)]
        assert len(found) == 1
        assert found[0].order == part.order
        for j, c in part.coeffs.items():
            assert found[0].coeffs[j] == pytest.approx(c, rel=1e-6)


def test_fy_closed(simple_U):
    omega = np.array([0.23, 0.61, 0.9]) * simple_U.w2 + 0.2 * simple_U.w1
    assert fy_closed(simple_U, omega) == pytest.approx(f_y(simple_U, omega), rel=1e-8)


def test_expected_poles(simple_U):
    _match(fy_poles(simple_U), expected_fy_poles(simple_U), simple_U.lattice)


def test_ledger_poles(simple_U):
    poles = ledger_poles(simple_U, range(0, 6))
    assert poles == pytest.approx([simple_U.w2 / 8, 11 * simple_U.w2 / 8])


def test_phi_decomposition(simple_U, simple_series):
    U = simple_U
    omega = (
        U.named_points["y1"]
        + np.array([0.15, 0.45, 1.3]) * U.w3
        + np.array([0.05, 0.11, 0.07]) * abs(U.w1) * 1j
    )
    discrepancy = srw_phi_decomposition(U, simple_series.r_y, omega)
    scale = max(1.0, float(np.max(np.abs(discrepancy))))
    assert np.ptp(discrepancy.real) < 1e-6 * scale
    assert np.ptp(discrepancy.imag) < 1e-6 * scale
