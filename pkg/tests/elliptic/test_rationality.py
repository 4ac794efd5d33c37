from fractions import Fraction

import numpy as np
import pytest

from qwalk.elliptic.rationality import (
    RationalityResult,
    convergents,
    detect_ratio,
    period_ratio,
    pin_ratio,
    scan_ratios,
)
from qwalk.elliptic.uniformization import Periods
from qwalk.walk.stepset import parse_stepset


def test_convergents():
    assert list(convergents(np.pi - 3, 200)) == [
        Fraction(0, 1),
        Fraction(1, 7),
        Fraction(15, 106),
        Fraction(16, 113),
    ]
    assert list(convergents(0.75, 64)) == [Fraction(0), Fraction(1), Fraction(3, 4)]


@pytest.mark.parametrize(
    "w3,fraction",
    [
        pytest.param(2.0, (2, 3), id="two thirds"),
        pytest.param(1.5 + 1e-10, (1, 2), id="half, perturbed"),
        pytest.param(3 * (np.sqrt(2) - 1), None, id="irrational"),
        pytest.param(3 * 17 / 67, None, id="large denominator"),
    ],
)
def test_detect_ratio(w3, fraction):
    result = detect_ratio(Periods(1j, 3.0, w3), l_max=64, tol=1e-8)
    assert result.fraction == fraction
    assert result.detected == (fraction is not None)
    assert result.ratio == pytest.approx(w3 / 3)
    if fraction is None:
        assert str(result) == "not-detected"
    else:
        assert str(result).startswith(f"{fraction[0]}/{fraction[1]} (error")


def test_detect_ratio_tolerance_floor():
    with pytest.raises(ValueError):
        detect_ratio(Periods(1j, 3.0, 2.0), tol=1e-12)


def test_rationality_result_serialization():
    result = RationalityResult(0.5, 1, 2, 0.0, z=0.1)
    assert RationalityResult.from_dict(result.as_dict()).fraction == (1, 2)


@pytest.mark.parametrize("z", [0.03, 0.08, 0.13, 0.18, 0.23])
@pytest.mark.parametrize(
    "steps_fixture,ratio",
    [
        pytest.param("simple_steps", 1 / 2, id="simple"),
        pytest.param("kreweras_steps", 2 / 3, id="kreweras"),
    ],
)
def test_period_ratio(steps_fixture, ratio, z, request):
    steps = request.getfixturevalue(steps_fixture)
    assert period_ratio(steps, z) == pytest.approx(ratio, abs=1e-9)


@pytest.mark.parametrize(
    "stepset_str,order",
    [
        pytest.param("E,W,N,S", 4, id="simple"),
        pytest.param("W,S,NE", 6, id="kreweras"),
        pytest.param("E,W,NE,SW", 8, id="gessel"),
        pytest.param("E,W,NW,SE", 8, id="gouyou-beauchamps"),
    ],
)
def test_finite_group_ratio(stepset_str, order):
    # a group of order 2ℓ gives ω₃/ω₂ = k/ℓ for every z
    steps = parse_stepset(stepset_str)
    half = order // 2
    multiples = [period_ratio(steps, z) * half for z in (0.05, 0.12, 0.2)]
    k = round(multiples[0])
    assert 0 < k < half
    assert multiples == pytest.approx([k] * 3, abs=1e-8)


def test_scan_ratios(kreweras_steps):
    results = scan_ratios(kreweras_steps, [0.05, 0.15, 0.25], nworkers=1)
    assert [r.fraction for r in results] == [(2, 3)] * 3
    assert [r.z for r in results] == [0.05, 0.15, 0.25]


def test_scan_ratios_infinite(infinite_steps):
    results = scan_ratios(infinite_steps, [0.05, 0.15], l_max=8, nworkers=1)
    ratios = [r.ratio for r in results]
    assert ratios[0] != pytest.approx(ratios[1], abs=1e-6)


def test_pin_ratio_not_attained(simple_steps):
    with pytest.raises(RuntimeError):
        pin_ratio(simple_steps, 1, 3, n_grid=4)
