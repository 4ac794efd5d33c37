import numpy as np
import pytest

from qwalk.walk.stepset import (
    StepSet,
    check_functional_equation,
    classify,
    group_generators,
    kernel_coefficients,
    kernel_eval,
    parse_stepset,
    step_polynomial,
)


@pytest.mark.parametrize(
    "stepset_str,expected",
    [
        pytest.param("NE,W,S", ((-1, 0), (0, -1), (1, 1)), id="compass"),
        pytest.param("ne, w ,s", ((-1, 0), (0, -1), (1, 1)), id="lower case"),
        pytest.param("(1,1),(-1,0),(0,-1)", ((-1, 0), (0, -1), (1, 1)), id="pairs"),
        pytest.param("(1, 1),W,S", ((-1, 0), (0, -1), (1, 1)), id="mixed"),
    ],
)
def test_parse_stepset(stepset_str, expected):
    steps = parse_stepset(stepset_str)
    assert set(steps.steps) == set(expected)
    assert steps == parse_stepset("W,S,NE")


@pytest.mark.parametrize(
    "stepset_str",
    [
        pytest.param("", id="empty"),
        pytest.param("N,N", id="duplicate"),
        pytest.param("N,(0,1)", id="duplicate pair"),
        pytest.param("(2,0),N", id="large step"),
        pytest.param("(0,0)", id="zero step"),
        pytest.param("UP", id="unknown"),
    ],
)
def test_parse_stepset_invalid(stepset_str):
    with pytest.raises(ValueError):
        parse_stepset(stepset_str)


def test_stepset():
    steps = parse_stepset("W,S,NE")
    assert steps.size == 3
    assert steps.weight(1, 1) == 1
    assert steps.weight(1, 0) == 0
    assert sum(steps.delta.values()) == 3
    assert str(parse_stepset(str(steps))) == str(steps)
    assert hash(steps) == hash(parse_stepset("NE,S,W"))
    assert steps.transpose() == parse_stepset("S,W,NE")
    assert parse_stepset("NW").transpose() == parse_stepset("SE")

    with pytest.raises(ValueError):
        StepSet([])


def test_kernel_coefficients():
    z = 0.15
    k = kernel_coefficients(parse_stepset("E,W,N,S"), z)
    assert k.a.tolist() == pytest.approx([0, z, 0])
    assert k.b.tolist() == pytest.approx([z, -1, z])
    assert k.c.tolist() == pytest.approx([0, z, 0])

    k = kernel_coefficients(parse_stepset("W,S,NE"), z)
    assert k.a.tolist() == pytest.approx([0, 0, z])
    assert k.b.tolist() == pytest.approx([z, -1, 0])
    assert k.c.tolist() == pytest.approx([0, z, 0])


@pytest.mark.parametrize("stepset_str", ["W,S,NE", "E,W,N,S", "E,W,NE,SW", "N,SE,W"])
def test_kernel_eval(stepset_str):
    steps = parse_stepset(stepset_str)
    rng = np.random.default_rng(0)
    x, y = rng.uniform(0.2, 2, 2) * np.exp(1j * rng.uniform(0, 6, 2))
    z = 0.1
    expected = x * y * (z * step_polynomial(steps, x, y) - 1)
    assert kernel_eval(steps, x, y, z) == pytest.approx(expected)


@pytest.mark.parametrize(
    "stepset_str,kind,group_order",
    [
        pytest.param("E,W,N,S", "non-singular", 4, id="simple"),
        pytest.param("W,S,NE", "non-singular", 6, id="kreweras"),
        pytest.param("E,W,NE,SW", "non-singular", 8, id="gessel"),
        pytest.param("E,W,NW,SE", "non-singular", 8, id="gouyou-beauchamps"),
        pytest.param("W,SW,S,NE", "non-singular", "exceeds-bound", id="infinite"),
        pytest.param("NW,SE,NE", "singular", None, id="singular"),
        pytest.param("E,W,N", "half-plane-reducible", None, id="half-plane"),
        pytest.param("N,E", "trivial", None, id="positive only"),
        pytest.param("S,W,SW", "trivial", None, id="negative only"),
    ],
)
def test_classify(stepset_str, kind, group_order):
    classification = classify(parse_stepset(stepset_str))
    assert classification.kind == kind
    assert classification.group_order == group_order


def test_classify_finite_group():
    assert classify(parse_stepset("W,S,NE")).finite_group
    assert not classify(parse_stepset("W,SW,S,NE")).finite_group
    assert classify(parse_stepset("N,E")).finite_group is None


def test_group_generators():
    steps = parse_stepset("W,S,NE")
    xi, eta = group_generators(steps)
    x, y = 0.7 + 0.2j, 1.3 - 0.4j
    z = 0.12

    # ξ fixes x and preserves the kernel, both are involutions
    for g in (xi, eta):
        gx, gy = g(x, y)
        assert g(gx, gy) == pytest.approx((x, y))
        assert step_polynomial(steps, gx, gy) == pytest.approx(
            step_polynomial(steps, x, y)
        )
    assert xi(x, y)[0] == x
    assert eta(x, y)[1] == y
    assert kernel_eval(steps, x, y, z) / (x * y) == pytest.approx(
        kernel_eval(steps, *xi(x, y), z) / (x * xi(x, y)[1])
    )


@pytest.mark.parametrize("stepset_str", ["W,S,NE", "E,W,N,S", "W,SW,S,NE"])
def test_check_functional_equation(stepset_str):
    steps = parse_stepset(stepset_str)
    residual = check_functional_equation(steps, 0.1, 20, n_samples=4, seed=1)
    assert residual < 1e-10
