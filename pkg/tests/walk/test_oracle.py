import numpy as np
import pytest
from monty.json import MontyDecoder, MontyEncoder

from qwalk.walk.oracle import (
    CountTable,
    boundary_gf,
    count,
    q_truncated,
    truncation_bound,
)
from qwalk.walk.stepset import parse_stepset

simple_excursions = [1, 0, 2, 0, 10, 0, 70]


def test_count_simple(simple_table):
    assert [simple_table.q(0, 0, n) for n in range(7)] == simple_excursions
    assert [simple_table.total(n) for n in range(3)] == [1, 2, 6]
    assert simple_table.q(1, 1, 2) == 2
    assert simple_table.q(3, 0, 2) == 0
    assert simple_table.q(-1, 0, 2) == 0
    assert simple_table.depth == 60


def test_count_exact_integers(simple_table):
    # C_30 C_31 overflows 64 bit integers
    assert simple_table.q(0, 0, 60) == 3814986502092304 * 14544636039226909
    assert isinstance(simple_table.q(0, 0, 60), int)


def test_count_kreweras(kreweras_table):
    assert [kreweras_table.q(0, 0, 3 * n) for n in range(3)] == [1, 2, 16]
    assert kreweras_table.q(0, 0, 4) == 0


def test_count_invalid():
    steps = parse_stepset("N,S")
    with pytest.raises(ValueError):
        count(steps, -1)

    table = count(steps, 4)
    with pytest.raises(ValueError):
        table.q(0, 0, 5)


def test_count_progress_bar():
    steps = parse_stepset("E,W,N,S")
    assert count(steps, 6, progress_bar=True).q(0, 0, 6) == 70


def test_count_table_serialization():
    table = count(parse_stepset("W,S,NE"), 9)
    encoded = MontyEncoder().encode(table)
    decoded = MontyDecoder().decode(encoded)
    assert isinstance(decoded, CountTable)
    assert decoded.depth == 9
    assert decoded.q(0, 0, 6) == 16
    assert list(decoded.nonzero_items()) == list(table.nonzero_items())


def test_truncation_bound():
    steps = parse_stepset("E,W,N,S")
    assert truncation_bound(steps, 0, 0, 0.15, 10) == pytest.approx(
        0.6**11 / 0.4
    )
    assert truncation_bound(steps, 2, 1, 0.15, 10) == np.inf


def test_q_truncated(simple_table):
    z = 0.15
    value, bound = q_truncated(simple_table, 0.5, 0.3, z, return_bound=True)
    expected = sum(
        c * 0.5**i * 0.3**j * z**n for (i, j, n), c in simple_table.nonzero_items()
    )
    assert value == pytest.approx(expected, rel=1e-12)
    assert bound < 1e-12

    shallow = q_truncated(parse_stepset("E,W,N,S"), 0.5, 0.3, z, depth=4)
    assert shallow == pytest.approx(q_truncated(simple_table, 0.5, 0.3, z, depth=4))

    with pytest.raises(ValueError):
        q_truncated(parse_stepset("E,W,N,S"), 0.5, 0.3, z)


def test_boundary_gf(simple_table):
    z = 0.15
    q00 = boundary_gf(simple_table, "origin", 0, z)
    assert q00.real == pytest.approx(
        sum(c * z**n for c, n in zip(simple_excursions, range(7))), rel=1e-3
    )
    assert boundary_gf(simple_table, "x-axis", 0, z) == pytest.approx(q00)
    assert boundary_gf(simple_table, "y-axis", 0.4, z) == pytest.approx(
        boundary_gf(simple_table, "x-axis", 0.4, z)
    )

    values = boundary_gf(simple_table, "x-axis", np.array([0.1, 0.2]), z)
    assert values.shape == (2,)

    with pytest.raises(ValueError):
        boundary_gf(simple_table, "diagonal", 0, z)
    with pytest.raises(ValueError):
        boundary_gf(simple_table, "origin", 0, z, depth=100)
