import numpy as np
import pytest

from qwalk.elliptic.weierstrass import (
    Lattice,
    addition,
    cot_csc2,
    elliptic_from_principal_parts,
    invariants_from_roots,
    landen_sum,
    legendre_residual,
    quasi_phi,
    quasi_phi_prime,
    wp,
    wp_invert,
    wp_invert_all,
    wp_prime,
    wp_second,
    zeta,
)

lattices = [
    pytest.param(Lattice(1.3j, 2.0), id="rectangular"),
    pytest.param(Lattice(4.5j, 0.9), id="tall"),
    pytest.param(Lattice(0.4j, 3.1), id="wide"),
]

points = np.array([0.31 + 0.17j, -0.52 + 0.08j, 0.77 - 0.41j])


@pytest.fixture
def lattice():
    return Lattice(1.3j, 2.0)


def test_cot_csc2():
    u = np.array([0.3 + 0.2j, -1.1 + 0.7j, 2.0 - 0.5j])
    cot, csc2 = cot_csc2(u)
    assert cot == pytest.approx(1 / np.tan(u))
    assert csc2 == pytest.approx(1 / np.sin(u) ** 2)

    cot, csc2 = cot_csc2(np.array([1 + 800j, 1 - 800j]))
    assert np.all(np.isfinite(cot)) and np.all(np.isfinite(csc2))
    assert cot == pytest.approx([-1j, 1j])


def test_lattice(lattice):
    w = 0.3 + 0.2j
    shifted = w + 2 * lattice.w1 - 3 * lattice.w2
    w0, n1, n2 = lattice.reduce(shifted)
    assert w0 == pytest.approx(w)
    assert n1 == 2 and n2 == -3
    assert lattice.equivalent(w, shifted)
    assert not lattice.equivalent(w, w + lattice.w2 / 2)

    cell = lattice.to_cell(-0.1 - 0.1j)
    a, b = lattice.coords(cell)
    assert 0 <= a < 1 and 0 <= b < 1

    assert lattice.scaled(1, 2) == Lattice(1.3j, 4.0)
    with pytest.raises(ValueError):
        Lattice(2.0, 4.0)


@pytest.mark.parametrize("lattice", lattices)
def test_differential_equation(lattice):
    # factored form, 4℘³ - g2℘ - g3 cancels badly when two roots are close
    e1, e2, e3 = lattice.roots
    p = wp(lattice, points)
    assert wp_prime(lattice, points) ** 2 == pytest.approx(
        4 * (p - e1) * (p - e2) * (p - e3), rel=1e-9
    )


@pytest.mark.parametrize("lattice", lattices)
def test_laurent_expansion(lattice):
    g2, g3 = lattice.invariants
    short = min(abs(lattice.w1), abs(lattice.w2))
    w = 0.05 * short * np.array([1, 1j, np.exp(0.7j)])
    expected = (
        w**-2
        + g2 * w**2 / 20
        + g3 * w**4 / 28
        + g2**2 * w**6 / 1200
        + 3 * g2 * g3 * w**8 / 6160
    )
    assert wp(lattice, w) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("lattice", lattices)
def test_periodicity(lattice):
    p = wp(lattice, points)
    assert wp(lattice, points + lattice.w1) == pytest.approx(p, rel=1e-10)
    assert wp(lattice, points - 2 * lattice.w2) == pytest.approx(p, rel=1e-10)
    assert wp(lattice, -points) == pytest.approx(p, rel=1e-10)
    assert wp_prime(lattice, -points) == pytest.approx(
        -wp_prime(lattice, points), rel=1e-10
    )


@pytest.mark.parametrize("lattice", lattices)
def test_zeta_quasi_periodicity(lattice):
    z = zeta(lattice, points)
    assert zeta(lattice, points + lattice.w2) - z == pytest.approx(
        [2 * lattice.eta2] * 3, rel=1e-9
    )
    assert zeta(lattice, points + lattice.w1) - z == pytest.approx(
        [2 * lattice.eta1] * 3, rel=1e-9
    )


@pytest.mark.parametrize("lattice", lattices)
def test_legendre_relation(lattice):
    assert legendre_residual(lattice) < 1e-10


def test_derivatives(lattice):
    h = 1e-5
    w = 0.41 + 0.23j
    assert (zeta(lattice, w + h) - zeta(lattice, w - h)) / (2 * h) == pytest.approx(
        -wp(lattice, w), rel=1e-8
    )
    assert (wp(lattice, w + h) - wp(lattice, w - h)) / (2 * h) == pytest.approx(
        wp_prime(lattice, w), rel=1e-8
    )
    assert (
        wp_prime(lattice, w + h) - wp_prime(lattice, w - h)
    ) / (2 * h) == pytest.approx(wp_second(lattice, w), rel=1e-7)


def test_poles(lattice):
    assert wp(lattice, 0) == np.inf
    assert wp(lattice, lattice.w1 + lattice.w2) == np.inf
    assert np.isinf(zeta(lattice, 0))
    assert wp(lattice, 1e-3) == pytest.approx(1e6, rel=1e-3)


def test_roots(lattice):
    e1, e2, e3 = lattice.roots
    assert e1 + e2 + e3 == pytest.approx(0, abs=1e-10)
    assert e1.real > e2.real > e3.real
    assert abs(e1.imag) + abs(e2.imag) + abs(e3.imag) < 1e-10

    g2, g3 = invariants_from_roots(lattice.roots)
    assert (g2, g3) == pytest.approx(lattice.invariants)
    for half in lattice.half_periods:
        assert abs(wp_prime(lattice, half)) < 1e-8


def test_addition(lattice):
    w, v = 0.31 + 0.17j, 0.52 - 0.28j
    wp_sum, zeta_sum = addition(lattice, w, v)
    assert wp_sum == pytest.approx(wp(lattice, w + v), rel=1e-9)
    assert zeta_sum == pytest.approx(zeta(lattice, w + v), rel=1e-9)

    with pytest.raises(ValueError):
        addition(lattice, w, -w)


@pytest.mark.parametrize("p", [2, 3])
def test_landen_sum(lattice, p):
    reduced = Lattice(lattice.w1, lattice.w2 / p)
    assert landen_sum(lattice, p, points) == pytest.approx(
        wp(reduced, points), rel=1e-9
    )


def test_quasi_phi(lattice):
    phi = quasi_phi(lattice, points)
    assert quasi_phi(lattice, points + lattice.w2) == pytest.approx(phi + 1)
    assert quasi_phi(lattice, points + lattice.w1) == pytest.approx(phi)

    h = 1e-5
    w = points[0]
    numeric = (quasi_phi(lattice, w + h) - quasi_phi(lattice, w - h)) / (2 * h)
    assert numeric == pytest.approx(quasi_phi_prime(lattice, w), rel=1e-7)

    eps = 1e-6
    residue = lattice.w1 / (2j * np.pi)
    assert eps * quasi_phi(lattice, eps) == pytest.approx(residue, rel=1e-9)


@pytest.mark.parametrize("lattice", lattices)
def test_wp_invert(lattice):
    for w0 in points:
        target = wp(lattice, w0)
        w = wp_invert(lattice, target)
        assert wp(lattice, w) == pytest.approx(target, rel=1e-10)
        assert lattice.equivalent(w, w0) or lattice.equivalent(w, -w0)

        first, second = wp_invert_all(lattice, target)
        assert lattice.equivalent(first, -second)

    assert wp_invert(lattice, np.inf) == 0
    assert wp_invert(lattice, lattice.roots[0]) == pytest.approx(lattice.w2 / 2)


def test_elliptic_from_principal_parts(lattice):
    a, b = 0.2 + 0.1j, 0.7 + 0.5j
    parts = {a: {1: 1.5, 2: 0.3}, b: {1: -1.5, 3: 0.2}}
    w = np.array([0.45 + 0.3j, 1.1 - 0.2j])
    value = elliptic_from_principal_parts(lattice, parts, w)

    shifted = elliptic_from_principal_parts(lattice, parts, w + lattice.w1)
    assert shifted == pytest.approx(value, rel=1e-9)
    shifted = elliptic_from_principal_parts(lattice, parts, w + lattice.w2)
    assert shifted == pytest.approx(value, rel=1e-9)

    # residue of 1.5 and double pole of 0.3 at a
    eps = 1e-4
    near = elliptic_from_principal_parts(lattice, parts, a + eps)
    assert near * eps**2 == pytest.approx(0.3 + 1.5 * eps, rel=1e-4)

    with pytest.raises(ValueError):
        elliptic_from_principal_parts(lattice, {a: {1: 1.0}}, w)
    with pytest.raises(ValueError):
        elliptic_from_principal_parts(lattice, {a: {4: 1.0}}, w)
