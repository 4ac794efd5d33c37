import logging
import os
import shutil
import sys
import tempfile
from pathlib import Path

import pytest

kreweras_z = 0.1
simple_z = 0.15
oracle_depth = 60


@pytest.fixture(scope="session")
def test_dir():
    module_dir = Path(__file__).resolve().parent
    test_dir = module_dir / "test_data"
    return test_dir.resolve()


@pytest.fixture
def log_to_stdout():
    # Set Logging
    root = logging.getLogger()
    root.setLevel(logging.DEBUG)
    ch = logging.StreamHandler(sys.stdout)
    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )
    ch.setFormatter(formatter)
    root.addHandler(ch)


@pytest.fixture
def clean_dir():
    old_cwd = os.getcwd()
    newpath = tempfile.mkdtemp()
    os.chdir(newpath)
    yield
    os.chdir(old_cwd)
    shutil.rmtree(newpath)


@pytest.fixture(scope="session")
def kreweras_steps():
    from qwalk.walk.stepset import parse_stepset

    return parse_stepset("W,S,NE")


@pytest.fixture(scope="session")
def simple_steps():
    from qwalk.walk.stepset import parse_stepset

    return parse_stepset("E,W,N,S")


@pytest.fixture(scope="session")
def infinite_steps():
    from qwalk.walk.stepset import parse_stepset

    return parse_stepset("W,SW,S,NE")


@pytest.fixture(scope="session")
def kreweras_U(kreweras_steps):
    from qwalk.elliptic.curve import curve_data
    from qwalk.elliptic.uniformization import uniformize

    return uniformize(curve_data(kreweras_steps, kreweras_z))


@pytest.fixture(scope="session")
def simple_U(simple_steps):
    from qwalk.elliptic.curve import curve_data
    from qwalk.elliptic.uniformization import uniformize

    return uniformize(curve_data(simple_steps, simple_z))


@pytest.fixture(scope="session")
def infinite_U(infinite_steps):
    from qwalk.elliptic.curve import curve_data
    from qwalk.elliptic.uniformization import uniformize

    return uniformize(curve_data(infinite_steps, 0.1))


@pytest.fixture(scope="session")
def kreweras_table(kreweras_steps):
    from qwalk.walk.oracle import count

    return count(kreweras_steps, oracle_depth)


@pytest.fixture(scope="session")
def simple_table(simple_steps):
    from qwalk.walk.oracle import count

    return count(simple_steps, oracle_depth)


@pytest.fixture(scope="session")
def infinite_table(infinite_steps):
    from qwalk.walk.oracle import count

    return count(infinite_steps, oracle_depth)


@pytest.fixture(scope="session")
def kreweras_series(kreweras_U):
    from qwalk.continuation.series import SeriesSolution

    return SeriesSolution(kreweras_U, 2, 3)


@pytest.fixture(scope="session")
def simple_series(simple_U):
    from qwalk.continuation.series import SeriesSolution

    return SeriesSolution(simple_U, 1, 2)


@pytest.fixture(scope="session")
def pinned_infinite():
    from qwalk.continuation.series import SeriesSolution
    from qwalk.elliptic.curve import curve_data
    from qwalk.elliptic.uniformization import uniformize
    from qwalk.models.infinite import infinite_steps, pinned_z, ratio_fraction

    fraction, bracket = ratio_fraction()
    k, l = fraction.numerator, fraction.denominator  # noqa: E741
    z = pinned_z(k, l, z_range=bracket)
    U = uniformize(curve_data(infinite_steps, z))
    return {
        "fraction": fraction,
        "bracket": bracket,
        "z": z,
        "series": SeriesSolution(U, k, l),
    }
