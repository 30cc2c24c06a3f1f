import numpy as np
import pytest

from minkcurve.schemas.schemas import GeneratorSpec
from minkcurve.services.curve_service import CurveService
from minkcurve.services.generator_service import GeneratorService


def sample_closed(shape, m: int = 64) -> np.ndarray:
    """m points of a closed parametrized curve at uniform t."""
    t = 2.0 * np.pi * np.arange(m) / m
    return shape(t)


def wavy(eps: float):
    return lambda t: np.stack([np.cos(t), np.sin(t), eps * np.sin(2.0 * t)], axis=-1)


@pytest.fixture(scope="session")
def generators():
    return GeneratorService(run_id="test")


@pytest.fixture(scope="session")
def curves():
    return CurveService(run_id="test")


@pytest.fixture(scope="session")
def circle(generators):
    return generators.generate(GeneratorSpec(kind="planar-circle", samples=256))


@pytest.fixture(scope="session")
def tilted_ellipse(generators):
    return generators.generate(GeneratorSpec(kind="tilted-ellipse", a=1.0, b=1.0, c=0.5, samples=256))


@pytest.fixture(scope="session")
def random42(generators):
    spec = GeneratorSpec(kind="random-fourier", seed=42, harmonics=3, amplitude_cap=0.15, samples=256)
    return generators.generate(spec)


@pytest.fixture(scope="session")
def wavy_curve(curves):
    """(cos t, sin t, 0.2 sin 2t)"""
    return curves.resample_arclength(sample_closed(wavy(0.2)), 256, method="fourier")


@pytest.fixture(scope="session")
def limacon(generators):
    return generators.limacon(samples=256)
