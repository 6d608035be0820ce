import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from casimir_piston import spectrum  # noqa: E402
from casimir_piston._backend import available_backends  # noqa: E402


@pytest.fixture(scope="session")
def triangle4000():
    return spectrum.spectrum_triangle(1.0, 4000)


@pytest.fixture(scope="session")
def circle3000():
    return spectrum.spectrum_circle(1.0, 3000)


@pytest.fixture(scope="session")
def square4000():
    return spectrum.spectrum_rectangle(1.0, 1.0, 4000)


@pytest.fixture(params=sorted(available_backends()))
def backend(request):
    return request.param
