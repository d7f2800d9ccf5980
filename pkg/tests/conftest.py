import math

import pytest

from tetrageo.core import tetra_from_vertices
from tetrageo.surface import build_surface

SQ3 = math.sqrt(3.0)


def regular_tetra(edge=1.0):
    h = edge * math.sqrt(2.0 / 3.0)
    return tetra_from_vertices(
        (0.0, 0.0, 0.0),
        (edge, 0.0, 0.0),
        (edge / 2.0, edge * SQ3 / 2.0, 0.0),
        (edge / 2.0, edge * SQ3 / 6.0, h),
    )


@pytest.fixture
def reg_tetra():
    return regular_tetra()


@pytest.fixture
def reg_surface():
    return build_surface(regular_tetra())


@pytest.fixture
def square_double():
    return build_surface([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])


@pytest.fixture
def rect_double():
    return build_surface([(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)])
