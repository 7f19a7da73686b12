import numpy as np
import pytest

from agqec.agcode import build_one_point_code, max_so_degree
from agqec.curve import CurveSpec
from agqec.gf import build_field
from agqec.stabilizer import StabilizerCode


@pytest.fixture(scope="session")
def field_f9():
    return build_field(3, 2)


@pytest.fixture(scope="session")
def curve_q3():
    return CurveSpec(3, 4)


@pytest.fixture(scope="session")
def flagship_pair(curve_q3, field_f9):
    """The largest self-orthogonal one-point code at q=3 and its stabilizer code."""
    s = max_so_degree(curve_q3, field_f9)
    classical = build_one_point_code(curve_q3, field_f9, s)
    return classical, StabilizerCode.from_hermitian_code(classical)
