import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from matrix_core import SquareComplexMatrix, random_matrix  # noqa: E402


@pytest.fixture
def nilpotent():
    """[[0, 1], [0, 0]]: F(A) is the disk of radius 1/2"""
    return SquareComplexMatrix.from_rows([[0, 1], [0, 0]])


@pytest.fixture
def triangular_b2():
    """[[1, 2], [0, -1]]: foci +-1, semi-axes sqrt(2) and 1"""
    return SquareComplexMatrix.from_rows([[1, 2], [0, -1]])


@pytest.fixture
def segment():
    """diag(0, 1): F(A) is the segment [0, 1]"""
    return SquareComplexMatrix.diagonal([0, 1])


@pytest.fixture
def random_3x3():
    return random_matrix(3, 11)
