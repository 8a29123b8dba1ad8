import json
import logging
import os
from typing import Dict, List

from matrix_core import SquareComplexMatrix, random_matrix, random_normal_matrix

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

SAMPLE_SEED = 7


def sample_matrices() -> Dict[str, SquareComplexMatrix]:
    """The worked canonical cases plus a few seeded demo matrices"""
    return {
        # Circle of radius 1/2
        "nilpotent": SquareComplexMatrix.from_rows([[0, 1], [0, 0]]),
        # Ellipse with foci +-1, semi-axes sqrt(2) and 1
        "triangular_b2": SquareComplexMatrix.from_rows([[1, 2], [0, -1]]),
        "triangular_b5": SquareComplexMatrix.from_rows([[1, 5], [0, -1]]),
        # Segment [0, 1]
        "diagonal_segment": SquareComplexMatrix.diagonal([0, 1]),
        "identity": SquareComplexMatrix.identity(2),
        "normal_2x2": random_normal_matrix(2, SAMPLE_SEED),
        "random_2x2": random_matrix(2, SAMPLE_SEED),
        "random_3x3": random_matrix(3, SAMPLE_SEED),
        "random_4x4": random_matrix(4, SAMPLE_SEED),
    }


def write_sample_matrices(directory: str = 'matrices') -> List[str]:
    """
    Write every sample matrix as a matrix JSON document

    Args:
        directory: Target directory, created if missing

    Returns:
        Paths of the written files
    """
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, matrix in sample_matrices().items():
        path = os.path.join(directory, f"{name}.json")
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(matrix.to_json(), f, indent=2)
        paths.append(path)
        logger.info(f"Created {name} ({matrix.n}x{matrix.n}) at {path}")
    return paths


if __name__ == "__main__":
    write_sample_matrices()
