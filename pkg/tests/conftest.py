import os
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from livc.matrix import PixelMatrix, parse_pgm, write_csv

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"
REAL_IMAGES = ("brick", "camera", "coins", "grass", "moon")


@pytest.fixture(scope="session")
def real_matrices() -> dict[str, PixelMatrix]:
    """Five 256x256 grayscale photographs (skimage sample data crops)."""
    return {name: parse_pgm((DATA / f"{name}.pgm").read_bytes()) for name in REAL_IMAGES}


@pytest.fixture(scope="session")
def real_csvs(real_matrices) -> dict[str, bytes]:
    return {name: write_csv(m).encode("ascii") for name, m in real_matrices.items()}


def gradient_noise(rows: int, cols: int, seed: int, noise: float = 6.0) -> PixelMatrix:
    """Smooth diagonal gradient plus a low-frequency wave and Gaussian noise."""
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:rows, 0:cols]
    base = 255.0 * (x / max(cols - 1, 1) + y / max(rows - 1, 1)) / 2
    wave = 20.0 * np.sin(2 * np.pi * x / max(cols, 1) * rng.uniform(1, 3))
    img = base + wave + rng.normal(0, noise, size=(rows, cols))
    return PixelMatrix(np.clip(np.rint(img), 0, 255).astype(np.uint8))


# -- acceptance summary ----------------------------------------------------

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
