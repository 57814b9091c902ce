# conftest.py: Shared fixtures for the test suite.

import numpy as np
import pytest
from PIL import Image

from field_io.field import GrayField
from logger import logger


@pytest.fixture(autouse=True)
def _log_to_tmp(tmp_path):
    logger.redirect(str(tmp_path / "nst_test_log.txt"))
    yield
    logger.close()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def noise_field(rng):
    return GrayField(rng.random((64, 64)))


def write_pgm(path, array):
    """Writes a [0,1] array as an 8-bit PGM."""
    Image.fromarray(np.round(np.clip(array, 0.0, 1.0) * 255.0).astype(np.uint8)).save(str(path))
    return str(path)
