# image_io.py: Image file boundary of the pipeline.
# Reads 8-bit PGM (P5) and 8-bit grayscale/RGB PNG into [0,1] GrayFields,
# writes 8-bit P5 files, and handles the raw float64 dump used for exact
# texture layers.

import os

import numpy as np
from PIL import Image, UnidentifiedImageError

from config import PIXEL_MAXVAL, RAW_DATA_DTYPE, RAW_HEADER_DTYPE, SUPPORTED_IMAGE_MODES
from errors import InputError
from field_io.field import GrayField
from logger import logger
from utils.atomic import atomic_path, write_bytes_atomic


def read_image(path: str) -> GrayField:
    """Loads a PGM/PNG file. RGB pixels become the unweighted channel mean."""
    if not os.path.isfile(path):
        raise InputError(f"Image file not found: {path}")

    try:
        with Image.open(path) as image:
            if image.format not in ("PPM", "PNG"):
                raise InputError(f"Unsupported image format '{image.format}' in {path}.")
            if image.mode not in SUPPORTED_IMAGE_MODES:
                raise InputError(
                    f"Unsupported pixel mode '{image.mode}' in {path}; "
                    "only 8-bit grayscale or RGB is accepted."
                )
            image.load()
            pixels = np.asarray(image, dtype=np.float64)
    except InputError:
        raise
    except (UnidentifiedImageError, SyntaxError, ValueError, OSError) as e:
        raise InputError(f"Malformed image file {path}: {e}") from e

    if pixels.ndim == 3:
        pixels = pixels.mean(axis=2)

    field = GrayField(pixels / PIXEL_MAXVAL)
    logger.debug(
        "FieldIO", "Image loaded.", {"path": path, "width": field.width, "height": field.height}
    )
    return field


def quantize_bytes(field: GrayField) -> np.ndarray:
    """Clamps to [0,1] and rounds half-up onto 0..255."""
    clipped = np.clip(field.data, 0.0, 1.0)
    return np.floor(clipped * PIXEL_MAXVAL + 0.5).astype(np.uint8)


def write_image(field: GrayField, path: str):
    """Writes an 8-bit binary PGM (P5)."""
    image = Image.fromarray(quantize_bytes(field))
    try:
        with atomic_path(path) as tmp_path:
            image.save(tmp_path, format="PPM")
    except OSError as e:
        raise InputError(f"Cannot write image to {path}: {e}") from e
    logger.debug("FieldIO", "Image written.", {"path": path})


def write_raw(field: GrayField, path: str):
    """Header of two little-endian uint64 (width, height), then float64 row-major."""
    header = np.array([field.width, field.height], dtype=RAW_HEADER_DTYPE).tobytes()
    payload = np.ascontiguousarray(field.data, dtype=RAW_DATA_DTYPE).tobytes()
    try:
        write_bytes_atomic(path, header + payload)
    except OSError as e:
        raise InputError(f"Cannot write raw dump to {path}: {e}") from e


def read_raw(path: str) -> GrayField:
    if not os.path.isfile(path):
        raise InputError(f"Raw dump not found: {path}")
    with open(path, "rb") as handle:
        blob = handle.read()
    if len(blob) < 16:
        raise InputError(f"Raw dump {path} is shorter than its header.")
    width, height = (int(v) for v in np.frombuffer(blob[:16], dtype=RAW_HEADER_DTYPE))
    expected = 16 + width * height * 8
    if width == 0 or height == 0 or len(blob) != expected:
        raise InputError(
            f"Raw dump {path} has {len(blob)} bytes, expected {expected} for {width}x{height}."
        )
    data = np.frombuffer(blob[16:], dtype=RAW_DATA_DTYPE).reshape(height, width)
    return GrayField(data)
