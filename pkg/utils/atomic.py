# atomic.py: Atomic file output.
# Results are written to a temporary file in the destination directory and
# moved into place with os.replace, so readers never see a partial file.

import contextlib
import os
import tempfile
from typing import Iterator, IO

from errors import InputError


@contextlib.contextmanager
def atomic_path(path: str) -> Iterator[str]:
    """Yields a temporary path that replaces `path` when the block succeeds."""
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        raise InputError(f"Output directory does not exist: {directory}")
    fd, tmp_path = tempfile.mkstemp(
        prefix=".tmp_", suffix=os.path.splitext(path)[1], dir=directory
    )
    os.close(fd)
    try:
        yield tmp_path
        os.replace(tmp_path, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.remove(tmp_path)
        raise


@contextlib.contextmanager
def atomic_open(path: str, mode: str = "w", **kwargs) -> Iterator[IO]:
    with atomic_path(path) as tmp_path:
        if "b" not in mode:
            kwargs.setdefault("encoding", "utf-8")
            kwargs.setdefault("newline", "")
        with open(tmp_path, mode, **kwargs) as handle:
            yield handle


def write_text_atomic(path: str, text: str):
    with atomic_open(path, "w") as handle:
        handle.write(text)


def write_bytes_atomic(path: str, payload: bytes):
    with atomic_open(path, "wb") as handle:
        handle.write(payload)
