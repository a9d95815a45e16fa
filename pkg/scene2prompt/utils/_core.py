# -*- coding: utf-8 -*-
import logging
from hashlib import sha256
from os import replace as os_replace
from pathlib import Path
from time import perf_counter
from typing import Union

from numpy import isfinite as npIsfinite
from numpy import ndarray

from ._errors import GeometryError, IngestError
from ._types import Aabb3, Point3


_PREFIX = {
    logging.DEBUG: "[i]",
    logging.INFO: "[i]",
    logging.WARNING: "[!]",
    logging.ERROR: "[X]",
    logging.CRITICAL: "[X]",
}


class _PrefixFormatter(logging.Formatter):
    """Terminal prefixes: [i] info, [+] progress, [!] warning, [X] error."""

    def format(self, record: logging.LogRecord) -> str:
        prefix = getattr(record, "prefix", None) or _PREFIX.get(record.levelno, "[i]")
        return f"{prefix} {record.getMessage()}"


def get_logger() -> logging.Logger:
    """Returns the package logger, attaching the prefix handler once."""
    logger = logging.getLogger("scene2prompt")
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(_PrefixFormatter())
        logger.addHandler(handler)
        logger.setLevel(logging.WARNING)
        logger.propagate = False
    return logger


def set_verbose(verbose: bool = True, cli: bool = False) -> logging.Logger:
    """DEBUG when verbose, INFO for the CLI and WARNING for library use."""
    logger = get_logger()
    if verbose: logger.setLevel(logging.DEBUG)
    elif cli: logger.setLevel(logging.INFO)
    else: logger.setLevel(logging.WARNING)
    return logger


def progress(message: str) -> None:
    get_logger().info(message, extra={"prefix": "[+]"})


def final_time(stime: float) -> str:
    """Human readable elapsed time since stime, in milliseconds and seconds."""
    time_diff = perf_counter() - stime
    return f"{time_diff * 1000:2.4f} ms ({time_diff:2.4f} s)"


def content_hash(data: Union[bytes, str]) -> str:
    """Hex sha256 of bytes (str is utf-8 encoded)."""
    if isinstance(data, str): data = data.encode("utf-8")
    return sha256(data).hexdigest()


def read_input(path: Union[str, Path], what: str = "File") -> bytes:
    """Bytes of an input file; a missing or unreadable file is an IngestError."""
    path = Path(path)
    if not path.exists():
        raise IngestError(f"{what} not found", path)
    try:
        return path.read_bytes()
    except OSError as ex:
        raise IngestError(f"{what} is unreadable: {ex.strerror or ex}", path)


def read_input_text(path: Union[str, Path], what: str = "File") -> str:
    """UTF-8 text of an input file; undecodable bytes are an IngestError at
    the offset of the first bad byte."""
    data = read_input(path, what)
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as ex:
        raise IngestError(f"{what} is not valid UTF-8", Path(path), ex.start)


def write_if_changed(path: Union[str, Path], data: Union[bytes, str]) -> bool:
    """Writes data atomically unless the file already holds identical bytes.

    Returns True when the file was (re)written. Unchanged files keep their
    mtime, which makes pipeline reruns idempotent.
    """
    path = Path(path)
    if isinstance(data, str): data = data.encode("utf-8")
    if path.exists() and content_hash(path.read_bytes()) == content_hash(data):
        return False
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_bytes(data)
    os_replace(tmp, path)
    return True


def verify_box(box: Aabb3) -> Aabb3:
    """Returns the box if it is an Aabb3, otherwise raises."""
    if not isinstance(box, Aabb3):
        raise GeometryError(f"[X] Expected an Aabb3, got {type(box).__name__}")
    return box


def verify_finite(values: ndarray, what: str = "values") -> ndarray:
    """Returns values if every entry is finite, otherwise raises."""
    if not npIsfinite(values).all():
        raise GeometryError(f"[X] {what} contain non-finite entries")
    return values


def as_point(value) -> Point3:
    """Point3 from a Point3 or any 3-sequence."""
    return value if isinstance(value, Point3) else Point3.of(value)
