# -*- coding: utf-8 -*-
from pathlib import Path
from struct import Struct, error as StructError

from numpy import array as npArray
from numpy import float32, frombuffer, isfinite

from scene2prompt.utils import IngestError, read_input, write_if_changed


HVF_MAGIC = b"HVF1"
HVF_HEADER = Struct("<4sIII")


def load_patch_features(path, **kwargs):
    """Ingest: Patch Features (.hvf)"""
    path = Path(path)
    data = read_input(path, "Patch feature file")

    # Validate Arguments
    try:
        magic, views, patches, dim = HVF_HEADER.unpack_from(data, 0)
    except StructError:
        raise IngestError(f"Truncated .hvf header: {len(data)} of {HVF_HEADER.size} bytes", path, len(data))
    if magic != HVF_MAGIC:
        raise IngestError(f"Bad .hvf magic {magic!r}, expected {HVF_MAGIC!r}", path, 0)

    expected = views * patches * dim * 4
    actual = len(data) - HVF_HEADER.size
    if actual != expected:
        raise IngestError(
            f"Size mismatch: header {views}x{patches}x{dim} needs {expected} body bytes, found {actual}",
            path, HVF_HEADER.size + min(actual, expected)
        )

    # Calculate Result
    values = frombuffer(data, dtype="<f4", offset=HVF_HEADER.size).reshape(views, patches, dim)
    finite = isfinite(values).reshape(-1)
    if not finite.all():
        first = int((~finite).argmax())
        raise IngestError(f"Non-finite feature value at float index {first}", path, HVF_HEADER.size + 4 * first)

    return values.astype(float32)


def save_patch_features(path, features) -> bool:
    """Writes a (views, patches, dim) array as .hvf. Returns True if written."""
    values = npArray(features, dtype="<f4")
    if values.ndim != 3:
        raise IngestError(f"Patch features must be 3-d (views, patches, dim), got shape {values.shape}", path)
    if not isfinite(values).all():
        raise IngestError("Patch features contain non-finite values", path)
    header = HVF_HEADER.pack(HVF_MAGIC, *values.shape)
    return write_if_changed(path, header + values.tobytes(order="C"))


load_patch_features.__doc__ = \
"""Patch Features (.hvf)

Reads precomputed patch-level features of the rendered views, as produced by
an external vision encoder. The file is a 16 byte little-endian header
followed by the features as little-endian float32 in view, patch, dim order.

File layout:
    bytes 0-3    magic "HVF1"
    bytes 4-7    u32 view_count
    bytes 8-11   u32 patches_per_view
    bytes 12-15  u32 dim
    bytes 16-    view_count * patches_per_view * dim float32

Args:
    path (str | Path): The .hvf file

Returns:
    numpy.ndarray: float32 array of shape (view_count, patches_per_view, dim);
        entry m is the patch matrix of view m

Raises:
    IngestError: bad magic, body size mismatch (expected and actual byte
        counts) or non-finite values
"""
