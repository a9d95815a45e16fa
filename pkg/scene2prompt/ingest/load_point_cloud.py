# -*- coding: utf-8 -*-
from io import BytesIO
from pathlib import Path

from numpy import array as npArray
from numpy import column_stack, empty, float64, isfinite, uint8
from plyfile import PlyData, PlyElement, PlyElementParseError, PlyHeaderParseError, PlyListProperty, PlyParseError

from scene2prompt import RENDER
from scene2prompt.utils import IngestError, get_logger, read_input


COORDS = ("x", "y", "z")
COLORS = ("red", "green", "blue")


def _line_offset(data: bytes, line) -> int:
    """Byte offset of a 1-based header line."""
    if not line or line <= 1: return 0
    pos = 0
    for _ in range(line - 1):
        nxt = data.find(b"\n", pos)
        if nxt < 0: return len(data)
        pos = nxt + 1
    return pos


def _body_offset(data: bytes) -> int:
    end = data.find(b"end_header")
    return len(data) if end < 0 else data.find(b"\n", end) + 1


def _read_ply(data: bytes, path) -> PlyData:
    """PlyData of the raw bytes with plyfile errors mapped to IngestError."""
    try:
        return PlyData.read(BytesIO(data))
    except PlyHeaderParseError as ex:
        raise IngestError(f"Malformed PLY header: {ex}", path, _line_offset(data, getattr(ex, "line", None)))
    except PlyElementParseError as ex:
        if "end-of-file" in str(ex):
            raise IngestError(f"Truncated PLY body: {ex}", path, len(data))
        raise IngestError(f"Malformed PLY body: {ex}", path, _body_offset(data))
    except (PlyParseError, ValueError, UnicodeDecodeError) as ex:
        raise IngestError(f"Malformed PLY file: {ex}", path, 0)


def _vertex_element(ply: PlyData, data: bytes, path):
    """The vertex element after checking the supported layout."""
    header_end = _body_offset(data)
    if not ply.text and ply.byte_order != "<":
        raise IngestError("Unsupported PLY format: only ascii and binary_little_endian", path, 0)
    if len(ply.elements) == 0 or ply.elements[0].name != "vertex":
        raise IngestError("Unsupported PLY layout: 'vertex' must be the first element", path, header_end)

    vertex = ply.elements[0]
    dtype = vertex.data.dtype
    for prop in vertex.properties:
        if isinstance(prop, PlyListProperty):
            raise IngestError(f"Unsupported PLY vertex property 'list {prop.name}'", path, header_end)
    names = dtype.names or ()
    if not all(c in names for c in COORDS):
        raise IngestError("Unsupported PLY layout: vertex needs x, y, z", path, header_end)
    for name in COORDS:
        if dtype[name].kind != "f":
            raise IngestError(f"Unsupported PLY layout: '{name}' must be float or double", path, header_end)
    has_colors = [c in names for c in COLORS]
    if any(has_colors) and not all(has_colors):
        raise IngestError("Unsupported PLY layout: red, green, blue must appear together", path, header_end)
    for name in (COLORS if all(has_colors) else ()):
        if dtype[name].kind != "u" or dtype[name].itemsize != 1:
            raise IngestError(f"Unsupported PLY layout: '{name}' must be uchar", path, header_end)
    return vertex


def load_point_cloud(path, **kwargs):
    """Ingest: Point Cloud (PLY)"""
    path = Path(path)
    data = read_input(path, "Point cloud file")

    ply = _read_ply(data, path)
    vertex = _vertex_element(ply, data, path)
    vertices, count = vertex.data, vertex.count
    if len(vertices) != count:
        raise IngestError(f"Truncated PLY body: {len(vertices)} of {count} vertices", path, len(data))

    points = column_stack([vertices[c].astype(float64) for c in COORDS]) if count > 0 else empty((0, 3))
    bad = ~isfinite(points).all(axis=1)
    if bad.any():
        i = int(bad.argmax())
        offset = None if ply.text else _body_offset(data) + i * vertices.dtype.itemsize
        raise IngestError(f"Non-finite coordinate at vertex {i}", path, offset)

    if COLORS[0] in vertices.dtype.names:
        colors = column_stack([vertices[c] for c in COLORS]).astype(uint8) if count > 0 else empty((0, 3), dtype=uint8)
    else:
        colors = npArray([RENDER["DEFAULT_RGB"]] * count, dtype=uint8).reshape(-1, 3)
        get_logger().debug(f"{path.name}: no vertex colors, using mid-gray")

    return points.reshape(-1, 3), colors


def save_point_cloud(path, points, colors=None, ascii: bool = False) -> Path:
    """Writes an (n, 3) cloud with optional uchar colors as PLY via plyfile."""
    points = npArray(points, dtype=float64).reshape(-1, 3)
    fields = [("x", "<f4"), ("y", "<f4"), ("z", "<f4")]
    if colors is not None:
        fields += [("red", "u1"), ("green", "u1"), ("blue", "u1")]
    vertices = empty(points.shape[0], dtype=fields)
    for i, c in enumerate(COORDS):
        vertices[c] = points[:, i]
    if colors is not None:
        colors = npArray(colors, dtype=uint8).reshape(-1, 3)
        for i, c in enumerate(COLORS):
            vertices[c] = colors[:, i]

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    PlyData([PlyElement.describe(vertices, "vertex")], text=ascii, byte_order="<").write(str(path))
    return path


load_point_cloud.__doc__ = \
"""Point Cloud (PLY)

Reads the vertex element of a PLY file, ASCII or binary little-endian, with
plyfile. plyfile errors become IngestErrors carrying a byte offset: the
offending header line, the start of the body, or the end of a truncated file.
Property values keep their declared types (float x/y/z, uchar
red/green/blue) so the ASCII and binary encodings of the same cloud load to
identical arrays. Vertex colors default to mid-gray when absent. The
'vertex' element must come first.

Args:
    path (str | Path): The .ply file

Returns:
    tuple: points (n, 3) float64 array, colors (n, 3) uint8 array, in file order

Raises:
    IngestError: malformed header, unsupported property layout, truncated
        body or non-finite coordinates; message carries the byte offset
"""
