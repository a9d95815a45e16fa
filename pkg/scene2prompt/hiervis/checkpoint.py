# -*- coding: utf-8 -*-
from pathlib import Path
from struct import Struct, error as StructError

from numpy import dtype as npDtype
from numpy import frombuffer, prod

from scene2prompt.utils import HierarchyError, IngestError, read_input, write_if_changed

from ._model import HierarchicalModel


HVC_MAGIC = b"HVC1"
HVC_VERSION = 1
HVC_HEADER = Struct("<4sIII")      # magic, version, heads, tensor count
F64 = npDtype("<f8")


def save_checkpoint(path, model: HierarchicalModel) -> bool:
    """Writes the model as a versioned binary. Returns True if written."""
    chunks = [HVC_HEADER.pack(HVC_MAGIC, HVC_VERSION, model.heads, len(model.params))]
    for name in model.names():
        value = model.params[name]
        encoded = name.encode("utf-8")
        chunks.append(Struct(f"<H{len(encoded)}sB{value.ndim}I").pack(len(encoded), encoded, value.ndim, *value.shape))
        chunks.append(value.astype(F64).tobytes(order="C"))
    return write_if_changed(path, b"".join(chunks))


def load_checkpoint(path) -> HierarchicalModel:
    """Reads a checkpoint written by save_checkpoint, bit-exact."""
    path = Path(path)
    data = read_input(path, "Checkpoint")

    try:
        magic, version, heads, count = HVC_HEADER.unpack_from(data, 0)
    except StructError:
        raise IngestError("Truncated checkpoint header", path, len(data))
    if magic != HVC_MAGIC:
        raise IngestError(f"Bad checkpoint magic {magic!r}, expected {HVC_MAGIC!r}", path, 0)
    if version != HVC_VERSION:
        raise IngestError(f"Unsupported checkpoint version {version}", path, 4)

    offset, params = HVC_HEADER.size, {}
    try:
        for _ in range(count):
            (length,) = Struct("<H").unpack_from(data, offset)
            name = data[offset + 2:offset + 2 + length].decode("utf-8")
            offset += 2 + length
            (ndim,) = Struct("<B").unpack_from(data, offset)
            shape = Struct(f"<{ndim}I").unpack_from(data, offset + 1)
            offset += 1 + 4 * ndim
            size = int(prod(shape)) if ndim else 1
            if offset + 8 * size > len(data):
                raise IngestError(f"Truncated tensor '{name}'", path, len(data))
            params[name] = frombuffer(data, dtype=F64, count=size, offset=offset).reshape(shape).astype("f8")
            offset += 8 * size
    except StructError:
        raise IngestError("Truncated checkpoint tensor header", path, offset)
    except UnicodeDecodeError:
        raise IngestError("Checkpoint tensor name is not valid UTF-8", path, offset + 2)
    if offset != len(data):
        raise IngestError(f"{len(data) - offset} trailing bytes after {count} tensors", path, offset)

    try:
        return HierarchicalModel(params, heads)
    except (KeyError, HierarchyError) as ex:
        raise IngestError(f"Checkpoint does not describe a model: {ex}", path)
