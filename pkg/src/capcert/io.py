"""Point-set files and report serialization.

Binary layout (little-endian)::

    b"CAPF" | u16 version | u32 dim | u64 count | count*dim f64 (row-major)
    | optional: u32 metadata length | metadata as UTF-8 JSON

JSON point sets are ``{"dim": n, "points": [[...], ...], "metadata": {...}}``
with floats written by ``repr`` (17 significant digits round-trip).
"""

import json
import math
import struct
from pathlib import Path

import numpy as np

MAGIC = b"CAPF"
VERSION = 1
_HEADER = struct.Struct("<4sHIQ")


class FormatError(ValueError):
    pass


def dumps_points(points, metadata=None):
    pts = np.ascontiguousarray(np.atleast_2d(points), dtype="<f8")
    count, dim = pts.shape
    blob = _HEADER.pack(MAGIC, VERSION, dim, count) + pts.tobytes(order="C")
    if metadata is not None:
        meta = json.dumps(to_jsonable(metadata), sort_keys=True).encode("utf-8")
        blob += struct.pack("<I", len(meta)) + meta
    return blob


def loads_points(blob):
    if len(blob) < _HEADER.size:
        raise FormatError("truncated header")
    magic, version, dim, count = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    start = _HEADER.size
    end = start + 8 * dim * count
    if len(blob) < end:
        raise FormatError("truncated point data")
    pts = np.frombuffer(blob[start:end], dtype="<f8").reshape(count, dim).astype(np.float64)
    metadata = None
    if len(blob) > end:
        (length,) = struct.unpack_from("<I", blob, end)
        raw = blob[end + 4:end + 4 + length]
        if len(raw) != length:
            raise FormatError("truncated metadata")
        metadata = json.loads(raw.decode("utf-8"))
    return pts, metadata


def write_points(path, points, metadata=None):
    path = Path(path)
    if path.suffix == ".json":
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        doc = {"dim": int(pts.shape[1]), "points": pts.tolist(), "metadata": to_jsonable(metadata)}
        path.write_text(dump_json(doc))
    else:
        path.write_bytes(dumps_points(points, metadata))


def read_points(path):
    path = Path(path)
    if path.suffix == ".json":
        doc = json.loads(path.read_text())
        if isinstance(doc, list):
            return np.asarray(doc, dtype=np.float64), None
        return np.asarray(doc["points"], dtype=np.float64), doc.get("metadata")
    return loads_points(path.read_bytes())


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    return obj


def dump_json(doc):
    """Deterministic JSON text; floats use the shortest round-trip repr."""
    return json.dumps(to_jsonable(doc), indent=2, sort_keys=False) + "\n"
