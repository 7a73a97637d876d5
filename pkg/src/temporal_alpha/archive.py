"""Binary container for a computed temporal alpha-shape.

Layout (little-endian): a fixed header, the dataset name, then the payload
whose CRC32 is checked on load. The payload holds the point table
(index u32, x f64, y f64), the cuboid table (edge endpoints, side flag and
temporal bounds as u32, alpha bounds as f64 with IEEE +inf for unbounded
tops), and optionally the serialized stabbing index.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .boxtree import BoxTree
from .staircase import CuboidSet

MAGIC = b"TASH"
VERSION = 1
_HEADER = struct.Struct("<4sIIQQQIII")
# magic, version, flags, n_points, n_cuboids, record_count, stride, name_len, crc32

POINT_DTYPE = np.dtype([("index", "<u4"), ("x", "<f8"), ("y", "<f8")])
CUBOID_DTYPE = np.dtype(
    [
        ("edge_a", "<u4"),
        ("edge_b", "<u4"),
        ("side", "<u4"),
        ("i_min", "<u4"),
        ("i_max", "<u4"),
        ("j_min", "<u4"),
        ("j_max", "<u4"),
        ("alpha_lo", "<f8"),
        ("alpha_hi", "<f8"),
    ]
)

_FLAG_INDEX = 1


@dataclass
class Archive:
    name: str
    stride: int
    cuboids: CuboidSet
    tree: BoxTree | None

    @property
    def n(self):
        return self.cuboids.n


def _pack_index(tree: BoxTree) -> bytes:
    parts = []
    arrays = tree.to_arrays()
    parts.append(struct.pack("<I", len(arrays)))
    for key, arr in arrays.items():
        arr = np.ascontiguousarray(arr)
        kb = key.encode()
        ds = arr.dtype.str.encode()
        parts.append(struct.pack("<H", len(kb)))
        parts.append(kb)
        parts.append(struct.pack("<H", len(ds)))
        parts.append(ds)
        parts.append(struct.pack("<B", arr.ndim))
        for d in arr.shape:
            parts.append(struct.pack("<Q", d))
        raw = arr.tobytes()
        parts.append(struct.pack("<Q", len(raw)))
        parts.append(raw)
    return b"".join(parts)


def _unpack_index(buf: memoryview) -> BoxTree:
    pos = 0

    def take(fmt):
        nonlocal pos
        s = struct.Struct(fmt)
        vals = s.unpack_from(buf, pos)
        pos += s.size
        return vals

    (count,) = take("<I")
    arrays = {}
    for _ in range(count):
        (klen,) = take("<H")
        key = bytes(buf[pos : pos + klen]).decode()
        pos += klen
        (dlen,) = take("<H")
        dstr = bytes(buf[pos : pos + dlen]).decode()
        pos += dlen
        (ndim,) = take("<B")
        shape = tuple(take("<Q")[0] for _ in range(ndim))
        (rawlen,) = take("<Q")
        arr = np.frombuffer(buf[pos : pos + rawlen], dtype=np.dtype(dstr)).reshape(shape)
        pos += rawlen
        arrays[key] = arr.copy()
    return BoxTree.from_arrays(arrays)


def write_archive(path, name, cuboids: CuboidSet, tree: BoxTree | None = None, stride=0):
    pts = np.empty(cuboids.n, dtype=POINT_DTYPE)
    pts["index"] = np.arange(1, cuboids.n + 1, dtype=np.uint32)
    pts["x"] = cuboids.xs
    pts["y"] = cuboids.ys

    cub = np.empty(len(cuboids), dtype=CUBOID_DTYPE)
    cub["edge_a"] = cuboids.edge_a
    cub["edge_b"] = cuboids.edge_b
    cub["side"] = (cuboids.side > 0).astype(np.uint32)  # 1 front, 0 back
    cub["i_min"] = cuboids.i_min
    cub["i_max"] = cuboids.i_max
    cub["j_min"] = cuboids.j_min
    cub["j_max"] = cuboids.j_max
    cub["alpha_lo"] = cuboids.alpha_lo
    cub["alpha_hi"] = cuboids.alpha_hi

    payload = pts.tobytes() + cub.tobytes()
    flags = 0
    if tree is not None:
        payload += _pack_index(tree)
        flags |= _FLAG_INDEX
    name_b = name.encode()
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        flags,
        cuboids.n,
        len(cuboids),
        cuboids.record_count,
        stride,
        len(name_b),
        zlib.crc32(payload),
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(name_b)
        fh.write(payload)


def read_archive(path) -> Archive:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size or raw[:4] != MAGIC:
        raise ValueError(f"{path}: not a temporal alpha-shape archive")
    (magic, version, flags, n_points, n_cuboids, record_count, stride, name_len, crc) = (
        _HEADER.unpack_from(raw, 0)
    )
    if version != VERSION:
        raise ValueError(f"{path}: unsupported archive version {version}")
    pos = _HEADER.size
    name = raw[pos : pos + name_len].decode()
    pos += name_len
    payload = raw[pos:]
    if zlib.crc32(payload) != crc:
        raise ValueError(f"{path}: archive payload is corrupt (checksum mismatch)")

    view = memoryview(payload)
    pts = np.frombuffer(view[: n_points * POINT_DTYPE.itemsize], dtype=POINT_DTYPE)
    pos = n_points * POINT_DTYPE.itemsize
    cub = np.frombuffer(
        view[pos : pos + n_cuboids * CUBOID_DTYPE.itemsize], dtype=CUBOID_DTYPE
    )
    pos += n_cuboids * CUBOID_DTYPE.itemsize

    columns = {
        "edge_a": cub["edge_a"].astype(np.uint32),
        "edge_b": cub["edge_b"].astype(np.uint32),
        "side": np.where(cub["side"] > 0, 1, -1).astype(np.int8),
        "i_min": cub["i_min"].astype(np.uint32),
        "i_max": cub["i_max"].astype(np.uint32),
        "j_min": cub["j_min"].astype(np.uint32),
        "j_max": cub["j_max"].astype(np.uint32),
        "alpha_lo": cub["alpha_lo"].astype(np.float64),
        "alpha_hi": cub["alpha_hi"].astype(np.float64),
    }
    cuboids = CuboidSet.from_columns(
        pts["x"].astype(np.float64),
        pts["y"].astype(np.float64),
        columns,
        record_count,
    )
    tree = None
    if flags & _FLAG_INDEX:
        tree = _unpack_index(view[pos:])
    return Archive(name=name, stride=stride, cuboids=cuboids, tree=tree)
