"""Binary persistence for the similarity index.

Layout, version 1, all little-endian:

    offset  size  field
    0       4     magic b"MBIX"
    4       4     format version (u32) = 1
    8       4     bit width (u32)
    12      4     radius (u32)
    16      8     record count (u64)
    24      -     records: id (i64) + width/64 words (u64 each)
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .similarity import SimilarityIndex

MAGIC = b"MBIX"
VERSION = 1
_HEADER = struct.Struct("<4sIIIQ")


def save_index(index: SimilarityIndex, path: str | Path) -> None:
    path = Path(path)
    matrix = index.matrix()
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, index.width, index.radius, len(index)))
        for mol_id, row in zip(index.ids, matrix):
            fh.write(struct.pack("<q", mol_id))
            fh.write(row.astype("<u8").tobytes())


def load_index(path: str | Path) -> SimilarityIndex:
    from .morgan import Fingerprint

    path = Path(path)
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise ValueError(f"{path}: truncated index file")
    magic, version, width, radius, count = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise ValueError(f"{path}: not an index file (bad magic)")
    if version != VERSION:
        raise ValueError(f"{path}: unsupported index version {version}")
    n_words = width // 64
    record = struct.Struct(f"<q{n_words}Q")
    expected = _HEADER.size + count * record.size
    if len(data) != expected:
        raise ValueError(f"{path}: expected {expected} bytes, found {len(data)}")
    index = SimilarityIndex(width, radius)
    offset = _HEADER.size
    for _ in range(count):
        fields = record.unpack_from(data, offset)
        offset += record.size
        words = np.array(fields[1:], dtype=np.uint64)
        index.add(fields[0], Fingerprint(words, width, radius, fields[0]))
    return index
