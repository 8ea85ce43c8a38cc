"""Knowledge base: (ids x vectors) matrix persisted as a bit-exact binary file.

File layout (no padding, no alignment gaps):
  bytes 0-3   magic "RPPD"
  u32 LE      format_version = 1
  u32 LE      dim
  u64 LE      count
  u8          modality (0=text, 1=image)
  u8          pooling  (0=mean, 1=flatten)
  u16 LE      model_name byte length, then that many UTF-8 bytes
  count       ID records, exactly 9 ASCII bytes each
  count*dim   float32 LE values, row-major
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass, field

import numpy as np

from .corpus import CorpusManifest, parse_item_id
from .embedding import EmbedderDescriptor
from .errors import (
    BadMagic,
    CorruptIds,
    DimensionMismatch,
    EmbedFailure,
    IoFailure,
    MalformedId,
    NotFound,
    Truncated,
    UnsupportedVersion,
)

MAGIC = b"RPPD"
FORMAT_VERSION = 1

_MODALITY_CODES = {"text": 0, "image": 1}
_POOLING_CODES = {"mean": 0, "flatten": 1}
_MODALITY_NAMES = {v: k for k, v in _MODALITY_CODES.items()}
_POOLING_NAMES = {v: k for k, v in _POOLING_CODES.items()}


@dataclass(frozen=True)
class KnowledgeBase:
    descriptor: EmbedderDescriptor
    ids: tuple[str, ...]
    matrix: np.ndarray
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        matrix = np.ascontiguousarray(self.matrix, dtype=np.float32)
        if matrix.ndim != 2:
            raise ValueError("matrix must be 2-D")
        if matrix.shape != (len(self.ids), self.descriptor.dim):
            raise DimensionMismatch(
                f"matrix shape {matrix.shape} does not match "
                f"({len(self.ids)}, {self.descriptor.dim})")
        if matrix.size and not np.all(np.isfinite(matrix)):
            raise ValueError("matrix contains non-finite values")
        index = {}
        for row, item_id in enumerate(self.ids):
            parse_item_id(item_id)
            if item_id in index:
                raise CorruptIds(f"duplicate id {item_id!r}")
            index[item_id] = row
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.ids)


def build_kb(manifest: CorpusManifest, embed, descriptor: EmbedderDescriptor) -> KnowledgeBase:
    """Embed every manifest item (in manifest order) into one matrix."""
    rows = []
    for item in manifest.items:
        try:
            vec = np.asarray(embed(item.text), dtype=np.float32)
        except Exception as exc:
            raise EmbedFailure(item.id, exc) from exc
        if vec.ndim != 1 or vec.shape[0] != descriptor.dim:
            raise DimensionMismatch(
                f"item {item.id}: embedder returned dim "
                f"{vec.shape[0] if vec.ndim == 1 else vec.shape}, "
                f"expected {descriptor.dim}")
        rows.append(vec)
    matrix = (np.stack(rows) if rows
              else np.zeros((0, descriptor.dim), dtype=np.float32))
    return KnowledgeBase(descriptor=descriptor,
                         ids=tuple(item.id for item in manifest.items),
                         matrix=matrix)


def save_kb(kb: KnowledgeBase, sink) -> int:
    """Write the KB to a binary stream or path. Returns the byte count.

    Byte-deterministic: equal KBs serialize to identical bytes.
    """
    if isinstance(sink, str):
        with open(sink, "wb") as fh:
            return save_kb(kb, fh)
    name_bytes = kb.descriptor.name.encode("utf-8")
    if len(name_bytes) > 0xFFFF:
        raise IoFailure("model name too long")
    header = MAGIC + struct.pack(
        "<IIQBBH",
        FORMAT_VERSION,
        kb.descriptor.dim,
        len(kb.ids),
        _MODALITY_CODES[kb.descriptor.modality],
        _POOLING_CODES[kb.descriptor.pooling],
        len(name_bytes),
    ) + name_bytes
    ids_section = b"".join(i.encode("ascii") for i in kb.ids)
    matrix_bytes = np.ascontiguousarray(
        kb.matrix, dtype="<f4").tobytes(order="C")
    try:
        sink.write(header)
        sink.write(ids_section)
        sink.write(matrix_bytes)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return len(header) + len(ids_section) + len(matrix_bytes)


def _read_exact(source, n: int, what: str) -> bytes:
    data = source.read(n)
    if len(data) != n:
        raise Truncated(f"stream ended while reading {what}")
    return data


def load_kb(source) -> KnowledgeBase:
    """Read a KB written by save_kb; round-trips bitwise."""
    if isinstance(source, str):
        with open(source, "rb") as fh:
            return load_kb(fh)
    if isinstance(source, bytes):
        source = io.BytesIO(source)

    magic = _read_exact(source, 4, "magic")
    if magic != MAGIC:
        raise BadMagic(f"bad magic {magic!r}")
    version, dim, count, modality_code, pooling_code, name_len = struct.unpack(
        "<IIQBBH", _read_exact(source, 20, "header"))
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"format version {version} not supported")
    if dim < 1:
        raise Truncated("header declares dim < 1")
    if modality_code not in _MODALITY_NAMES or pooling_code not in _POOLING_NAMES:
        raise UnsupportedVersion("unknown modality or pooling code")
    name = _read_exact(source, name_len, "model name").decode("utf-8")

    ids = []
    for i in range(count):
        raw = _read_exact(source, 9, f"id record {i}")
        try:
            item_id = parse_item_id(raw.decode("ascii"))
        except (UnicodeDecodeError, MalformedId) as exc:
            raise CorruptIds(f"id record {i}: {exc}") from exc
        ids.append(item_id)

    matrix_bytes = _read_exact(source, 4 * count * dim, "matrix")
    matrix = np.frombuffer(matrix_bytes, dtype="<f4").reshape(count, dim).copy()

    descriptor = EmbedderDescriptor(
        name=name, modality=_MODALITY_NAMES[modality_code], dim=dim,
        pooling=_POOLING_NAMES[pooling_code])
    try:
        return KnowledgeBase(descriptor=descriptor, ids=tuple(ids), matrix=matrix)
    except CorruptIds:
        raise
    except DimensionMismatch as exc:
        raise Truncated(str(exc)) from exc


def get_vector(kb: KnowledgeBase, item_id: str) -> np.ndarray:
    """Return the stored row for an id, or raise NotFound."""
    row = kb._index.get(item_id)
    if row is None:
        raise NotFound(f"id {item_id!r} not in knowledge base")
    return kb.matrix[row]
