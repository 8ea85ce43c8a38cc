"""Image-text pair manifest: loading, validation, and facet statistics.

The manifest is a UTF-8 JSON Lines file, one item per line. Blank lines
and lines starting with '#' are ignored. Facet vocabularies are closed;
unknown values or unknown keys are errors.
"""

from __future__ import annotations

import io
import json
import re
from dataclasses import dataclass, field

from .errors import DuplicateId, MalformedId, ParseError

ITEM_ID_RE = re.compile(r"^P[0-9]{8}$")

LANGUAGES = ("zh", "en")
IMAGE_KINDS = ("histopathology", "ihc")
DISEASE_CLASSES = ("tumor", "other")

_REQUIRED_KEYS = {"id", "text", "image_path", "language", "image_kind",
                  "disease_class", "source_book"}
_ALLOWED_KEYS = _REQUIRED_KEYS | {"page"}


def parse_item_id(s: str) -> str:
    """Validate an item ID: literal 'P' followed by exactly 8 decimal digits."""
    if not isinstance(s, str) or not ITEM_ID_RE.match(s):
        raise MalformedId(f"invalid item id {s!r}")
    return s


@dataclass(frozen=True)
class KnowledgeItem:
    id: str
    text: str
    image_path: str
    language: str
    image_kind: str
    disease_class: str
    source_book: str
    page: int | None = None

    def __post_init__(self):
        parse_item_id(self.id)
        if not self.text.strip():
            raise ParseError(f"item {self.id}: empty text")
        if not self.image_path:
            raise ParseError(f"item {self.id}: empty image_path")
        if ".." in self.image_path.split("/"):
            raise ParseError(f"item {self.id}: image_path contains traversal segment")
        if self.language not in LANGUAGES:
            raise ParseError(f"item {self.id}: unknown language {self.language!r}")
        if self.image_kind not in IMAGE_KINDS:
            raise ParseError(f"item {self.id}: unknown image_kind {self.image_kind!r}")
        if self.disease_class not in DISEASE_CLASSES:
            raise ParseError(f"item {self.id}: unknown disease_class {self.disease_class!r}")
        if self.page is not None and (not isinstance(self.page, int) or self.page < 1):
            raise ParseError(f"item {self.id}: page must be a positive integer")

    def to_record(self) -> dict:
        rec = {
            "id": self.id,
            "text": self.text,
            "image_path": self.image_path,
            "language": self.language,
            "image_kind": self.image_kind,
            "disease_class": self.disease_class,
            "source_book": self.source_book,
        }
        if self.page is not None:
            rec["page"] = self.page
        return rec


@dataclass(frozen=True)
class CorpusManifest:
    name: str
    version: str
    items: tuple[KnowledgeItem, ...] = ()

    def __post_init__(self):
        seen = set()
        for item in self.items:
            if item.id in seen:
                raise DuplicateId(item.id)
            seen.add(item.id)

    def __len__(self):
        return len(self.items)

    def get(self, item_id: str) -> KnowledgeItem | None:
        for item in self.items:
            if item.id == item_id:
                return item
        return None


@dataclass(frozen=True)
class CorpusStats:
    total: int
    by_image_kind: dict = field(default_factory=dict)
    by_language: dict = field(default_factory=dict)
    by_disease: dict = field(default_factory=dict)


def _parse_line(line: str, line_no: int) -> KnowledgeItem:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg})", line_no)
    if not isinstance(rec, dict):
        raise ParseError("record is not an object", line_no)
    unknown = set(rec) - _ALLOWED_KEYS
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", line_no)
    missing = _REQUIRED_KEYS - set(rec)
    if missing:
        raise ParseError(f"missing keys {sorted(missing)}", line_no)
    try:
        return KnowledgeItem(**rec)
    except (MalformedId, ParseError) as exc:
        raise ParseError(str(exc), line_no) from exc


def load_manifest(source, name: str = "corpus", version: str = "1") -> CorpusManifest:
    """Load a manifest from a byte stream, file path, or text stream.

    Items keep file order; that order is the canonical row order used by
    the knowledge-base store.
    """
    if isinstance(source, (str, bytes)) and not isinstance(source, bytes):
        with open(source, "rb") as fh:
            return load_manifest(fh, name=name, version=version)
    if isinstance(source, bytes):
        source = io.BytesIO(source)
    data = source.read()
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data

    items = []
    seen = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        item = _parse_line(stripped, line_no)
        if item.id in seen:
            raise DuplicateId(item.id, line_no)
        seen[item.id] = line_no
        items.append(item)
    return CorpusManifest(name=name, version=version, items=tuple(items))


def dump_manifest(manifest: CorpusManifest) -> bytes:
    """Serialize a manifest back to JSON Lines (UTF-8)."""
    lines = [json.dumps(item.to_record(), ensure_ascii=False, sort_keys=True)
             for item in manifest.items]
    return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")


def compute_stats(manifest: CorpusManifest) -> CorpusStats:
    """Count items per facet; every facet map sums to the total."""
    by_kind = {k: 0 for k in IMAGE_KINDS}
    by_lang = {k: 0 for k in LANGUAGES}
    by_disease = {k: 0 for k in DISEASE_CLASSES}
    for item in manifest.items:
        by_kind[item.image_kind] += 1
        by_lang[item.language] += 1
        by_disease[item.disease_class] += 1
    return CorpusStats(
        total=len(manifest.items),
        by_image_kind=by_kind,
        by_language=by_lang,
        by_disease=by_disease,
    )
