"""Immutable in-memory data model for caption corpora, labels, and predictions.

Three JSONL line shapes and one nested JSON layout are supported; see the
``ingest_*`` functions. Image ids, scene names, and object names are
lower-cased at ingest; caption text is preserved verbatim (normalization
happens in :mod:`captionkit.tokens`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .exceptions import FormatError, ValidationError

CAPTION_FORMATS = ("rsicd_json", "jsonl")

_SPLIT_ALIASES = {
    "train": "train",
    "dev": "dev",
    "val": "dev",
    "valid": "dev",
    "validation": "dev",
    "test": "test",
}


class Split(str, Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"
    UNASSIGNED = "unassigned"


class CaptionSource(str, Enum):
    HUMAN = "human"
    GENERATED = "generated"
    AUGMENTED = "augmented"


@dataclass(frozen=True)
class Caption:
    """One annotation string attached to an image."""

    image_id: str
    raw: str
    source: CaptionSource = CaptionSource.HUMAN

    def __post_init__(self) -> None:
        if not self.image_id:
            raise ValidationError("caption with empty image_id")
        if not self.raw.strip():
            raise ValidationError(f"empty caption for image {self.image_id!r}")


@dataclass(frozen=True)
class ImageRecord:
    """An image with its ordered caption list and optional scene class."""

    image_id: str
    captions: tuple[Caption, ...]
    split: Split = Split.UNASSIGNED
    scene_class: str | None = None

    def __post_init__(self) -> None:
        if not self.image_id:
            raise ValidationError("record with empty image_id")
        if not self.captions:
            raise ValidationError(f"record {self.image_id!r} has no captions")
        for cap in self.captions:
            if cap.image_id != self.image_id:
                raise ValidationError(
                    f"caption for {cap.image_id!r} attached to record {self.image_id!r}"
                )


@dataclass(frozen=True)
class Corpus:
    """Ordered, immutable collection of image records.

    Augmentation and correction never mutate a corpus; they build a new one
    with a derived provenance label.
    """

    records: tuple[ImageRecord, ...]
    provenance: str = "unlabeled"

    def __len__(self) -> int:
        return len(self.records)

    def captions(self) -> Iterator[Caption]:
        for record in self.records:
            yield from record.captions

    def caption_count(self) -> int:
        return sum(len(record.captions) for record in self.records)

    def by_id(self) -> dict[str, ImageRecord]:
        return {record.image_id: record for record in self.records}

    def with_provenance(self, provenance: str) -> "Corpus":
        return replace(self, provenance=provenance)


@dataclass(frozen=True)
class LabelRecord:
    """Ground-truth scene class plus detected object names for one image."""

    image_id: str
    scene: str
    objects: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not self.scene:
            raise ValidationError(f"label for {self.image_id!r} has empty scene")


@dataclass(frozen=True)
class PredictionSet:
    """Generated caption per image id, e.g. the output of a deployed captioner."""

    entries: Mapping[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Finding:
    """One advisory validation finding; never raised."""

    code: str
    message: str
    image_id: str | None = None

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "image_id": self.image_id}


def _map_split(value: object) -> Split:
    if not isinstance(value, str):
        return Split.UNASSIGNED
    return Split(_SPLIT_ALIASES.get(value.strip().lower(), "unassigned"))


def _jsonl_objects(path: Path) -> Iterator[tuple[int, dict]]:
    """Yield (line_number, object) for each non-blank line; blank lines skipped."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(
                    f"{path}: line {lineno}, column {exc.colno}: {exc.msg}"
                ) from exc
            if not isinstance(obj, dict):
                raise FormatError(f"{path}: line {lineno}: expected a JSON object")
            yield lineno, obj


def _require_str(obj: dict, key: str, where: str) -> str:
    value = obj.get(key)
    if not isinstance(value, str) or not value.strip():
        raise ValidationError(f"{where}: missing or empty {key!r} field")
    return value


def _record_from_jsonl(obj: dict, where: str, source: CaptionSource) -> ImageRecord:
    image_id = _require_str(obj, "image_id", where).strip().lower()
    raw_captions = obj.get("captions")
    if not isinstance(raw_captions, list) or not raw_captions:
        raise ValidationError(f"{where}: missing or empty 'captions' list")
    captions = []
    for text in raw_captions:
        if not isinstance(text, str) or not text.strip():
            raise ValidationError(f"{where}: empty caption for image {image_id!r}")
        captions.append(Caption(image_id, text, source))
    scene = obj.get("scene")
    scene_class = scene.strip().lower() if isinstance(scene, str) and scene.strip() else None
    return ImageRecord(
        image_id=image_id,
        captions=tuple(captions),
        split=_map_split(obj.get("split")),
        scene_class=scene_class,
    )


def _records_from_rsicd(path: Path, source: CaptionSource) -> list[ImageRecord]:
    with open(path, encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(
                f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    images = payload.get("images") if isinstance(payload, dict) else None
    if not isinstance(images, list):
        raise FormatError(f"{path}: expected a top-level object with an 'images' list")
    records = []
    for i, entry in enumerate(images):
        where = f"{path}: images[{i}]"
        if not isinstance(entry, dict):
            raise FormatError(f"{where}: expected an object")
        image_id = _require_str(entry, "filename", where).strip().lower()
        sentences = entry.get("sentences")
        if not isinstance(sentences, list) or not sentences:
            raise ValidationError(f"{where}: missing or empty 'sentences' list")
        captions = []
        for sent in sentences:
            if not isinstance(sent, dict) or not isinstance(sent.get("raw"), str):
                raise FormatError(f"{where}: each sentence needs a string 'raw' field")
            if not sent["raw"].strip():
                raise ValidationError(f"{where}: empty caption for image {image_id!r}")
            captions.append(Caption(image_id, sent["raw"], source))
        scene = entry.get("class")
        scene_class = scene.strip().lower() if isinstance(scene, str) and scene.strip() else None
        records.append(
            ImageRecord(
                image_id=image_id,
                captions=tuple(captions),
                split=_map_split(entry.get("split")),
                scene_class=scene_class,
            )
        )
    return records


def ingest_captions(
    path: str | Path,
    format: str = "jsonl",
    provenance: str | None = None,
    source: CaptionSource = CaptionSource.HUMAN,
) -> Corpus:
    """Load a caption corpus from ``rsicd_json`` or ``jsonl`` (see README schemas).

    Records keep file order; ids are lower-cased and must be unique; every
    caption must be non-empty. Unknown fields are ignored.
    """
    path = Path(path)
    if format not in CAPTION_FORMATS:
        raise FormatError(f"unknown captions format {format!r}; expected one of {CAPTION_FORMATS}")
    if format == "rsicd_json":
        records = _records_from_rsicd(path, source)
    else:
        records = [
            _record_from_jsonl(obj, f"{path}: line {lineno}", source)
            for lineno, obj in _jsonl_objects(path)
        ]
    seen: set[str] = set()
    for record in records:
        if record.image_id in seen:
            raise ValidationError(f"{path}: duplicate image_id {record.image_id!r}")
        seen.add(record.image_id)
    return Corpus(tuple(records), provenance if provenance is not None else path.stem)


def captions_to_jsonl(corpus: Corpus) -> str:
    """Render the flat captions-JSONL serialization; round-trips through ingest."""
    lines = []
    for record in corpus.records:
        obj: dict = {
            "image_id": record.image_id,
            "split": record.split.value,
            "captions": [cap.raw for cap in record.captions],
        }
        if record.scene_class is not None:
            obj["scene"] = record.scene_class
        lines.append(json.dumps(obj, ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


def write_captions_jsonl(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(captions_to_jsonl(corpus))


def ingest_labels(path: str | Path) -> tuple[LabelRecord, ...]:
    """Load detection labels (JSONL: image_id, scene, objects)."""
    path = Path(path)
    labels = []
    seen: set[str] = set()
    for lineno, obj in _jsonl_objects(path):
        where = f"{path}: line {lineno}"
        image_id = _require_str(obj, "image_id", where).strip().lower()
        scene = _require_str(obj, "scene", where).strip().lower()
        raw_objects = obj.get("objects", [])
        if not isinstance(raw_objects, list):
            raise FormatError(f"{where}: 'objects' must be a list")
        objects = frozenset(
            name.strip().lower() for name in raw_objects if isinstance(name, str) and name.strip()
        )
        if image_id in seen:
            raise ValidationError(f"{where}: duplicate image_id {image_id!r}")
        seen.add(image_id)
        labels.append(LabelRecord(image_id, scene, objects))
    return tuple(labels)


def ingest_predictions(path: str | Path) -> PredictionSet:
    """Load generated captions (JSONL: image_id, caption). Empty file is valid."""
    path = Path(path)
    entries: dict[str, str] = {}
    for lineno, obj in _jsonl_objects(path):
        where = f"{path}: line {lineno}"
        image_id = _require_str(obj, "image_id", where).strip().lower()
        caption = _require_str(obj, "caption", where)
        if image_id in entries:
            raise ValidationError(f"{where}: duplicate image_id {image_id!r}")
        entries[image_id] = caption
    return PredictionSet(entries)


def validate(corpus: Corpus, strict_rsicd: bool = False) -> list[Finding]:
    """Report-only corpus checks.

    Always flags duplicate image ids and empty captions; with ``strict_rsicd``
    additionally flags records that do not carry exactly five captions.
    """
    findings = []
    seen: set[str] = set()
    for record in corpus.records:
        if record.image_id in seen:
            findings.append(
                Finding("duplicate-image-id", f"duplicate image_id {record.image_id!r}", record.image_id)
            )
        seen.add(record.image_id)
        for cap in record.captions:
            if not cap.raw.strip():
                findings.append(
                    Finding("empty-caption", f"empty caption on {record.image_id!r}", record.image_id)
                )
        if strict_rsicd and len(record.captions) != 5:
            findings.append(
                Finding(
                    "caption-count",
                    f"record {record.image_id!r} has {len(record.captions)} captions, expected 5",
                    record.image_id,
                )
            )
    return findings


def corpus_from_documents(documents: Mapping[str, Iterable[str]], provenance: str) -> Corpus:
    """Build a corpus from an id -> captions mapping (test/convenience helper)."""
    records = []
    for image_id, texts in documents.items():
        image_id = image_id.lower()
        captions = tuple(Caption(image_id, text) for text in texts)
        records.append(ImageRecord(image_id, captions))
    return Corpus(tuple(records), provenance)
