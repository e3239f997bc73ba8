"""Reference-free caption evaluation against detection labels.

Cross-tabulates which scene keywords a generated caption mentions against the
image's ground-truth scene. Orientation is fixed: rows are the true scene,
columns the mentioned keyword's scene; one caption mentioning several scene
keywords increments several cells. Matching is exact lower-case token
equality (never substrings, so "port" cannot fire inside "airport"), with
optional trailing-'s' folding on by default.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import LabelRecord, PredictionSet
from .exceptions import ConfigurationError, FormatError
from .tokens import tokenize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConfusionReport:
    """Scene-mention matrix plus attribute co-occurrence counts."""

    scenes: tuple[str, ...]
    scene_matrix: Mapping[tuple[str, str], int]
    attribute_table: Mapping[tuple[str, str], int]
    per_scene_totals: Mapping[str, int]
    diagonal_accuracy: float
    attributes: tuple[str, ...] = ()
    missing_ids: tuple[str, ...] = ()

    def cell(self, true_scene: str, mentioned: str) -> int:
        return self.scene_matrix.get((true_scene, mentioned), 0)

    def to_dict(self) -> dict:
        return {
            "scenes": list(self.scenes),
            "matrix": {
                true: {col: self.cell(true, col) for col in self.scenes} for true in self.scenes
            },
            "attributes": {
                attr: {scene: self.attribute_table.get((attr, scene), 0) for scene in self.scenes}
                for attr in self.attributes
            },
            "per_scene_totals": dict(self.per_scene_totals),
            "diagonal_accuracy": self.diagonal_accuracy,
            "missing_ids": list(self.missing_ids),
        }


def _mention_set(caption: str, fold_plural_s: bool) -> frozenset[str]:
    toks = set(tokenize(caption).tokens)
    if fold_plural_s:
        toks |= {tok[:-1] for tok in toks if len(tok) > 1 and tok.endswith("s")}
    return frozenset(toks)


def _mentions(trigger: str, mention_set: frozenset[str], fold_plural_s: bool) -> bool:
    if trigger in mention_set:
        return True
    return fold_plural_s and len(trigger) > 1 and trigger.endswith("s") and trigger[:-1] in mention_set


def default_scene_keywords(labels: Sequence[LabelRecord]) -> dict[str, frozenset[str]]:
    """Each scene triggers on its own name; scenes in first-appearance order."""
    keywords: dict[str, frozenset[str]] = {}
    for label in labels:
        keywords.setdefault(label.scene, frozenset({label.scene}))
    return keywords


def load_scene_keywords(path: str | Path) -> dict[str, frozenset[str]]:
    """TSV ``scene<TAB>trigger1,trigger2,...``; file order defines scene order."""
    keywords: dict[str, frozenset[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}: line {lineno}: expected 'scene<TAB>trigger1,trigger2,...'")
            scene = parts[0].strip().lower()
            triggers = frozenset(t.strip().lower() for t in parts[1].split(",") if t.strip())
            if not scene or not triggers:
                raise FormatError(f"{path}: line {lineno}: empty scene or trigger list")
            keywords[scene] = triggers
    return keywords


def load_attributes(path: str | Path) -> tuple[str, ...]:
    """One attribute token per line."""
    attrs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            token = line.strip().lower()
            if token:
                attrs.append(token)
    return tuple(attrs)


def scene_matrix(
    predictions: PredictionSet,
    labels: Sequence[LabelRecord],
    scene_keywords: Mapping[str, frozenset[str]],
    fold_plural_s: bool = True,
) -> ConfusionReport:
    """Count, per true scene, how many captions mention each scene's triggers.

    Presence-based: one image increments a cell at most once. Labeled images
    without a prediction are reported on the result and skipped.
    """
    for label in labels:
        if label.scene not in scene_keywords:
            raise ConfigurationError(f"no keyword set configured for scene {label.scene!r}")
    scenes = tuple(scene_keywords)
    matrix = {(true, col): 0 for true in scenes for col in scenes}
    totals = {scene: 0 for scene in scenes}
    missing = []
    for label in labels:
        caption = predictions.entries.get(label.image_id)
        if caption is None:
            missing.append(label.image_id)
            continue
        mention_set = _mention_set(caption, fold_plural_s)
        totals[label.scene] += 1
        for col in scenes:
            if any(_mentions(t, mention_set, fold_plural_s) for t in scene_keywords[col]):
                matrix[(label.scene, col)] += 1
    if missing:
        logger.warning("%d labeled images have no prediction; skipped", len(missing))
    scored = sum(totals.values())
    diagonal = sum(matrix[(scene, scene)] for scene in scenes)
    return ConfusionReport(
        scenes=scenes,
        scene_matrix=matrix,
        attribute_table={},
        per_scene_totals=totals,
        diagonal_accuracy=diagonal / scored if scored else 0.0,
        missing_ids=tuple(missing),
    )


def attribute_table(
    predictions: PredictionSet,
    labels: Sequence[LabelRecord],
    attributes: Sequence[str],
    fold_plural_s: bool = True,
) -> dict[tuple[str, str], int]:
    """Images per true scene whose caption mentions each attribute token."""
    scenes = sorted({label.scene for label in labels})
    counts = {(attr, scene): 0 for attr in attributes for scene in scenes}
    for label in labels:
        caption = predictions.entries.get(label.image_id)
        if caption is None:
            continue
        mention_set = _mention_set(caption, fold_plural_s)
        for attr in attributes:
            if _mentions(attr, mention_set, fold_plural_s):
                counts[(attr, label.scene)] += 1
    return counts


def with_attributes(
    report: ConfusionReport,
    predictions: PredictionSet,
    labels: Sequence[LabelRecord],
    attributes: Sequence[str],
    fold_plural_s: bool = True,
) -> ConfusionReport:
    """Return a copy of ``report`` carrying the attribute co-occurrence table."""
    table = attribute_table(predictions, labels, attributes, fold_plural_s)
    narrowed = {
        (attr, scene): count for (attr, scene), count in table.items() if scene in report.scenes
    }
    return replace(report, attribute_table=narrowed, attributes=tuple(attributes))


def matrix_export(report: ConfusionReport, out_dir: str | Path) -> tuple[Path, Path]:
    """Write scene_matrix.csv and attribute_table.csv under ``out_dir``.

    Matrix rows are true scenes, columns mentioned-keyword scenes; the
    attribute file has attribute rows and scene columns.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    matrix_path = out_dir / "scene_matrix.csv"
    attrs_path = out_dir / "attribute_table.csv"
    with open(matrix_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["true_scene\\mentioned_keyword", *report.scenes])
        for true in report.scenes:
            writer.writerow([true, *(report.cell(true, col) for col in report.scenes)])
    with open(attrs_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["attribute\\true_scene", *report.scenes])
        for attr in report.attributes:
            writer.writerow(
                [attr, *(report.attribute_table.get((attr, scene), 0) for scene in report.scenes)]
            )
    return matrix_path, attrs_path
