import pytest

from captionkit.corpus import (
    Caption,
    CaptionSource,
    Corpus,
    ImageRecord,
    Split,
    corpus_from_documents,
    ingest_captions,
    ingest_labels,
    ingest_predictions,
    validate,
    write_captions_jsonl,
)
from captionkit.exceptions import FormatError, ValidationError
from conftest import write_jsonl


def test_jsonl_minimal(tmp_path):
    path = write_jsonl(tmp_path / "one.jsonl", [{"image_id": "i1", "captions": ["a beach"]}])
    corpus = ingest_captions(path, "jsonl")
    assert len(corpus) == 1
    assert corpus.records[0].captions[0].raw == "a beach"
    assert corpus.records[0].split is Split.UNASSIGNED


def test_fixture_hand_count(data_dir):
    corpus = ingest_captions(data_dir / "captions_3x5.jsonl", "jsonl")
    assert len(corpus) == 3
    assert corpus.caption_count() == 15


def test_rsicd_json(data_dir):
    corpus = ingest_captions(data_dir / "rsicd_small.json", "rsicd_json")
    assert [r.image_id for r in corpus.records] == ["airport_1.jpg", "beach_2.jpg", "river_3.jpg"]
    assert corpus.records[0].split is Split.TRAIN
    assert corpus.records[0].scene_class == "airport"
    assert corpus.records[1].split is Split.DEV  # "val" maps to dev
    assert corpus.records[2].split is Split.UNASSIGNED  # unknown split value
    assert corpus.records[2].scene_class is None
    assert corpus.caption_count() == 15
    # caption order preserved from file
    assert corpus.records[0].captions[0].raw == "Many planes are parked in an airport."


def test_rsicd_equivalent_to_jsonl_fixture(data_dir):
    nested = ingest_captions(data_dir / "rsicd_small.json", "rsicd_json")
    flat = ingest_captions(data_dir / "captions_3x5.jsonl", "jsonl")
    assert [r.image_id for r in nested.records] == [r.image_id for r in flat.records]
    assert [c.raw for c in nested.captions()] == [c.raw for c in flat.captions()]


def test_unknown_format(tmp_path):
    path = write_jsonl(tmp_path / "x.jsonl", [{"image_id": "i1", "captions": ["a"]}])
    with pytest.raises(FormatError):
        ingest_captions(path, "csv")


def test_parse_failure_names_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"image_id": "i1", "captions": ["a beach"]}\n{broken\n', encoding="utf-8")
    with pytest.raises(FormatError, match="line 2"):
        ingest_captions(path, "jsonl")


def test_rsicd_parse_failure_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"images": [,]}', encoding="utf-8")
    with pytest.raises(FormatError, match="column"):
        ingest_captions(path, "rsicd_json")


def test_duplicate_image_id_named(tmp_path):
    rows = [
        {"image_id": "dup1", "captions": ["a"]},
        {"image_id": "DUP1", "captions": ["b"]},  # ids are lower-cased first
    ]
    path = write_jsonl(tmp_path / "dup.jsonl", rows)
    with pytest.raises(ValidationError, match="dup1"):
        ingest_captions(path, "jsonl")


def test_empty_caption_rejected(tmp_path):
    path = write_jsonl(tmp_path / "e.jsonl", [{"image_id": "i1", "captions": ["a", "  "]}])
    with pytest.raises(ValidationError):
        ingest_captions(path, "jsonl")


def test_roundtrip_jsonl(tmp_path, data_dir):
    corpus = ingest_captions(data_dir / "captions_3x5.jsonl", "jsonl")
    out = tmp_path / "again.jsonl"
    write_captions_jsonl(corpus, out)
    again = ingest_captions(out, "jsonl", provenance=corpus.provenance)
    assert again == corpus


def test_roundtrip_from_rsicd(tmp_path, data_dir):
    corpus = ingest_captions(data_dir / "rsicd_small.json", "rsicd_json")
    out = tmp_path / "flat.jsonl"
    write_captions_jsonl(corpus, out)
    again = ingest_captions(out, "jsonl")
    assert again.records == corpus.records


def test_ingest_deterministic(data_dir):
    a = ingest_captions(data_dir / "captions_3x5.jsonl", "jsonl")
    b = ingest_captions(data_dir / "captions_3x5.jsonl", "jsonl")
    assert a == b


def test_total_caption_count_is_sum(data_dir):
    corpus = ingest_captions(data_dir / "captions_3x5.jsonl", "jsonl")
    assert corpus.caption_count() == sum(len(r.captions) for r in corpus.records)


def _record(image_id, n_captions):
    captions = tuple(Caption(image_id, f"caption {i}") for i in range(n_captions))
    return ImageRecord(image_id, captions)


def test_validate_strict_five_ok():
    corpus = Corpus((_record("i1", 5),), "t")
    assert validate(corpus, strict_rsicd=True) == []


def test_validate_strict_flags_four():
    corpus = Corpus((_record("i1", 4),), "t")
    findings = validate(corpus, strict_rsicd=True)
    assert len(findings) == 1
    assert findings[0].code == "caption-count"
    assert findings[0].image_id == "i1"


def test_validate_lenient_ignores_count():
    corpus = Corpus((_record("i1", 4),), "t")
    assert validate(corpus, strict_rsicd=False) == []


def test_validate_flags_duplicate_ids():
    corpus = Corpus((_record("i1", 1), _record("i1", 1)), "t")
    findings = validate(corpus)
    assert [f.code for f in findings] == ["duplicate-image-id"]


def test_record_invariants():
    with pytest.raises(ValidationError):
        ImageRecord("i1", ())
    with pytest.raises(ValidationError):
        Caption("i1", "   ")
    with pytest.raises(ValidationError):
        ImageRecord("i1", (Caption("other", "text"),))


def test_ingest_labels(data_dir):
    labels = ingest_labels(data_dir / "labels_8scenes.jsonl")
    assert len(labels) == 8
    assert sorted({l.scene for l in labels}) == [
        "airport", "beach", "desert", "forest", "port", "railway", "river", "stadium",
    ]
    first = labels[0]
    assert first.image_id == "n1"
    assert first.objects == frozenset({"plane", "building"})  # lower-cased
    assert labels[2].objects == frozenset()  # scene-only record


def test_labels_single_line(tmp_path):
    path = write_jsonl(
        tmp_path / "l.jsonl",
        [{"image_id": "a1", "scene": "airport", "objects": ["plane", "building"]}],
    )
    (label,) = ingest_labels(path)
    assert label.scene == "airport"
    assert label.objects == {"plane", "building"}


def test_labels_missing_scene(tmp_path):
    path = write_jsonl(tmp_path / "l.jsonl", [{"image_id": "a1", "objects": []}])
    with pytest.raises(ValidationError, match="scene"):
        ingest_labels(path)


def test_labels_duplicate_id(tmp_path):
    rows = [{"image_id": "a1", "scene": "beach"}, {"image_id": "a1", "scene": "river"}]
    path = write_jsonl(tmp_path / "l.jsonl", rows)
    with pytest.raises(ValidationError, match="a1"):
        ingest_labels(path)


def test_ingest_predictions_single(tmp_path):
    path = write_jsonl(
        tmp_path / "p.jsonl",
        [{"image_id": "x", "caption": "many planes are parked in an airport"}],
    )
    preds = ingest_predictions(path)
    assert len(preds) == 1
    assert preds.entries["x"] == "many planes are parked in an airport"


def test_ingest_predictions_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    assert len(ingest_predictions(path)) == 0


def test_ingest_predictions_three(data_dir):
    preds = ingest_predictions(data_dir / "predictions_3.jsonl")
    assert sorted(preds.entries) == ["airport_1.jpg", "beach_2.jpg", "river_3.jpg"]


def test_predictions_duplicate_id(tmp_path):
    rows = [{"image_id": "x", "caption": "a"}, {"image_id": "x", "caption": "b"}]
    path = write_jsonl(tmp_path / "p.jsonl", rows)
    with pytest.raises(ValidationError, match="x"):
        ingest_predictions(path)


def test_predictions_empty_caption(tmp_path):
    path = write_jsonl(tmp_path / "p.jsonl", [{"image_id": "x", "caption": ""}])
    with pytest.raises(ValidationError):
        ingest_predictions(path)


def test_corpus_is_immutable(small_corpus):
    with pytest.raises(AttributeError):
        small_corpus.provenance = "changed"
    with pytest.raises(AttributeError):
        small_corpus.records[0].captions[0].raw = "changed"


def test_caption_source_default():
    assert Caption("i", "text").source is CaptionSource.HUMAN


def test_corpus_from_documents_lowercases_ids():
    corpus = corpus_from_documents({"UPPER": ["a beach"]}, "t")
    assert corpus.records[0].image_id == "upper"


def test_unknown_fields_ignored(tmp_path):
    rows = [{"image_id": "i1", "captions": ["a"], "extra": {"nested": True}}]
    path = write_jsonl(tmp_path / "x.jsonl", rows)
    assert len(ingest_captions(path, "jsonl")) == 1
