import json
from pathlib import Path

import pytest

from captionkit.corpus import corpus_from_documents

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def small_corpus():
    return corpus_from_documents(
        {
            "a1": [
                "Many planes are parked in an airport.",
                "Several buildings stand beside the runway.",
            ],
            "b2": [
                "White waves crash on a yellow beach.",
                "The sea meets the sand.",
            ],
        },
        provenance="fixture",
    )


def write_jsonl(path: Path, rows) -> Path:
    path.write_text("".join(json.dumps(row) + "\n" for row in rows), encoding="utf-8")
    return path
