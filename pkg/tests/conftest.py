import os
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = Path(os.environ.get("DSTEINER_DATA", REPO_ROOT / "data"))

FETCH_HINT = (
    "benchmark corpus not present under {path}; run "
    "`python3 scripts/fetch_corpus.py` (needs network) to enable this test"
)


def corpus_file(relpath: str) -> Path:
    """Path to a corpus file, skipping the test if it is not fetched."""
    path = DATA_DIR / relpath
    if not path.exists():
        pytest.skip(FETCH_HINT.format(path=path))
    return path


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR
