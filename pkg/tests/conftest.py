from pathlib import Path

import pytest

GAMES_DIR = Path(__file__).resolve().parent.parent / "games"


@pytest.fixture
def games_dir() -> Path:
    return GAMES_DIR
