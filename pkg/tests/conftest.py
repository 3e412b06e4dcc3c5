import os
import sys

import pytest

project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from core.config import QA_HEURISTICS_PATH, STAGE_DIRECTIONS_PATH
from core.fixtures import FixtureSpec, fixture_partyfacts, fixture_registry, generate_fixture
from core.pipeline import PipelineContext
from core.question_time import load_qa_heuristics
from core.records import SchemaEra
from core.segmenter import load_stage_directions

ERAS = list(SchemaEra)


@pytest.fixture(autouse=True)
def isolated_dirs(tmp_path, monkeypatch):
    """No test touches the real cache or output directory."""
    monkeypatch.setenv("HANSARD_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setenv("HANSARD_OUTPUT_DIR", str(tmp_path / "out"))


@pytest.fixture(scope="session")
def stage_lexicon():
    return load_stage_directions(STAGE_DIRECTIONS_PATH)


@pytest.fixture(scope="session")
def qa_heuristics():
    return tuple(load_qa_heuristics(QA_HEURISTICS_PATH))


@pytest.fixture(scope="session")
def context(stage_lexicon, qa_heuristics):
    return PipelineContext(fixture_registry(), fixture_partyfacts(), stage_lexicon, qa_heuristics)


def make_fixture(era: SchemaEra, seed: int):
    _, day = generate_fixture(FixtureSpec(era, seed))
    return day


@pytest.fixture
def modern_day():
    return make_fixture(SchemaEra.MODERN_FEDCHAMB, 3)


@pytest.fixture
def legacy_day():
    return make_fixture(SchemaEra.LEGACY_INLINE, 3)
