import os
import datetime
from dataclasses import dataclass, field
from typing import Optional, Tuple

_current_dir = os.path.dirname(os.path.abspath(__file__))
_project_root = os.path.dirname(_current_dir)

DATA_DIR = os.path.join(_current_dir, "data")
STAGE_DIRECTIONS_PATH = os.path.join(DATA_DIR, "stage_directions.txt")
QA_HEURISTICS_PATH = os.path.join(DATA_DIR, "qa_heuristics.txt")

DEFAULT_CACHE_DIR = os.path.join(_project_root, ".hansard_cache")
DEFAULT_OUTPUT_DIR = os.path.join(_project_root, "out")

# Not verified against the live site; override with HANSARD_URL_TEMPLATE.
DEFAULT_URL_TEMPLATE = "https://parlinfo.aph.gov.au/parlInfo/download/chamber/hansardr/{date}/toc_unixml/{date}.xml"

COVERAGE_START = datetime.date(1998, 3, 2)
COVERAGE_END = datetime.date(2022, 9, 8)

DEFAULT_FORMATS = ("csv", "parquet")
SUPPORTED_FORMATS = ("csv", "parquet")

MANIFEST_DB_FILENAME = "manifest.db"
MANIFEST_JSON_FILENAME = "manifest.json"


def cache_dir() -> str:
    return os.environ.get("HANSARD_CACHE_DIR") or DEFAULT_CACHE_DIR


def url_template() -> str:
    return os.environ.get("HANSARD_URL_TEMPLATE") or DEFAULT_URL_TEMPLATE


def output_dir() -> str:
    return os.environ.get("HANSARD_OUTPUT_DIR") or DEFAULT_OUTPUT_DIR


@dataclass(frozen=True)
class RunConfig:
    out_dir: str
    dates: Tuple[datetime.date, ...] = ()
    files: Tuple[str, ...] = ()
    formats: Tuple[str, ...] = DEFAULT_FORMATS
    politicians_path: Optional[str] = None
    partyfacts_path: Optional[str] = None
    stage_directions_path: str = STAGE_DIRECTIONS_PATH
    qa_heuristics_path: str = QA_HEURISTICS_PATH
    cache_dir: str = field(default_factory=cache_dir)
    jobs: int = 1
    force: bool = False
    no_timestamp: bool = False
    log_level: str = "INFO"
    lookup_tables: bool = False
