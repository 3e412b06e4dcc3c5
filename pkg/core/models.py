import os
import enum
from sqlalchemy import (
    create_engine, Column, Integer, String, Text, Date, DateTime, Enum, UniqueConstraint
)
from sqlalchemy.orm import sessionmaker, declarative_base

from .config import MANIFEST_DB_FILENAME

Base = declarative_base()


class DayStatusEnum(enum.Enum):
    OK = "ok"
    FAILED = "failed"
    SKIPPED = "skipped"


class SittingDayRun(Base):
    __tablename__ = "SittingDayRuns"

    run_id = Column(Integer, primary_key=True)
    sitting_date = Column(Date, nullable=True)
    header_date = Column(Date, nullable=True)
    source = Column(String, nullable=False)
    status = Column(Enum(DayStatusEnum), nullable=False)
    era = Column(String)
    row_count = Column(Integer, nullable=False, default=0)
    division_count = Column(Integer, nullable=False, default=0)
    issue_count = Column(Integer, nullable=False, default=0)
    issues = Column(Text)
    error = Column(Text)
    outputs = Column(Text)
    finished_at = Column(DateTime, nullable=True)

    __table_args__ = (
        UniqueConstraint('source', name='uq_run_source'),
        {'sqlite_autoincrement': True}
    )


def manifest_url(out_dir: str) -> str:
    return f"sqlite:///{os.path.join(os.path.abspath(out_dir), MANIFEST_DB_FILENAME)}"


def make_session_factory(out_dir: str) -> sessionmaker:
    os.makedirs(out_dir, exist_ok=True)
    engine = create_engine(manifest_url(out_dir), echo=False)
    Base.metadata.create_all(bind=engine)
    return sessionmaker(autocommit=False, autoflush=False, bind=engine)
