from sqlalchemy.orm import Session
from typing import List, Optional, Sequence
import datetime
import json
import os
from .models import SittingDayRun, DayStatusEnum, make_session_factory

def get_db(out_dir: str):
    db = make_session_factory(out_dir)()
    try:
        yield db
    finally:
        db.close()

def get_run_by_source(db: Session, source: str) -> Optional[SittingDayRun]:
    return db.query(SittingDayRun).filter(SittingDayRun.source == source).first()

def get_all_runs(db: Session) -> List[SittingDayRun]:
    return db.query(SittingDayRun).order_by(SittingDayRun.sitting_date, SittingDayRun.source).all()

def get_runs_by_status(db: Session, status: DayStatusEnum) -> List[SittingDayRun]:
    return db.query(SittingDayRun).filter(SittingDayRun.status == status).order_by(SittingDayRun.sitting_date).all()

def is_completed(db: Session, source: str) -> bool:
    run = get_run_by_source(db, source)
    if run is None or run.status != DayStatusEnum.OK:
        return False
    outputs = json.loads(run.outputs or "[]")
    return all(os.path.isfile(p) for p in outputs)

def record_day(db: Session, source: str, status: DayStatusEnum, sitting_date: Optional[datetime.date] = None,
               header_date: Optional[datetime.date] = None,
               era: Optional[str] = None, row_count: int = 0, division_count: int = 0,
               issues: Sequence[str] = (), error: Optional[str] = None, outputs: Sequence[str] = (),
               finished_at: Optional[datetime.datetime] = None) -> SittingDayRun:
    run = get_run_by_source(db, source)
    if run is None:
        run = SittingDayRun(source=source, status=status)
        db.add(run)
    run.sitting_date = sitting_date
    run.header_date = header_date
    run.status = status
    run.era = era
    run.row_count = row_count
    run.division_count = division_count
    run.issue_count = len(issues)
    run.issues = json.dumps(list(issues)) if issues else None
    run.error = error
    run.outputs = json.dumps(list(outputs))
    run.finished_at = finished_at
    db.commit()
    db.refresh(run)
    return run

def run_to_dict(run: SittingDayRun, include_timestamp: bool = True) -> dict:
    entry = {
        "source": run.source,
        "date": run.sitting_date.isoformat() if run.sitting_date else None,
        "header_date": run.header_date.isoformat() if run.header_date else None,
        "status": run.status.value,
        "era": run.era,
        "rows": run.row_count,
        "divisions": run.division_count,
        "issues": json.loads(run.issues) if run.issues else [],
        "error": run.error,
        "outputs": [os.path.basename(p) for p in json.loads(run.outputs or "[]")],
    }
    if include_timestamp:
        entry["finished_at"] = run.finished_at.isoformat() if run.finished_at else None
    return entry

def export_manifest_json(db: Session, path: str, include_timestamp: bool = True) -> str:
    entries = [run_to_dict(r, include_timestamp) for r in get_all_runs(db)]
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump({"days": entries}, f, indent=2, sort_keys=True)
        f.write("\n")
    return path

def get_header_dates(db: Session) -> dict:
    return {r.sitting_date: r.header_date for r in get_all_runs(db) if r.sitting_date is not None}
