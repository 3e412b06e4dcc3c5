import streamlit as st
from sqlalchemy.orm import Session
import sys
import os

project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from core import crud
from core.config import output_dir
from core.crud import get_db
from core.emitter import build_corpus, find_daily_files
from core.errors import HansardError
from core.ingest import load_politicians
from core.validator import TEST_NAMES, run_validation, tables_from_corpus
st.set_page_config(layout="wide")
st.title("✅ Validation")

out_dir = st.sidebar.text_input("Output directory", value=output_dir())
politicians_path = st.sidebar.text_input("Politicians file", value=os.path.join(out_dir, "politicians.csv"))

paths = find_daily_files(out_dir, "parquet") or find_daily_files(out_dir, "csv")
if not paths:
    st.info(f"No daily tables in {out_dir}.")
    st.stop()

selected_tests = st.multiselect(
    "Tests", options=list(TEST_NAMES), default=list(TEST_NAMES),
    format_func=lambda t: f"{t}. {TEST_NAMES[t]}"
)

if st.button("Run validation", type="primary"):
    db_session_generator = get_db(out_dir)
    db: Session = next(db_session_generator)
    try:
        registry = load_politicians(politicians_path)
        tables = tables_from_corpus(build_corpus(paths))
        report = run_validation(tables, registry, crud.get_header_dates(db), selected_tests)
    except (HansardError, FileNotFoundError) as e:
        st.error(f"Validation could not run: {e}")
        st.stop()
    finally:
        db.close()

    st.session_state.validation_report = report

report = st.session_state.get("validation_report")
if report is not None:
    cols = st.columns(4)
    for i, (test_id, result) in enumerate(sorted(report.results.items())):
        with cols[i % 4]:
            st.metric(f"{test_id}. {result.name}", "PASS" if result.passed else "FAIL",
                      delta=None if result.passed else f"{len(result.findings)} finding(s)", delta_color="inverse")
    findings = report.to_frame()
    if findings.empty:
        st.success("Every selected test passed.")
    else:
        st.dataframe(findings, use_container_width=True, hide_index=True)
