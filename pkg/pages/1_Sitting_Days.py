import streamlit as st
from sqlalchemy.orm import Session
import pandas as pd
import sys
import os

project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from core import crud
from core.config import output_dir
from core.crud import get_db
from core.emitter import daily_base_path, drop_stage_directions, read_table
from core.models import DayStatusEnum
st.set_page_config(layout="wide")
st.title("📜 Sitting Days")

out_dir = st.sidebar.text_input("Output directory", value=output_dir())
if not os.path.isdir(out_dir):
    st.warning(f"{out_dir} does not exist yet. Run `hansard-etl parse` first.")
    st.stop()

db_session_generator = get_db(out_dir)
db: Session = next(db_session_generator)

try:
    runs = crud.get_all_runs(db)
    if not runs:
        st.info("The manifest is empty.")
        st.stop()

    manifest = pd.DataFrame([crud.run_to_dict(r) for r in runs])
    status_filter = st.sidebar.multiselect(
        "Status", options=[s.value for s in DayStatusEnum], default=[s.value for s in DayStatusEnum]
    )
    shown = manifest[manifest["status"].isin(status_filter)]
    st.header("Manifest")
    st.dataframe(shown.drop(columns=["outputs"]), use_container_width=True, hide_index=True)

    failed = crud.get_runs_by_status(db, DayStatusEnum.FAILED)
    if failed:
        with st.expander(f"⚠️ {len(failed)} failed day(s)"):
            for run in failed:
                st.error(f"{run.source}: {run.error}")

    ok_days = [r.sitting_date for r in crud.get_runs_by_status(db, DayStatusEnum.OK) if r.sitting_date]
    if not ok_days:
        st.stop()

    st.header("Statements")
    day = st.selectbox("Sitting day", options=ok_days, index=len(ok_days) - 1)
    base = daily_base_path(out_dir, day)
    path = next((f"{base}.{ext}" for ext in ("parquet", "csv") if os.path.isfile(f"{base}.{ext}")), None)
    if path is None:
        st.warning(f"No daily table for {day} in {out_dir}.")
        st.stop()
    table = read_table(path)

    col1, col2, col3 = st.columns(3)
    with col1:
        hide_stage = st.checkbox("Hide stage directions", value=False)
    with col2:
        venue = st.radio("Venue", options=["Both", "Chamber", "Federation Chamber"], horizontal=True)
    with col3:
        search = st.text_input("Search in body")
    if hide_stage:
        table = drop_stage_directions(table)
    if venue != "Both":
        table = table[table["fedchamb_flag"] == int(venue == "Federation Chamber")]
    if search:
        table = table[table["body"].str.contains(search, case=False, na=False, regex=False)]
    st.caption(f"{len(table)} row(s)")
    st.dataframe(table, use_container_width=True, hide_index=True)
finally:
    db.close()
