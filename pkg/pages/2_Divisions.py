import streamlit as st
import pandas as pd
import sys
import os

project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from core.config import output_dir
from core.divisions import SIDES, read_divisions
st.set_page_config(layout="wide")
st.title("🗳️ Divisions")

out_dir = st.sidebar.text_input("Output directory", value=output_dir())
path = os.path.join(out_dir, "divisions.parquet")
if not os.path.isfile(path):
    st.info("No divisions table yet. Run `hansard-etl divisions` first.")
    st.stop()

divisions = read_divisions(path)
if divisions.empty:
    st.info("No divisions were recorded for the parsed days.")
    st.stop()

days = sorted(divisions["date"].dropna().unique())
day = st.selectbox("Sitting day", options=days, index=len(days) - 1)
day_divisions = divisions[divisions["date"] == day]
st.dataframe(
    day_divisions[["div_num", "time.stamp", "num.votes_AYES", "num.votes_NOES", "num.votes_PAIRS", "result"]],
    use_container_width=True, hide_index=True,
)

div_num = st.selectbox("Division", options=day_divisions["div_num"].tolist())
division = day_divisions[day_divisions["div_num"] == div_num].iloc[0]
st.write(f"Result: **{division['result']}**")
cols = st.columns(len(SIDES))
for col, side in zip(cols, SIDES):
    with col:
        names = division[f"names_{side}"]
        st.markdown(f"**{side}** ({len(names)})")
        st.dataframe(pd.DataFrame({"name": names}), use_container_width=True, hide_index=True)
