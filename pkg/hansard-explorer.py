import streamlit as st

st.set_page_config(
    page_title="Hansard Explorer",
    layout="wide"
)

st.title("Hansard Explorer")
st.sidebar.success("Pick a page to start.")

st.markdown(
    """
    A read-only view over the output directory of a `hansard-etl` run.
    Set `HANSARD_OUTPUT_DIR` or type the directory into the sidebar of each page.

    - **Sitting Days**: the run manifest and the per-statement table of one day.
    - **Divisions**: recorded votes with their AYES, NOES and PAIRS.
    - **Validation**: the eight consistency tests over the parsed days.
    - **Summary Statistics**: speeches and unique speakers per day, speeches per party.
    """
)
