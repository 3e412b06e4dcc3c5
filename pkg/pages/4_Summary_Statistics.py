import streamlit as st
import sys
import os

project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from core.analysis import compute_summary_stats, speaker_speech_counts
from core.config import output_dir
from core.emitter import read_table
from core.ingest import load_partyfacts
st.set_page_config(layout="wide")
st.title("📊 Summary Statistics")

out_dir = st.sidebar.text_input("Output directory", value=output_dir())
partyfacts_path = st.sidebar.text_input("PartyFacts file (optional)", value="")

corpus_path = next(
    (os.path.join(out_dir, f"hansard_corpus.{ext}") for ext in ("parquet", "csv")
     if os.path.isfile(os.path.join(out_dir, f"hansard_corpus.{ext}"))),
    None,
)
if corpus_path is None:
    st.info("No corpus yet. Run `hansard-etl corpus` first.")
    st.stop()

corpus = read_table(corpus_path)
partyfacts = load_partyfacts(partyfacts_path) if partyfacts_path and os.path.isfile(partyfacts_path) else None
stats = compute_summary_stats(corpus, partyfacts)

st.caption(f"{corpus['date'].nunique()} sitting day(s), {len(corpus)} rows")

col1, col2 = st.columns(2)
with col1:
    st.header("Unique speakers per day")
    if not stats.daily_unique_names.empty:
        st.line_chart(stats.daily_unique_names.pivot(index="date", columns="venue", values="unique_names"))
        for venue, mean in sorted(stats.mean_unique_names().items()):
            st.write(f"{venue}: {mean:.1f} on average")
with col2:
    st.header("Speeches per day")
    if not stats.daily_speeches.empty:
        st.line_chart(stats.daily_speeches.pivot(index="date", columns="venue", values="speeches"))
        for venue, mean in sorted(stats.mean_daily_speeches().items()):
            st.write(f"{venue}: {mean:.1f} on average")

st.header("Speeches per party")
if not stats.party_speeches.empty:
    st.bar_chart(stats.party_speeches.set_index("party")["speeches"])
    st.dataframe(stats.party_speeches, use_container_width=True, hide_index=True)

with st.expander("Most frequent speakers"):
    st.dataframe(speaker_speech_counts(corpus).head(30), use_container_width=True, hide_index=True)
