"""The relevance feedback loop, manually and with an oracle judge.

First a hand-driven iteration: judge a few results, apply feedback, watch
the query vector and the ranking move. Then a full three-iteration session
judged automatically against ground-truth qrels, with the per-iteration
precision/recall curves.

Run from the repository root:  python demos/03_relevance_feedback.py
"""

from pathlib import Path

from cbvr import (
    Judgment,
    Label,
    apply_feedback,
    build_weight_matrix,
    confirm,
    ingest_corpus,
    initial_state,
    match_concepts,
    normalize,
    rank,
)
from cbvr.evaluation import load_qrels, precision_at, run_feedback_session

CORPUS = Path(__file__).parent / "corpus"

index, lexicon, _ = ingest_corpus(
    (CORPUS / "concepts.xml").read_bytes(),
    (CORPUS / "contexts.xml").read_bytes(),
    (CORPUS / "lexicon.tsv").read_bytes(),
)
matrix = build_weight_matrix(index)


def show(title, state):
    weights = ", ".join(
        f"{index.concepts[cid].name}={w:.3f}" for cid, w in sorted(state.current.weights.items())
    )
    print(f"\n{title}: iteration={state.iteration}  weights: {weights}")
    for result in rank(state.current, matrix, limit=5):
        print(f"  #{result.rank} {result.video_id}  {result.similarity:.4f}")


# --- one manual iteration ---------------------------------------------------
query = normalize("news")
candidates = match_concepts(query, lexicon, index)
state = initial_state(confirm(candidates, [c.concept_id for c in candidates]))
show("initial query", state)

judgments = [
    Judgment("shot102", Label.RELEVANT),
    Judgment("shot103", Label.RELEVANT),
    Judgment("shot111", Label.IRRELEVANT),  # crowd video that sneaked in
]
state = apply_feedback(state, judgments, matrix)
show("after judging 2 relevant / 1 irrelevant", state)

# --- oracle-judged session ----------------------------------------------
qrels = load_qrels((CORPUS / "qrels.tsv").read_bytes())["q_news"]
outcomes = run_feedback_session(
    state.p_initial, matrix, qrels, iterations=3, judge_depth=6
)
print("\noracle-judged session (judge depth 6):")
for outcome in outcomes:
    k = min(4, len(outcome.ranking))
    p_at_k = precision_at(outcome.ranking, qrels, k)
    print(f"  Q{outcome.iteration}: top={list(outcome.ranking[:4])}  precision@{k}={p_at_k:.2f}")
    for point in outcome.curve:
        print(f"      cutoff={point.rank_cutoff:2d} recall={point.recall:.2f}"
              f" precision={point.precision:.2f}")
