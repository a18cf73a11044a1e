"""Multilingual text search: English and Arabic queries over one index.

Both languages map into the same concept space through the lexicon, so an
Arabic query and its English counterpart retrieve the same videos.

Run from the repository root:  python demos/02_multilingual_search.py
"""

from pathlib import Path

from cbvr import (
    build_weight_matrix,
    confirm,
    explain,
    ingest_corpus,
    match_concepts,
    normalize,
    rank,
)

CORPUS = Path(__file__).parent / "corpus"

index, lexicon, _ = ingest_corpus(
    (CORPUS / "concepts.xml").read_bytes(),
    (CORPUS / "contexts.xml").read_bytes(),
    (CORPUS / "lexicon.tsv").read_bytes(),
)
matrix = build_weight_matrix(index)

for text in ("news", "أخبار", "dog كلب"):
    query = normalize(text)
    print(f"\nquery {text!r}  [{query.language.value}] tokens={list(query.tokens)}")

    candidates = match_concepts(query, lexicon, index)
    for c in candidates:
        print(f"  candidate {c.name:14s} score={c.score:.3f}"
              f" matched={list(c.matched_terms)} boost={c.context_boost}")

    # Non-interactive stand-in for the user's choice: keep the top three.
    vector = confirm(candidates, [c.concept_id for c in candidates[:3]])
    print(f"  confirmed weights: "
          + ", ".join(f"{index.concepts[cid].name}={w:.3f}" for cid, w in vector.weights.items()))

    for result in rank(vector, matrix, limit=4):
        print(f"  #{result.rank} {result.video_id}  similarity={result.similarity:.4f}")
        for cid, qw, vw, product in explain(result)[:2]:
            print(f"       {index.concepts[cid].name}: {qw:.3f} x {vw:.4f} = {product:.5f}")
