"""Walk through corpus ingestion and concept weighting.

Parses the bundled demo corpus (concept-shots XML, contexts XML, term
lexicon), inspects the three-level hierarchy, then builds the weight
matrix and prints a few weight triples.

Run from the repository root:  python demos/01_ingest_and_weights.py
"""

import io
from pathlib import Path

from cbvr import build_weight_matrix, ingest_corpus, write_weight_records

CORPUS = Path(__file__).parent / "corpus"

# --- ingest ---------------------------------------------------------------
index, lexicon, report = ingest_corpus(
    (CORPUS / "concepts.xml").read_bytes(),
    (CORPUS / "contexts.xml").read_bytes(),
    (CORPUS / "lexicon.tsv").read_bytes(),
)
print(f"concepts={report.concepts_parsed} contexts={report.contexts_parsed}")
print(f"shots={report.shots_parsed} videos={report.videos_indexed} lexicon={len(lexicon)}")
for location, message in report.warnings:
    print(f"  warning: {location}: {message}")

# --- navigate the hierarchy -------------------------------------------------
dogs = index.concept_by_name("Dogs")
print(f"\nvideos with {dogs.name}: {index.videos_of_concept(dogs.concept_id)}")
similar = [index.concepts[cid].name for cid in index.similar_concepts(dogs.concept_id)]
print(f"concepts sharing a context with {dogs.name}: {similar}")
for membership in index.contexts_of_concept(dogs.concept_id):
    print(f"  context {membership.name} (num={membership.num}), weight {membership.weight}")

# --- weight matrix ----------------------------------------------------------
matrix = build_weight_matrix(index)
print(f"\nmatrix: {len(matrix.video_ids)} videos x {len(matrix.concept_ids)} concepts,"
      f" {len(matrix.entries)} non-zero entries")

video = "shot105"
print(f"\nweights for {video}:")
for cid in index.concepts_of_video(video):
    entry = matrix.entries[(video, cid)]
    name = index.concepts[cid].name
    print(f"  {name:14s} local={entry.p1:.4f} collection={entry.p2:.4f} combined={entry.p:.6f}")

# --- export -------------------------------------------------------------
buffer = io.StringIO()
count = write_weight_records(matrix, buffer)
print(f"\nexported {count} weight records; first lines:")
print("\n".join(buffer.getvalue().splitlines()[:4]))
