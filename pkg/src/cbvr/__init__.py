"""Concept-based video retrieval over a context/concept/video hierarchy.

The pipeline: ingest shot-annotated corpus XML into an immutable index,
weight every concept-in-video occurrence, expand multilingual text queries
into concept vectors through a term lexicon, rank videos by cosine
similarity, and refine rankings from user relevance judgments.
"""

from .corpus import Concept, Context, CorpusIndex, Shot, Video, video_of_shot
from .errors import (
    CbvrError,
    CorpusParseError,
    CorpusValidationError,
    DimensionMismatchError,
    EmptyQueryError,
    InvalidCorpusError,
    SessionConflictError,
    SnapshotError,
    UnknownIdError,
)
from .evaluation import (
    IterationOutcome,
    PRPoint,
    QrelSet,
    load_qrels,
    pr_curve,
    precision_at,
    recall_at,
    run_feedback_session,
)
from .ingest import (
    IngestReport,
    Lexicon,
    LexiconEntry,
    LexiconRecord,
    build_corpus_index,
    concept_shots_to_xml,
    contexts_to_xml,
    ingest_corpus,
    load_lexicon,
    load_shot_counts,
    parse_concept_shots_xml,
    parse_contexts_xml,
)
from .query import (
    ConceptCandidate,
    ConceptQueryVector,
    NormalizedQuery,
    confirm,
    match_concepts,
    normalize,
)
from .retrieval import (
    DEFAULT_ALPHA,
    FeedbackState,
    Judgment,
    Label,
    RankedResult,
    apply_feedback,
    cosine,
    explain,
    initial_state,
    rank,
)
from .textnorm import Language, normalize_arabic, normalize_term, tokenize
from .weighting import (
    ConceptVideoWeight,
    WeightMatrix,
    build_weight_matrix,
    combined_weight,
    global_weight,
    local_weight,
    write_weight_records,
)

__version__ = "0.1.0"
