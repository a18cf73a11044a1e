"""Command line entry points: index, search, eval, serve."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import CbvrError, EmptyQueryError
from ..evaluation import load_qrels, run_feedback_session, write_curves
from ..ingest import ingest_corpus
from ..query import confirm, match_concepts, normalize
from ..retrieval import rank
from ..textnorm import load_stopword_dir
from ..weighting import build_weight_matrix, write_weight_records
from .config import ServiceConfig, load_config
from .snapshot import load_snapshot, write_snapshot


def _read(path: str | Path) -> bytes:
    return Path(path).read_bytes()


def _config_from_args(args: argparse.Namespace) -> ServiceConfig:
    return load_config(args.config)


def _stopwords(config: ServiceConfig):
    if config.stopword_dir is not None:
        return load_stopword_dir(config.stopword_dir)
    return None


def _expand_and_confirm(text, lang, auto_confirm, lexicon, index, stopwords):
    query = normalize(text, language_hint=lang, stopwords=stopwords)
    candidates = match_concepts(query, lexicon, index)
    if not candidates:
        return query, candidates, None
    chosen = [c.concept_id for c in candidates[:auto_confirm]]
    return query, candidates, confirm(candidates, chosen)


def cmd_index(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    concepts_path = args.concepts or config.concepts_xml
    if concepts_path is None:
        print("error: --concepts is required", file=sys.stderr)
        return 2
    contexts_path = args.contexts or config.contexts_xml
    lexicon_path = args.lexicon or config.lexicon
    counts_path = args.shot_counts or config.shot_counts

    index, lexicon, report = ingest_corpus(
        _read(concepts_path),
        _read(contexts_path) if contexts_path else None,
        _read(lexicon_path) if lexicon_path else None,
        _read(counts_path) if counts_path else None,
    )
    matrix = build_weight_matrix(index)
    write_snapshot(index, matrix, lexicon, args.out)
    for location, message in report.warnings:
        print(f"warning: {location}: {message}", file=sys.stderr)
    print(f"concepts: {report.concepts_parsed}")
    print(f"contexts: {report.contexts_parsed}")
    print(f"shots: {report.shots_parsed}")
    print(f"videos: {report.videos_indexed}")
    print(f"lexicon entries: {len(lexicon)}")
    print(f"snapshot: {args.out}")
    if args.export_weights:
        with open(args.export_weights, "w", encoding="utf-8") as fh:
            count = write_weight_records(matrix, fh)
        print(f"weight records: {count} -> {args.export_weights}")
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    snapshot_path = args.snapshot or config.snapshot
    if snapshot_path is None:
        print("error: --snapshot is required", file=sys.stderr)
        return 2
    index, matrix, lexicon = load_snapshot(snapshot_path)
    _, candidates, vector = _expand_and_confirm(
        args.query, args.lang, args.auto_confirm, lexicon, index, _stopwords(config)
    )
    if vector is None:
        print("no concepts matched the query", file=sys.stderr)
        return 0
    for result in rank(vector, matrix, limit=args.limit):
        print(f"{result.rank}\t{result.video_id}\t{result.similarity:.6f}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    snapshot_path = args.snapshot or config.snapshot
    if snapshot_path is None:
        print("error: --snapshot is required", file=sys.stderr)
        return 2
    index, matrix, lexicon = load_snapshot(snapshot_path)
    qrels = load_qrels(_read(args.qrels))
    stopwords = _stopwords(config)

    queries: list[tuple[str, str, str | None]] = []
    for lineno, line in enumerate(
        _read(args.queries).decode("utf-8").splitlines(), start=1
    ):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) not in (2, 3):
            print(f"error: {args.queries}: line {lineno}: expected 2 or 3 fields", file=sys.stderr)
            return 1
        queries.append((fields[0], fields[1], fields[2] if len(fields) == 3 else None))

    judge_depth = args.judge_depth if args.judge_depth is not None else config.judge_depth
    outcomes = []
    for query_id, text, lang in queries:
        if query_id not in qrels:
            print(f"warning: no qrels for query {query_id!r}; skipped", file=sys.stderr)
            continue
        try:
            _, _, vector = _expand_and_confirm(
                text, lang, args.auto_confirm, lexicon, index, stopwords
            )
        except EmptyQueryError as exc:
            print(f"warning: query {query_id!r}: {exc}; skipped", file=sys.stderr)
            continue
        if vector is None:
            print(f"warning: query {query_id!r} matched no concepts; skipped", file=sys.stderr)
            continue
        outcomes.append(
            (
                query_id,
                run_feedback_session(
                    vector,
                    matrix,
                    qrels[query_id],
                    iterations=args.iterations,
                    judge_depth=judge_depth,
                    alpha=config.alpha,
                ),
            )
        )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            count = write_curves(outcomes, fh)
        print(f"curve records: {count} -> {args.out}")
    else:
        write_curves(outcomes, sys.stdout)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .app import create_app

    config = _config_from_args(args)
    if args.snapshot:
        config.snapshot = Path(args.snapshot)
    if args.listen:
        config.listen = args.listen
    if args.keyframes:
        config.keyframe_dir = Path(args.keyframes)
    if args.ui:
        config.ui_dir = Path(args.ui)
    config.validate()
    if config.snapshot is None:
        print("error: --snapshot is required", file=sys.stderr)
        return 2
    index, matrix, lexicon = load_snapshot(config.snapshot)
    app = create_app(index, matrix, lexicon, config=config)
    host, port = config.listen_host_port()
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbvr", description="concept-based video retrieval"
    )
    parser.add_argument("--config", help="JSON config file (CBVR_* env vars override it)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="parse corpus files and write a snapshot")
    p_index.add_argument("--concepts", help="concept-shots XML file")
    p_index.add_argument("--contexts", help="contexts XML file")
    p_index.add_argument("--lexicon", help="term lexicon TSV file")
    p_index.add_argument("--shot-counts", help="per-video shot count sidecar TSV")
    p_index.add_argument("--out", required=True, help="snapshot output path")
    p_index.add_argument("--export-weights", help="also write weight records TSV")
    p_index.set_defaults(func=cmd_index)

    p_search = sub.add_parser("search", help="rank videos for a text query")
    p_search.add_argument("--snapshot", help="snapshot produced by 'index'")
    p_search.add_argument("--query", required=True, help="free-text query")
    p_search.add_argument("--lang", choices=["en", "ar"], help="language hint")
    p_search.add_argument(
        "--auto-confirm",
        type=int,
        default=3,
        metavar="K",
        help="confirm the top K candidate concepts without interaction",
    )
    p_search.add_argument("--limit", type=int, default=60, help="results to print")
    p_search.set_defaults(func=cmd_search)

    p_eval = sub.add_parser("eval", help="run oracle-judged feedback sessions")
    p_eval.add_argument("--snapshot", help="snapshot produced by 'index'")
    p_eval.add_argument("--qrels", required=True, help="qrels TSV (query_id, video_id, 0/1)")
    p_eval.add_argument(
        "--queries", required=True, help="queries TSV (query_id, text[, lang])"
    )
    p_eval.add_argument("--iterations", type=int, default=3)
    p_eval.add_argument("--judge-depth", type=int, default=None)
    p_eval.add_argument("--auto-confirm", type=int, default=3, metavar="K")
    p_eval.add_argument("--out", help="curve records output path (default stdout)")
    p_eval.set_defaults(func=cmd_eval)

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--snapshot", help="snapshot produced by 'index'")
    p_serve.add_argument("--listen", help="host:port (default 127.0.0.1:8000)")
    p_serve.add_argument("--keyframes", help="directory of <shot_id>.jpg/.png images")
    p_serve.add_argument("--ui", help="directory of static UI assets to serve at /")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CbvrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
