"""Operator command line: ingest corpora, build indexes, run one-shot
queries, render file reports and launch the HTTP service.

Exit status is 0 exactly when the operation completed without a module
error; failures print one structured error line to stderr.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from pathlib import Path

from .errors import GraphMineError, UntranslatableKeyword
from .index import DocFilter, build_index, load_index, save_index
from .ingestion import (
    DEFAULT_COOCCURRENCE_CONFIDENCE,
    ingest_corpus,
    load_store,
    save_store,
)
from .pattern import (
    NarrativePattern,
    PatternQuery,
    mine_pattern,
    pattern_to_json,
    result_documents,
)
from .vocabulary import load_vocabulary

VOCAB_FILE = "vocabulary.jsonl"


def _store_vocabulary(store_path: str | Path):
    """The vocabulary is copied into the store directory at ingest time so
    query/serve only need the store and index paths."""
    vocab_path = Path(store_path) / VOCAB_FILE
    if not vocab_path.exists():
        raise FileNotFoundError(f"no vocabulary in store: {vocab_path}")
    return load_vocabulary(vocab_path)


def _cmd_ingest(args: argparse.Namespace) -> int:
    if not 0.0 < args.cooc_confidence <= 1.0:
        raise ValueError("--cooc-confidence must be in (0, 1]")
    vocab = load_vocabulary(args.vocab)
    store = ingest_corpus(args.corpus, vocab, args.cooc_confidence)
    save_store(store, args.store)
    shutil.copyfile(args.vocab, Path(args.store) / VOCAB_FILE)
    print(
        f"Ingested {len(store)} documents, "
        f"{store.num_statement_extractions} statement extractions."
    )
    return 0


def _cmd_index(args: argparse.Namespace) -> int:
    store = load_store(args.store)
    ix = build_index(store)
    save_index(ix, args.index)
    print(f"Indexed {ix.total_docs} documents, {len(ix.edge_df)} distinct edges.")
    return 0


def _build_query(args: argparse.Namespace) -> PatternQuery:
    return PatternQuery(
        keywords=tuple(args.keywords),
        doc_filter=DocFilter(),
        top_k_per_concept=args.top_k,
    )


def _print_pattern_text(pattern: NarrativePattern) -> None:
    print(f"retrieved_docs\t{pattern.retrieved_doc_count}")
    print("searched\t" + "|".join(sorted(pattern.searched_entities)))
    print("rank\tsubject\tpredicate\tobject\tfscore\tdocs")
    for rank, es in enumerate(pattern.edges, start=1):
        print(
            f"{rank}\t{es.edge.subject_id}\t{es.edge.predicate}\t"
            f"{es.edge.object_id}\t{es.fscore:.6f}\t{len(es.supporting_docs)}"
        )


def _cmd_query(args: argparse.Namespace) -> int:
    ix = load_index(args.index)
    store = load_store(args.store)
    vocab = _store_vocabulary(args.store)
    pattern = mine_pattern(_build_query(args), vocab, ix, store)
    if args.format == "graph-serialization":
        print(pattern_to_json(pattern))
    else:
        _print_pattern_text(pattern)
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    from . import report

    ix = load_index(args.index)
    store = load_store(args.store)
    vocab = _store_vocabulary(args.store)
    query = _build_query(args)
    pattern = mine_pattern(query, vocab, ix, store)
    records = result_documents(query, vocab, ix, store)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [
        report.render_pattern_figure(pattern, out_dir / "pattern.png"),
        report.render_score_chart(pattern, out_dir / "scores.png"),
        report.write_edges_tsv(pattern, out_dir / "edges.tsv"),
        report.write_documents_tsv(records, out_dir / "documents.tsv"),
    ]
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    ix = load_index(args.index)
    store = load_store(args.store)
    vocab = _store_vocabulary(args.store)
    app = create_app(vocab, ix, store)
    if not 0 <= args.port <= 65535:
        raise ValueError(f"port {args.port} out of range")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphmine",
        description="Mine ranked entity interaction patterns from document graphs.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_ingest = sub.add_parser("ingest", help="ingest a corpus into a store")
    p_ingest.add_argument("--vocab", required=True, help="vocabulary JSONL file")
    p_ingest.add_argument("--corpus", required=True, help="corpus JSONL file")
    p_ingest.add_argument("--store", required=True, help="output store directory")
    p_ingest.add_argument(
        "--cooc-confidence",
        type=float,
        default=DEFAULT_COOCCURRENCE_CONFIDENCE,
        help="confidence assigned to co-occurrence statements",
    )
    p_ingest.set_defaults(func=_cmd_ingest)

    p_index = sub.add_parser("index", help="build the inverted index for a store")
    p_index.add_argument("--store", required=True)
    p_index.add_argument("--index", required=True, help="output index file")
    p_index.set_defaults(func=_cmd_index)

    p_query = sub.add_parser("query", help="mine a pattern for the given keywords")
    p_query.add_argument("--store", required=True)
    p_query.add_argument("--index", required=True)
    p_query.add_argument("--top-k", type=int, default=5, dest="top_k")
    p_query.add_argument(
        "--format",
        choices=["text", "graph-serialization"],
        default="text",
    )
    p_query.add_argument("keywords", nargs="*")
    p_query.set_defaults(func=_cmd_query)

    p_report = sub.add_parser(
        "report", help="mine a pattern and write figures plus TSV tables"
    )
    p_report.add_argument("--store", required=True)
    p_report.add_argument("--index", required=True)
    p_report.add_argument("--top-k", type=int, default=5, dest="top_k")
    p_report.add_argument("--out", required=True, help="output directory")
    p_report.add_argument("keywords", nargs="*")
    p_report.set_defaults(func=_cmd_report)

    p_serve = sub.add_parser("serve", help="serve the HTTP API")
    p_serve.add_argument("--store", required=True)
    p_serve.add_argument("--index", required=True)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UntranslatableKeyword as exc:
        print(f"error: UntranslatableKeyword: {exc.message}", file=sys.stderr)
        if exc.suggestions:
            print(
                "suggestions: " + json.dumps(exc.suggestions, ensure_ascii=False),
                file=sys.stderr,
            )
        return 2
    except GraphMineError as exc:
        print(f"error: {type(exc).__name__}: {exc.message}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
