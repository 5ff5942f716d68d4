"""Command-line pipeline driver.

Commands: ingest | classify | generate | serve | validate.  Each stage
reads the previous stage's files from the output directory, so stages can
be re-run independently.  Exit codes: 0 ok, 1 data error, 2 config error,
3 io error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import classify as classify_mod
from . import generate as generate_mod
from . import validate as validate_mod
from .config import ConfigError, PipelineConfig, load_config
from .datastore import DatastoreError, build_datastore
from .embedding import (EmbeddingError, HashedProjectionEmbedder,
                        HttpEmbeddingClient, PrecomputedEmbedder)
from .keywords import ExtractionConfig
from .relations import make_predictor
from .service import QuizService, create_app
from .triples import (IngestError, build_lookup, document_to_triples,
                      ingest_triples_file, load_documents, read_triples_jsonl,
                      write_lookup_json, write_triples_jsonl)

log = logging.getLogger("riddleforge")

EXIT_OK = 0
EXIT_DATA = 1
EXIT_CONFIG = 2
EXIT_IO = 3


class DataError(RuntimeError):
    pass


def _extraction_config(cfg: PipelineConfig) -> ExtractionConfig:
    return ExtractionConfig(max_ngram=cfg.max_ngram,
                            dedup_threshold=cfg.dedup_threshold,
                            window=cfg.window, top_k=cfg.top_k)


def _embedder(cfg: PipelineConfig):
    if cfg.embedder == "hashed":
        return HashedProjectionEmbedder(dimension=cfg.dimension, seed=cfg.embed_seed)
    if cfg.embedder == "file":
        path = Path(cfg.embeddings_path)
        if path.suffix == ".jsonl":
            return PrecomputedEmbedder.from_jsonl(path)
        return PrecomputedEmbedder.from_binary(path)
    return HttpEmbeddingClient(cfg.embedder_url, dimension=cfg.dimension)


def _write_report(cfg: PipelineConfig, name: str, payload: dict) -> Path:
    path = cfg.artifact(name)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _load_lookup_from_artifacts(cfg: PipelineConfig):
    triples_path = cfg.artifact("triples.jsonl")
    if not triples_path.is_file():
        raise DataError(
            f"{triples_path} not found; run 'riddleforge ingest' first")
    triples = read_triples_jsonl(triples_path)
    lookup, warnings = build_lookup(triples)
    for w in warnings:
        log.warning("%s", w)
    return triples, lookup


def cmd_ingest(cfg: PipelineConfig) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    notices: list[str] = []
    if cfg.corpus_format in ("triples-jsonl", "triples-tsv"):
        fmt = "jsonl" if cfg.corpus_format == "triples-jsonl" else "tsv"
        triples, report = ingest_triples_file(cfg.corpus_path, fmt)
        report_dict = report.to_dict()
        notices.extend(report.warnings)
    else:
        docs = load_documents(cfg.corpus_path)
        predictor = make_predictor(cfg.predictor, cfg.predictor_url,
                                   cfg.predictor_threshold)
        extraction = _extraction_config(cfg)
        triples = []
        for doc in docs:
            doc_triples, doc_notices = document_to_triples(doc, extraction, predictor)
            triples.extend(doc_triples)
            notices.extend(doc_notices)
        report_dict = {
            "documents": len(docs),
            "ingested": len(triples),
            "skipped": notices,
            "malformed": [],
            "warnings": [],
        }

    lookup, warnings = build_lookup(triples)
    notices.extend(warnings)
    write_triples_jsonl(triples, cfg.artifact("triples.jsonl"))
    write_lookup_json(lookup, cfg.artifact("lookup.json"))
    report_dict["concepts"] = len(lookup)
    path = _write_report(cfg, "ingest_report.json", report_dict)
    print(f"ingested {len(triples)} triples across {len(lookup)} concepts "
          f"(report: {path})")
    if not triples:
        raise DataError("no triples ingested")
    return EXIT_OK


def cmd_classify(cfg: PipelineConfig) -> int:
    triples, lookup = _load_lookup_from_artifacts(cfg)
    provider = _embedder(cfg)
    ds = build_datastore(triples, provider, max_distance=cfg.max_distance)
    classified_map = classify_mod.classify_corpus(lookup, ds, k=cfg.k,
                                                  include_self=cfg.include_self)
    classify_mod.write_classified_jsonl(classified_map, cfg.artifact("classified.jsonl"))
    counts = classify_mod.class_counts(classified_map)
    report = {
        "k": cfg.k,
        "include_self": cfg.include_self,
        "embedder": cfg.embedder,
        "dimension": ds.dimension,
        "entries": len(ds),
        "counts": counts,
    }
    _write_report(cfg, "classify_report.json", report)
    for concept in sorted(counts):
        c = counts[concept]
        print(f"{concept}: {c[classify_mod.TOPIC_MARKER]} topic markers / "
              f"{c[classify_mod.COMMON]} common")
    return EXIT_OK


def cmd_generate(cfg: PipelineConfig, kind: str | None = None) -> int:
    _, lookup = _load_lookup_from_artifacts(cfg)
    classified_path = cfg.artifact("classified.jsonl")
    if not classified_path.is_file():
        raise DataError(
            f"{classified_path} not found; run 'riddleforge classify' first")
    classified_map = classify_mod.read_classified_jsonl(classified_path, lookup)
    gen_cfg = generate_mod.GenerationConfig(sizes=cfg.sizes, cap=cfg.cap,
                                            seed=cfg.seed,
                                            hint_count=cfg.hint_count)
    riddles, meta = generate_mod.generate_corpus(classified_map, lookup, gen_cfg)
    if kind == "easy":
        riddles = [r for r in riddles if r.kind == generate_mod.KIND_EASY]
    elif kind == "difficult":
        riddles = [r for r in riddles if r.is_difficult]
    riddles = validate_mod.attach_solutions(riddles, lookup)
    meta["k"] = cfg.k
    meta["kind_filter"] = kind
    generate_mod.write_riddles_json(riddles, meta, cfg.artifact("riddles.json"))

    by_concept_kind: dict[tuple[str, str], int] = {}
    for r in riddles:
        key = (r.concept_id, r.kind)
        by_concept_kind[key] = by_concept_kind.get(key, 0) + 1
    for (concept, kind), count in sorted(by_concept_kind.items()):
        print(f"{concept} {kind}: {count}")
    print(f"total riddles: {len(riddles)}")
    if not riddles:
        raise DataError("no riddles generated")
    return EXIT_OK


def cmd_validate(cfg: PipelineConfig) -> int:
    _, lookup = _load_lookup_from_artifacts(cfg)
    riddles_path = cfg.artifact("riddles.json")
    if not riddles_path.is_file():
        raise DataError(f"{riddles_path} not found; run 'riddleforge generate' first")
    riddles, _ = generate_mod.read_riddles_json(riddles_path)
    problems = validate_mod.recheck_export(riddles, lookup)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        raise DataError(f"{len(problems)} riddles failed re-validation")
    print(f"{len(riddles)} riddles re-validated against the lookup dictionary")
    return EXIT_OK


def cmd_serve(cfg: PipelineConfig, port: int, host: str = "127.0.0.1") -> int:
    riddles_path = cfg.artifact("riddles.json")
    if not riddles_path.is_file():
        print(f"error: {riddles_path} not found; run 'riddleforge generate' first",
              file=sys.stderr)
        return EXIT_IO
    riddles, _ = generate_mod.read_riddles_json(riddles_path)
    aliases = {}
    alias_path = cfg.artifact("aliases.json")
    if alias_path.is_file():
        aliases = validate_mod.load_aliases(alias_path)
    service = QuizService(riddles, aliases=aliases,
                          journal_path=cfg.journal_path,
                          reveal_on_failure=cfg.reveal_on_failure,
                          default_seed=cfg.seed)
    static_dir = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
    app = create_app(service, static_dir if static_dir.is_dir() else None)
    import uvicorn
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except (OSError, SystemExit) as exc:
        print(f"error: could not bind {host}:{port} ({exc})", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riddleforge",
        description="Forge concept-attainment riddles and serve them as a quiz.")
    parser.add_argument("--config", help="path to a JSON config file")
    parser.add_argument("--seed", type=int, help="generation seed override")
    parser.add_argument("--out", help="output directory override")
    parser.add_argument("--format", dest="corpus_format",
                        help="corpus format override")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="corpus -> triples + lookup")
    p_ingest.add_argument("--corpus", help="corpus path override")

    sub.add_parser("classify", help="triples -> topic marker / common classes")
    p_generate = sub.add_parser("generate", help="classes -> riddles with solutions")
    p_generate.add_argument("--kind", choices=["easy", "difficult"],
                            help="restrict the export to one difficulty")
    sub.add_parser("validate", help="re-check a riddle export against the lookup")

    p_serve = sub.add_parser("serve", help="serve the quiz API (and UI if built)")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    overrides = {
        "seed": args.seed,
        "out_dir": args.out,
        "corpus_format": args.corpus_format,
    }
    if getattr(args, "corpus", None):
        overrides["corpus_path"] = args.corpus
    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "ingest":
            return cmd_ingest(cfg)
        if args.command == "classify":
            return cmd_classify(cfg)
        if args.command == "generate":
            return cmd_generate(cfg, args.kind)
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "serve":
            return cmd_serve(cfg, args.port, args.host)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IngestError, DataError, DatastoreError, EmbeddingError,
            validate_mod.CorpusMismatchError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
