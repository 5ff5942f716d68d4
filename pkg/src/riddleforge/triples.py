"""Triple forging: documents -> (concept, relation, property) facts.

Covers property extraction from free text, surface assembly and
anonymization, the lookup dictionary backing generation and validation, and
direct ingestion of pre-made triples files (JSONL or TSV) for corpora that
arrive already tripled.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .keywords import (ExtractionConfig, PosTagger, dedupe_ranked,
                       extract_keyphrases, pattern_phrases, sentences_of,
                       term_scores)
from .relations import RelationPredictor, RuleBasedPredictor
from .surface import AnonymizationError, anonymize


class IngestError(ValueError):
    """A corpus file could not be ingested."""


class TripleSkipped(ValueError):
    """A candidate triple was rejected by an assembly rule."""


@dataclass(frozen=True)
class Document:
    concept_id: str
    text: str

    def __post_init__(self):
        if not self.concept_id.strip():
            raise ValueError("concept_id must be non-empty")


@dataclass(frozen=True)
class PropertyCandidate:
    phrase: str
    score: float
    source: str  # "statistical" | "pos_pattern"


@dataclass(frozen=True)
class Triple:
    id: str
    concept_id: str
    relation: str
    property: str
    surface: str
    context: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "concept": self.concept_id,
            "relation": self.relation,
            "property": self.property,
            "surface": self.surface,
            "context": self.context,
        }


def triple_id(concept_id: str, relation: str, prop: str) -> str:
    """Content-derived id, reproducible across runs."""
    payload = "\x1f".join((concept_id, relation, prop)).encode("utf-8")
    return hashlib.blake2b(payload, digest_size=8).hexdigest()


def assemble_triple(concept_id: str, relation: str, prop: str) -> Triple:
    """Build the lowercased surface sentence and its anonymized context."""
    concept_id = concept_id.strip().lower()
    relation = relation.strip().lower()
    prop = prop.strip().lower()
    if not concept_id or not relation or not prop:
        raise ValueError("concept, relation, and property must be non-empty")
    if concept_id in prop:
        raise TripleSkipped(f"property {prop!r} contains the concept {concept_id!r}")
    surface = f"{concept_id} {relation} {prop}"
    try:
        context = anonymize(surface, concept_id)
    except AnonymizationError as exc:
        raise TripleSkipped(str(exc)) from exc
    return Triple(
        id=triple_id(concept_id, relation, prop),
        concept_id=concept_id,
        relation=relation,
        property=prop,
        surface=surface,
        context=context,
    )


def extract_properties(doc: Document, cfg: Optional[ExtractionConfig] = None,
                       pos_tagger: Optional[PosTagger] = None
                       ) -> list[PropertyCandidate]:
    """Deduplicated property candidates for one document, best first.

    The statistical branch always runs; the pattern branch runs when a POS
    tagger is supplied.  Candidates equal to or containing the concept name
    are removed.
    """
    cfg = cfg or ExtractionConfig()
    text = doc.text.strip()
    if not text:
        return []
    if not sentences_of(text):
        raise IngestError(f"document {doc.concept_id!r} has no tokenizable text")

    concept = doc.concept_id.strip().lower()
    seen: dict[str, PropertyCandidate] = {}
    branches = [("statistical", extract_keyphrases(text, cfg))]
    if pos_tagger is not None:
        scores = term_scores(sentences_of(text), cfg.window, cfg.stopwords)
        branches.append(("pos_pattern", pattern_phrases(text, pos_tagger, cfg, scores)))
    for source, ranked in branches:
        for phrase, score in ranked:
            if concept in phrase:
                continue
            prior = seen.get(phrase)
            if prior is None or score < prior.score:
                seen[phrase] = PropertyCandidate(phrase, score, source)

    ordered = sorted(seen.values(), key=lambda c: (c.score, c.phrase))
    kept = dedupe_ranked([(c.phrase, c.score) for c in ordered],
                         cfg.dedup_threshold, cfg.max_candidates)
    kept_phrases = {p for p, _ in kept}
    return [c for c in ordered if c.phrase in kept_phrases]


def document_to_triples(doc: Document, cfg: Optional[ExtractionConfig] = None,
                        predictor: Optional[RelationPredictor] = None,
                        pos_tagger: Optional[PosTagger] = None
                        ) -> tuple[list[Triple], list[str]]:
    """Forge triples for one document; returns (triples, skip notices)."""
    predictor = predictor or RuleBasedPredictor()
    candidates = extract_properties(doc, cfg, pos_tagger)
    triples: list[Triple] = []
    notices: list[str] = []
    seen_ids: set[str] = set()
    for cand in candidates:
        relation = predictor.predict(doc.concept_id, cand.phrase)
        try:
            triple = assemble_triple(doc.concept_id, relation, cand.phrase)
        except TripleSkipped as exc:
            notices.append(f"{doc.concept_id}: skipped {cand.phrase!r} ({exc})")
            continue
        if triple.id in seen_ids:
            continue
        seen_ids.add(triple.id)
        triples.append(triple)
    return triples, notices


@dataclass
class ConceptEntry:
    triples: list[Triple] = field(default_factory=list)
    properties: list[str] = field(default_factory=list)  # ordered, unique

    def property_set(self) -> frozenset[str]:
        return frozenset(self.properties)


class LookupDictionary:
    """concept -> its triples and property set; the oracle behind generation
    and validation."""

    def __init__(self):
        self.entries: dict[str, ConceptEntry] = {}
        self._by_id: dict[str, Triple] = {}

    def concepts(self) -> list[str]:
        return list(self.entries)

    def triples_of(self, concept_id: str) -> list[Triple]:
        return self.entries[concept_id].triples

    def properties_of(self, concept_id: str) -> frozenset[str]:
        return self.entries[concept_id].property_set()

    def triple_by_id(self, tid: str) -> Triple:
        return self._by_id[tid]

    def all_triples(self) -> list[Triple]:
        return [t for entry in self.entries.values() for t in entry.triples]

    def triple_with_property(self, concept_id: str, prop: str) -> Optional[Triple]:
        for t in self.entries[concept_id].triples:
            if t.property == prop:
                return t
        return None

    def __contains__(self, concept_id: str) -> bool:
        return concept_id in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def to_dict(self) -> dict:
        return {
            concept: {
                "triples": [t.to_dict() for t in entry.triples],
                "properties": entry.properties,
            }
            for concept, entry in sorted(self.entries.items())
        }


def build_lookup(triples: Iterable[Triple]) -> tuple[LookupDictionary, list[str]]:
    """Group triples by concept, preserving input order; duplicate triple ids
    are dropped with a warning."""
    lookup = LookupDictionary()
    warnings: list[str] = []
    for triple in triples:
        if triple.id in lookup._by_id:
            warnings.append(f"duplicate triple id {triple.id} ({triple.surface!r}) dropped")
            continue
        entry = lookup.entries.setdefault(triple.concept_id, ConceptEntry())
        entry.triples.append(triple)
        if triple.property not in entry.properties:
            entry.properties.append(triple.property)
        lookup._by_id[triple.id] = triple
    return lookup, warnings


@dataclass
class IngestReport:
    total_lines: int = 0
    ingested: int = 0
    skipped: list[str] = field(default_factory=list)
    malformed: list[tuple[int, str]] = field(default_factory=list)  # (line no, reason)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "total_lines": self.total_lines,
            "ingested": self.ingested,
            "skipped": self.skipped,
            "malformed": [{"line": n, "reason": r} for n, r in self.malformed],
            "warnings": self.warnings,
        }


def ingest_triples_file(path: str | Path, format: str
                        ) -> tuple[list[Triple], IngestReport]:
    """Read a pre-tripled corpus; malformed lines are reported with numbers
    and the whole file is rejected when more than half of it is malformed."""
    if format not in ("jsonl", "tsv"):
        raise IngestError(f"unknown triples format {format!r} (expected jsonl or tsv)")
    path = Path(path)
    report = IngestReport()
    triples: list[Triple] = []
    seen: set[str] = set()

    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            report.total_lines += 1
            try:
                if format == "jsonl":
                    record = json.loads(line)
                    concept = record["concept"]
                    relation = record["relation"]
                    prop = record["property"]
                else:
                    parts = line.split("\t")
                    if len(parts) != 3:
                        raise ValueError(f"expected 3 columns, got {len(parts)}")
                    concept, relation, prop = parts
            except (ValueError, KeyError, TypeError) as exc:
                report.malformed.append((lineno, str(exc)))
                continue
            try:
                triple = assemble_triple(str(concept), str(relation), str(prop))
            except TripleSkipped as exc:
                report.skipped.append(f"line {lineno}: {exc}")
                continue
            except ValueError as exc:
                report.malformed.append((lineno, str(exc)))
                continue
            if triple.id in seen:
                report.warnings.append(f"line {lineno}: duplicate triple {triple.id} dropped")
                continue
            seen.add(triple.id)
            triples.append(triple)
            report.ingested += 1

    if report.total_lines == 0:
        report.warnings.append(f"{path.name}: empty triples file")
    elif len(report.malformed) * 2 > report.total_lines:
        raise IngestError(
            f"{path.name}: {len(report.malformed)} of {report.total_lines} lines "
            f"malformed; first: line {report.malformed[0][0]} ({report.malformed[0][1]})"
        )
    return triples, report


def load_documents(path: str | Path) -> list[Document]:
    """Load a text corpus: a directory of <concept>.txt files or a JSONL file
    of {"concept": ..., "text": ...} records.  Concepts are lowercased and
    returned in sorted order so parallel processing merges deterministically."""
    path = Path(path)
    docs: list[Document] = []
    if path.is_dir():
        for file in sorted(path.glob("*.txt")):
            text = file.read_text(encoding="utf-8")
            docs.append(Document(concept_id=file.stem.strip().lower(), text=text))
    elif path.is_file():
        with path.open(encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    docs.append(Document(concept_id=str(record["concept"]).strip().lower(),
                                         text=str(record["text"])))
                except (ValueError, KeyError) as exc:
                    raise IngestError(f"{path.name} line {lineno}: {exc}") from exc
    else:
        raise IngestError(f"corpus path not found: {path}")
    docs.sort(key=lambda d: d.concept_id)
    return docs


def write_triples_jsonl(triples: Iterable[Triple], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for t in triples:
            fh.write(json.dumps(t.to_dict(), sort_keys=True) + "\n")


def read_triples_jsonl(path: str | Path) -> list[Triple]:
    triples = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            d = json.loads(line)
            triples.append(Triple(
                id=d["id"], concept_id=d["concept"], relation=d["relation"],
                property=d["property"], surface=d["surface"], context=d["context"],
            ))
    return triples


def write_lookup_json(lookup: LookupDictionary, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(lookup.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
