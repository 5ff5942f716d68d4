"""Topic Marker / Common classification of triple properties.

A triple's property is a Topic Marker when every one of its k nearest
contexts in the datastore (its own entry excluded) belongs to the same
concept; otherwise it is Common, and the neighbouring concepts are recorded
in order of first appearance by ascending distance.  Those neighbour
concepts later become the pool of negative examples.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .datastore import Datastore, get_concept
from .triples import LookupDictionary, Triple

log = logging.getLogger(__name__)

TOPIC_MARKER = "topic_marker"
COMMON = "common"
DEFAULT_K = 5


@dataclass(frozen=True)
class PropertyClass:
    kind: str  # TOPIC_MARKER | COMMON
    neighbor_concepts: tuple[str, ...]

    def __post_init__(self):
        if self.kind == TOPIC_MARKER and self.neighbor_concepts:
            raise ValueError("a topic marker has no neighbour concepts")
        if self.kind == COMMON and not self.neighbor_concepts:
            raise ValueError("a common property needs neighbour concepts")


@dataclass(frozen=True)
class ClassifiedTriple:
    triple: Triple
    label: PropertyClass

    @property
    def is_topic_marker(self) -> bool:
        return self.label.kind == TOPIC_MARKER


def classify_concept(concept_id: str, lookup: LookupDictionary, ds: Datastore,
                     k: int = DEFAULT_K, include_self: bool = False
                     ) -> list[ClassifiedTriple]:
    """Classify every triple of one concept against the full-corpus datastore."""
    if concept_id not in lookup:
        raise KeyError(f"unknown concept {concept_id!r}")
    triples = lookup.triples_of(concept_id)
    if not triples:
        log.warning("concept %r has no triples to classify", concept_id)
        return []
    out: list[ClassifiedTriple] = []
    for triple in triples:
        result = ds.query_for_triple(triple.id, k=k, include_self=include_self)
        foreign: list[str] = []
        for neighbor in result.neighbors:
            concept = get_concept(neighbor.entry)
            if concept != concept_id and concept not in foreign:
                foreign.append(concept)
        if foreign:
            label = PropertyClass(kind=COMMON, neighbor_concepts=tuple(foreign))
        else:
            label = PropertyClass(kind=TOPIC_MARKER, neighbor_concepts=())
        out.append(ClassifiedTriple(triple=triple, label=label))
    return out


def classify_corpus(lookup: LookupDictionary, ds: Datastore, k: int = DEFAULT_K,
                    include_self: bool = False
                    ) -> dict[str, list[ClassifiedTriple]]:
    """classify_concept over every concept, keyed in deterministic order."""
    return {
        concept: classify_concept(concept, lookup, ds, k, include_self)
        for concept in sorted(lookup.concepts())
    }


def topic_markers(classified: list[ClassifiedTriple]) -> list[ClassifiedTriple]:
    return [ct for ct in classified if ct.is_topic_marker]


def common_triples(classified: list[ClassifiedTriple]) -> list[ClassifiedTriple]:
    return [ct for ct in classified if not ct.is_topic_marker]


def class_counts(classified_map: dict[str, list[ClassifiedTriple]]
                 ) -> dict[str, dict[str, int]]:
    return {
        concept: {
            TOPIC_MARKER: len(topic_markers(cts)),
            COMMON: len(common_triples(cts)),
        }
        for concept, cts in classified_map.items()
    }


def write_classified_jsonl(classified_map: dict[str, list[ClassifiedTriple]],
                           path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for concept in sorted(classified_map):
            for ct in classified_map[concept]:
                fh.write(json.dumps({
                    "triple_id": ct.triple.id,
                    "concept": concept,
                    "class": ct.label.kind,
                    "neighbor_concepts": list(ct.label.neighbor_concepts),
                }, sort_keys=True) + "\n")


def read_classified_jsonl(path: str | Path, lookup: LookupDictionary
                          ) -> dict[str, list[ClassifiedTriple]]:
    classified_map: dict[str, list[ClassifiedTriple]] = {}
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            label = PropertyClass(kind=record["class"],
                                  neighbor_concepts=tuple(record["neighbor_concepts"]))
            triple = lookup.triple_by_id(record["triple_id"])
            classified_map.setdefault(record["concept"], []).append(
                ClassifiedTriple(triple=triple, label=label))
    return classified_map
