"""Riddle generation from classified triples.

Easy riddles are 3-5 sentence combinations of a concept's Topic Markers.
Difficult riddles pair each Common-property line with a negative example in
two renderings: version 1 negates a neighbouring concept ("but I am not an
elephant"), version 2 negates one of that neighbour's own unique properties
("but I don't have a trunk").  All randomness comes from per-concept PRNG
streams derived from one 64-bit seed, so generation is reproducible and
per-concept parallelism cannot change the output.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .classify import ClassifiedTriple, common_triples, topic_markers
from .surface import negate_line
from .triples import LookupDictionary

CLOSING = "Who am I ?"
KIND_EASY = "easy"
KIND_DIFFICULT_V1 = "difficult_v1"
KIND_DIFFICULT_V2 = "difficult_v2"
DEFAULT_SIZES = (3, 4, 5)
DEFAULT_CAP = 50
DEFAULT_HINT_COUNT = 2


@dataclass(frozen=True)
class PositiveLine:
    triple_id: str
    property: str
    text: str  # anonymized context, no terminal period


@dataclass(frozen=True)
class NegativePart:
    neighbor_concept: str
    text: str  # first-person denial, no terminal period


@dataclass(frozen=True)
class Riddle:
    id: str
    concept_id: str
    kind: str
    positive_lines: tuple[PositiveLine, ...]
    negative_parts: tuple[NegativePart, ...]  # empty for easy riddles
    seed: int
    closing: str = CLOSING
    hints: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()
    solutions: tuple[str, ...] = ()

    @property
    def is_difficult(self) -> bool:
        return self.kind in (KIND_DIFFICULT_V1, KIND_DIFFICULT_V2)

    def lines(self) -> list[str]:
        if not self.negative_parts:
            return [f"{pl.text}." for pl in self.positive_lines]
        return [
            f"{pl.text} but {neg.text}."
            for pl, neg in zip(self.positive_lines, self.negative_parts)
        ]

    def text(self) -> str:
        return " ".join(self.lines() + [self.closing])

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "concept": self.concept_id,
            "kind": self.kind,
            "lines": self.lines(),
            "closing": self.closing,
            "hints": list(self.hints),
            "solutions": list(self.solutions),
            "seed": self.seed,
            "flags": list(self.flags),
            "positives": [
                {"triple_id": pl.triple_id, "property": pl.property, "text": pl.text}
                for pl in self.positive_lines
            ],
            "negatives": [
                {"concept": neg.neighbor_concept, "text": neg.text}
                for neg in self.negative_parts
            ],
        }


def riddle_from_dict(d: dict) -> Riddle:
    return Riddle(
        id=d["id"],
        concept_id=d["concept"],
        kind=d["kind"],
        positive_lines=tuple(
            PositiveLine(p["triple_id"], p["property"], p["text"])
            for p in d["positives"]
        ),
        negative_parts=tuple(
            NegativePart(n["concept"], n["text"]) for n in d["negatives"]
        ),
        seed=d["seed"],
        closing=d.get("closing", CLOSING),
        hints=tuple(d["hints"]),
        flags=tuple(d["flags"]),
        solutions=tuple(d["solutions"]),
    )


@dataclass
class GenerationConfig:
    sizes: tuple[int, ...] = DEFAULT_SIZES
    cap: Optional[int] = DEFAULT_CAP  # per concept and kind; None = unlimited
    seed: int = 0
    hint_count: int = DEFAULT_HINT_COUNT


@dataclass
class ConceptReport:
    topic_markers: int = 0
    common: int = 0
    easy: int = 0
    difficult_pairs: int = 0
    capped: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "topic_markers": self.topic_markers,
            "common": self.common,
            "easy": self.easy,
            "difficult_pairs": self.difficult_pairs,
            "capped": self.capped,
            "skipped": self.skipped,
        }


def _stream_rng(seed: int, concept_id: str, stream: str) -> random.Random:
    digest = hashlib.blake2b(f"{concept_id}:{stream}".encode("utf-8"),
                             digest_size=8).digest()
    return random.Random((seed & 0xFFFFFFFFFFFFFFFF) ^ int.from_bytes(digest, "big"))


def riddle_id(kind: str, concept_id: str, triple_ids: tuple[str, ...]) -> str:
    payload = "\x1f".join((kind, concept_id) + triple_ids).encode("utf-8")
    return hashlib.blake2b(payload, digest_size=8).hexdigest()


def get_combinations(triples: list[ClassifiedTriple],
                     sizes: tuple[int, ...] = DEFAULT_SIZES
                     ) -> list[tuple[ClassifiedTriple, ...]]:
    """All unordered selections of the requested sizes, in corpus order."""
    combos: list[tuple[ClassifiedTriple, ...]] = []
    for size in sorted(sizes):
        combos.extend(itertools.combinations(triples, size))
    return combos


def _sample_under_cap(combos: list, cap: Optional[int], rng: random.Random
                      ) -> tuple[list, bool]:
    if cap is None or len(combos) <= cap:
        return combos, False
    picked = sorted(rng.sample(range(len(combos)), cap))
    return [combos[i] for i in picked], True


def generate_easy(concept_id: str, classified: list[ClassifiedTriple],
                  lookup: LookupDictionary,
                  cfg: Optional[GenerationConfig] = None,
                  report: Optional[ConceptReport] = None) -> list[Riddle]:
    """One easy riddle per Topic-Marker combination; needs >= 3 markers."""
    cfg = cfg or GenerationConfig()
    markers = topic_markers(classified)
    if len(markers) < 3:
        if report is not None and markers:
            report.skipped.append(
                f"easy: only {len(markers)} topic markers (need 3)")
        return []
    # The sampling stream is independent of cfg.seed so that changing the
    # generation seed never changes which positive combinations are kept.
    combos, capped = _sample_under_cap(get_combinations(markers, cfg.sizes),
                                       cfg.cap,
                                       _stream_rng(0, concept_id, "easy-sample"))
    if capped and report is not None:
        report.capped.append(f"easy: sampled {cfg.cap} combinations")
    riddles = []
    for combo in combos:
        positives = tuple(
            PositiveLine(ct.triple.id, ct.triple.property, ct.triple.context)
            for ct in combo
        )
        riddles.append(Riddle(
            id=riddle_id(KIND_EASY, concept_id, tuple(p.triple_id for p in positives)),
            concept_id=concept_id,
            kind=KIND_EASY,
            positive_lines=positives,
            negative_parts=(),
            seed=cfg.seed,
        ))
    return riddles


def _solution_like_concepts(properties: list[str], target: str,
                            lookup: LookupDictionary) -> frozenset[str]:
    """Concepts other than the target that satisfy every given property.

    Negative examples must not name a valid answer, so these are filtered
    out of the candidate pools.
    """
    wanted = set(properties)
    return frozenset(
        c for c in lookup.concepts()
        if c != target and wanted <= lookup.properties_of(c)
    )


def select_negative_concept(position: int, positive: ClassifiedTriple,
                            accumulated_props: list[str],
                            candidates: list[str],
                            lookup: LookupDictionary,
                            rng: random.Random) -> tuple[str, bool]:
    """Pick the negative concept for one riddle position.

    Position 0 draws uniformly from the positive's neighbour concepts.
    Later positions take the first neighbour (ascending-distance order)
    whose property set covers every riddle property accumulated so far,
    falling back to a random neighbour when none qualifies.  Returns
    (concept, fallback_used).
    """
    if not candidates:
        raise ValueError("no usable neighbour concepts")
    if position == 0:
        return rng.choice(candidates), False
    wanted = set(accumulated_props)
    for concept in candidates:
        if wanted <= lookup.properties_of(concept):
            return concept, False
    return rng.choice(candidates), True


def negate_property(target_concept: str, neighbor_concept: str,
                    lookup: LookupDictionary, rng: random.Random
                    ) -> tuple[str, bool]:
    """Deny one of the neighbour's properties that the target lacks.

    Returns (line text, degenerate).  When the neighbour has no unique
    property left the line degrades to naming the neighbour itself.
    """
    if neighbor_concept not in lookup:
        raise KeyError(f"unknown neighbour concept {neighbor_concept!r}")
    target_props = lookup.properties_of(target_concept)
    unique = [p for p in lookup.entries[neighbor_concept].properties
              if p not in target_props]
    if not unique:
        return f"I am not {neighbor_concept}", True
    prop = rng.choice(unique)
    triple = lookup.triple_with_property(neighbor_concept, prop)
    return negate_line(triple.relation, triple.property), False


def generate_difficult(concept_id: str, classified: list[ClassifiedTriple],
                       lookup: LookupDictionary,
                       cfg: Optional[GenerationConfig] = None,
                       report: Optional[ConceptReport] = None
                       ) -> list[tuple[Riddle, Riddle]]:
    """(v1, v2) riddle pairs for every usable Common combination.

    The two versions share positives and negative-concept provenance.
    Combinations that cannot take sound negatives are skipped and the
    reasons itemized in the report.
    """
    cfg = cfg or GenerationConfig()
    commons = common_triples(classified)
    if len(commons) < 3:
        if report is not None and commons:
            report.skipped.append(
                f"difficult: only {len(commons)} common triples (need 3)")
        return []
    rng = _stream_rng(cfg.seed, concept_id, "difficult")
    combos, capped = _sample_under_cap(get_combinations(commons, cfg.sizes),
                                       cfg.cap,
                                       _stream_rng(0, concept_id, "difficult-sample"))
    if capped and report is not None:
        report.capped.append(f"difficult: sampled {cfg.cap} combinations")

    pairs: list[tuple[Riddle, Riddle]] = []
    for combo in combos:
        properties = [ct.triple.property for ct in combo]
        excluded = _solution_like_concepts(properties, concept_id, lookup)
        flags: list[str] = []
        accumulated: list[str] = []
        negatives: list[str] = []
        skip_reason = None
        for position, ct in enumerate(combo):
            accumulated.append(ct.triple.property)
            candidates = [c for c in ct.label.neighbor_concepts if c not in excluded]
            if not candidates:
                why = ("no neighbour concepts" if not ct.label.neighbor_concepts
                       else "every neighbour solves the riddle")
                skip_reason = f"{ct.triple.property!r} at position {position}: {why}"
                break
            concept, fallback = select_negative_concept(
                position, ct, accumulated, candidates, lookup, rng)
            if fallback:
                flags.append(f"fallback_negative:{position}")
            negatives.append(concept)
        if skip_reason is not None:
            if report is not None:
                report.skipped.append(f"difficult: {skip_reason}")
            continue

        v2_parts = []
        for concept in negatives:
            text, degenerate = negate_property(concept_id, concept, lookup, rng)
            if degenerate:
                flags.append(f"degenerate_negation:{concept}")
            v2_parts.append(NegativePart(concept, text))
        positives = tuple(
            PositiveLine(ct.triple.id, ct.triple.property, ct.triple.context)
            for ct in combo
        )
        triple_ids = tuple(p.triple_id for p in positives)
        v1 = Riddle(
            id=riddle_id(KIND_DIFFICULT_V1, concept_id, triple_ids),
            concept_id=concept_id,
            kind=KIND_DIFFICULT_V1,
            positive_lines=positives,
            negative_parts=tuple(NegativePart(c, f"I am not {c}") for c in negatives),
            seed=cfg.seed,
            flags=tuple(flags),
        )
        v2 = Riddle(
            id=riddle_id(KIND_DIFFICULT_V2, concept_id, triple_ids),
            concept_id=concept_id,
            kind=KIND_DIFFICULT_V2,
            positive_lines=positives,
            negative_parts=tuple(v2_parts),
            seed=cfg.seed,
            flags=tuple(flags),
        )
        pairs.append((v1, v2))
    return pairs


def attach_hints(riddle: Riddle, classified: list[ClassifiedTriple],
                 hint_count: int = DEFAULT_HINT_COUNT) -> Riddle:
    """Attach up to hint_count Topic-Marker sentences as hints.

    Only difficult riddles take hints; markers already used as riddle lines
    are skipped, and a short or empty hint list is flagged.
    """
    if not riddle.is_difficult:
        raise ValueError("hints are only attached to difficult riddles")
    used = {pl.text for pl in riddle.positive_lines}
    hints = []
    for ct in topic_markers(classified):
        if ct.triple.context in used:
            continue
        hints.append(f"{ct.triple.context}.")
        if len(hints) == hint_count:
            break
    flags = list(riddle.flags)
    if not hints:
        flags.append("no_hints")
    elif len(hints) < hint_count:
        flags.append("short_hints")
    return replace(riddle, hints=tuple(hints), flags=tuple(flags))


def generate_for_concept(concept_id: str,
                         classified: list[ClassifiedTriple],
                         lookup: LookupDictionary,
                         cfg: Optional[GenerationConfig] = None
                         ) -> tuple[list[Riddle], ConceptReport]:
    cfg = cfg or GenerationConfig()
    report = ConceptReport(
        topic_markers=len(topic_markers(classified)),
        common=len(common_triples(classified)),
    )
    riddles = generate_easy(concept_id, classified, lookup, cfg, report)
    report.easy = len(riddles)
    pairs = generate_difficult(concept_id, classified, lookup, cfg, report)
    report.difficult_pairs = len(pairs)
    for v1, v2 in pairs:
        riddles.append(attach_hints(v1, classified, cfg.hint_count))
        riddles.append(attach_hints(v2, classified, cfg.hint_count))
    return riddles, report


def generate_corpus(classified_map: dict[str, list[ClassifiedTriple]],
                    lookup: LookupDictionary,
                    cfg: Optional[GenerationConfig] = None
                    ) -> tuple[list[Riddle], dict]:
    """Generate riddles for every concept, deterministically ordered."""
    cfg = cfg or GenerationConfig()
    riddles: list[Riddle] = []
    reports: dict[str, dict] = {}
    for concept in sorted(classified_map):
        concept_riddles, report = generate_for_concept(
            concept, classified_map[concept], lookup, cfg)
        riddles.extend(concept_riddles)
        reports[concept] = report.to_dict()
    meta = {
        "seed": cfg.seed,
        "sizes": list(cfg.sizes),
        "cap": cfg.cap,
        "hint_count": cfg.hint_count,
        "concepts": reports,
    }
    return riddles, meta


def write_riddles_json(riddles: list[Riddle], meta: dict, path: str | Path) -> None:
    payload = {"meta": meta, "riddles": [r.to_dict() for r in riddles]}
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_riddles_json(path: str | Path) -> tuple[list[Riddle], dict]:
    with Path(path).open(encoding="utf-8") as fh:
        payload = json.load(fh)
    return [riddle_from_dict(d) for d in payload["riddles"]], payload.get("meta", {})
