"""Single-document statistical keyphrase extraction.

Terms are scored with document-local statistics only (frequency, casing,
sentence position, neighbour diversity, sentence spread); no reference
corpus is needed.  Lower scores mean more important.  Phrases are contiguous
runs of content words, re-scored from their member terms.

Scoring formula, per lower-cased term t:

    casing(t)   = max(#ALLCAPS(t), #Proper(t)) / (1 + ln(tf))
    position(t) = ln(ln(3 + median sentence index of t))
    frequency(t)= tf / (mean_tf + std_tf)
    relate(t)   = 1 + (dl + dr) * tf / max_tf
                  dl, dr = distinct left/right neighbours within the window
                  divided by total left/right co-occurrences
    spread(t)   = #sentences containing t / #sentences
    score(t)    = relate * position / (casing + frequency/relate + spread/relate)

and per candidate phrase p = t1..tn:

    score(p) = prod(score(ti)) / (tf(p) * (1 + sum(score(ti))))
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from difflib import SequenceMatcher
from statistics import median
from typing import Callable, Optional

_SENTENCE_SPLIT = re.compile(r"[.!?;\n]+")
_TOKEN = re.compile(r"[A-Za-z][A-Za-z'\-]*")

DEFAULT_STOPWORDS = frozenset("""
a about above after again against all am an and any are as at be because been
before being below between both but by can cannot could did do does doing down
during each few for from further had has have having he her here hers herself
him himself his how i if in into is it its itself just me more most my myself
no nor not now of off on once only or other our ours ourselves out over own
same she should so some such than that the their theirs them themselves then
there these they this those through to too under until up very was we were
what when where which while who whom why will with would you your yours
yourself yourselves
""".split())


@dataclass
class ExtractionConfig:
    max_ngram: int = 3
    dedup_threshold: float = 0.9
    window: int = 1
    top_k: int = 20
    max_candidates: int = 30
    stopwords: frozenset = DEFAULT_STOPWORDS


@dataclass
class _TermStats:
    tf: int = 0
    tf_upper: int = 0
    tf_proper: int = 0
    sentence_ids: set = field(default_factory=set)
    left: list = field(default_factory=list)
    right: list = field(default_factory=list)


def sentences_of(text: str) -> list[list[str]]:
    """Split text into sentences of word tokens, original casing kept."""
    out = []
    for chunk in _SENTENCE_SPLIT.split(text):
        tokens = _TOKEN.findall(chunk)
        if tokens:
            out.append(tokens)
    return out


def term_scores(sentences: list[list[str]], window: int = 1,
                stopwords: frozenset = DEFAULT_STOPWORDS) -> dict[str, float]:
    """Score every content term in the document; lower is more important."""
    stats: dict[str, _TermStats] = {}
    for s_idx, sent in enumerate(sentences):
        lowered = [t.lower() for t in sent]
        for pos, tok in enumerate(sent):
            low = lowered[pos]
            if low in stopwords:
                continue
            st = stats.setdefault(low, _TermStats())
            st.tf += 1
            if len(tok) > 1 and tok.isupper():
                st.tf_upper += 1
            elif tok[0].isupper() and pos > 0:
                st.tf_proper += 1
            st.sentence_ids.add(s_idx)
            lo = max(0, pos - window)
            hi = min(len(sent), pos + window + 1)
            st.left.extend(lowered[lo:pos])
            st.right.extend(lowered[pos + 1:hi])

    if not stats:
        return {}
    tfs = [st.tf for st in stats.values()]
    mean_tf = sum(tfs) / len(tfs)
    std_tf = math.sqrt(sum((v - mean_tf) ** 2 for v in tfs) / len(tfs))
    max_tf = max(tfs)
    n_sentences = max(1, len(sentences))

    scores = {}
    for term, st in stats.items():
        casing = max(st.tf_upper, st.tf_proper) / (1.0 + math.log(st.tf))
        position = math.log(math.log(3.0 + median(sorted(st.sentence_ids))))
        frequency = st.tf / (mean_tf + std_tf)
        dl = len(set(st.left)) / len(st.left) if st.left else 0.0
        dr = len(set(st.right)) / len(st.right) if st.right else 0.0
        relate = 1.0 + (dl + dr) * st.tf / max_tf
        spread = len(st.sentence_ids) / n_sentences
        scores[term] = relate * position / (casing + frequency / relate + spread / relate)
    return scores


def _candidate_phrases(sentences: list[list[str]], max_ngram: int,
                       stopwords: frozenset) -> dict[str, int]:
    """Phrase -> tf, where phrases are n-grams of contiguous content words."""
    counts: dict[str, int] = {}
    for sent in sentences:
        run: list[str] = []
        runs: list[list[str]] = []
        for tok in sent:
            low = tok.lower()
            if low in stopwords or len(low) < 2:
                if run:
                    runs.append(run)
                run = []
            else:
                run.append(low)
        if run:
            runs.append(run)
        for run in runs:
            for n in range(1, max_ngram + 1):
                for i in range(len(run) - n + 1):
                    phrase = " ".join(run[i:i + n])
                    counts[phrase] = counts.get(phrase, 0) + 1
    return counts


def phrase_score(phrase: str, tf: int, scores: dict[str, float]) -> float:
    terms = phrase.split()
    prod = 1.0
    total = 0.0
    for t in terms:
        s = scores.get(t, 1.0)
        prod *= s
        total += s
    return prod / (tf * (1.0 + total))


def similarity(a: str, b: str) -> float:
    """Sequence similarity in [0, 1] used for near-duplicate collapsing."""
    return SequenceMatcher(None, a, b).ratio()


def dedupe_ranked(ranked: list[tuple[str, float]], threshold: float,
                  limit: int) -> list[tuple[str, float]]:
    """Walk best-first, dropping phrases too similar to an already-kept one."""
    kept: list[tuple[str, float]] = []
    for phrase, score in ranked:
        if any(similarity(phrase, k) >= threshold for k, _ in kept):
            continue
        kept.append((phrase, score))
        if len(kept) >= limit:
            break
    return kept


def extract_keyphrases(text: str, cfg: Optional[ExtractionConfig] = None
                       ) -> list[tuple[str, float]]:
    """Top keyphrases of a single document, sorted by ascending score."""
    cfg = cfg or ExtractionConfig()
    sents = sentences_of(text)
    if not sents:
        return []
    scores = term_scores(sents, cfg.window, cfg.stopwords)
    counts = _candidate_phrases(sents, cfg.max_ngram, cfg.stopwords)
    ranked = sorted(
        ((p, phrase_score(p, tf, scores)) for p, tf in counts.items()),
        key=lambda item: (item[1], item[0]),
    )
    return dedupe_ranked(ranked, cfg.dedup_threshold, cfg.top_k)


# A tagger maps tokens to coarse tags: "NOUN", "ADJ", "VERB", "OTHER".
PosTagger = Callable[[list[str]], list[tuple[str, str]]]

_ADJ_SUFFIXES = ("ous", "ful", "ive", "able", "ible", "ic", "ish", "less", "ary")
_VERB_SUFFIXES = ("ing", "ize", "ise")
_KNOWN_ADJ = frozenset(
    "loyal friendly large small wild domestic social fast slow strong old young "
    "common popular native nocturnal aquatic venomous".split()
)


def naive_pos_tagger(tokens: list[str]) -> list[tuple[str, str]]:
    """Suffix/lexicon heuristic tagger; a real tagger can be plugged instead."""
    tagged = []
    for tok in tokens:
        low = tok.lower()
        if low in _KNOWN_ADJ or low.endswith(_ADJ_SUFFIXES):
            tag = "ADJ"
        elif low.endswith(_VERB_SUFFIXES):
            tag = "VERB"
        else:
            tag = "NOUN"
        tagged.append((tok, tag))
    return tagged


def pattern_phrases(text: str, tagger: PosTagger, cfg: ExtractionConfig,
                    scores: Optional[dict[str, float]] = None
                    ) -> list[tuple[str, float]]:
    """Adjective/noun phrases per the tagger, scored with the term statistics."""
    sents = sentences_of(text)
    if not sents:
        return []
    if scores is None:
        scores = term_scores(sents, cfg.window, cfg.stopwords)
    counts: dict[str, int] = {}
    for sent in sents:
        tagged = tagger(sent)
        run: list[str] = []
        for tok, tag in tagged:
            low = tok.lower()
            if tag in ("ADJ", "NOUN", "VERB") and low not in cfg.stopwords and len(low) > 1:
                run.append(low)
            else:
                run = []
                continue
            for n in range(1, min(cfg.max_ngram, len(run)) + 1):
                phrase = " ".join(run[-n:])
                counts[phrase] = counts.get(phrase, 0) + 1
    ranked = sorted(
        ((p, phrase_score(p, tf, scores)) for p, tf in counts.items()),
        key=lambda item: (item[1], item[0]),
    )
    return dedupe_ranked(ranked, cfg.dedup_threshold, cfg.top_k)
