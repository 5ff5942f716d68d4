"""Relation prediction between a concept and an extracted property.

Three interchangeable predictors: a built-in rule table (the default, fully
offline), a constant fallback, and a client for an external masked-token
prediction service.  Every predictor is total: it always returns a
non-empty relation string.
"""

from __future__ import annotations

import logging
import re
from typing import Optional, Protocol

import httpx

log = logging.getLogger(__name__)

FALLBACK_RELATION = "is related to"
DEFAULT_THRESHOLD = 0.5


class RelationPredictor(Protocol):
    def predict(self, concept_id: str, prop: str) -> str: ...


# Small action-verb lexicon for the rule table; heads found here map to "can".
_VERBS = frozenset("""
bark run swim fly jump climb eat hunt guard play sing dig bite fetch chase
purr roar squeak crawl hop gallop sting swing kick scratch howl growl graze
burrow herd pounce glide slither buzz peck
""".split())

_ADJ_SUFFIXES = ("ous", "ful", "ive", "able", "ible", "ic", "ish", "less")
_ADJ_WORDS = frozenset(
    "loyal friendly large small wild domestic social fast slow strong "
    "intelligent gentle fierce tame common nocturnal aquatic venomous furry".split()
)

_VOWELS = "aeiou"


def _is_plural_noun(token: str) -> bool:
    if len(token) < 3 or token.endswith("ss") or token.endswith("us"):
        return False
    return token.endswith("s")


class RuleBasedPredictor:
    """Map a property to a relation from the shape of its head/last token.

    verbal head      -> "can"
    adjectival token -> "is"
    singular noun    -> "is a"
    anything else    -> "is related to"
    """

    name = "rules"

    def predict(self, concept_id: str, prop: str) -> str:
        tokens = prop.strip().lower().split()
        if not tokens:
            return FALLBACK_RELATION
        head, last = tokens[0], tokens[-1]
        if head in _VERBS:
            return "can"
        if len(tokens) == 1 and (head in _ADJ_WORDS or head.endswith(_ADJ_SUFFIXES)):
            return "is"
        if _is_plural_noun(last):
            return FALLBACK_RELATION
        if last[0] in _VOWELS:
            return "is an"
        return "is a"


class ConstantPredictor:
    name = "constant"

    def __init__(self, relation: str = FALLBACK_RELATION):
        if not relation.strip():
            raise ValueError("relation must be non-empty")
        self.relation = relation

    def predict(self, concept_id: str, prop: str) -> str:
        return self.relation


_WORDLIKE = re.compile(r"^[a-z][a-z ]*$")


class MaskedTokenClient:
    """Client for an external masked-token prediction service.

    Protocol: POST {"template": "<concept> [MASK] <property>"} to /predict;
    the response is {"tokens": [{"token": ..., "score": ...}, ...]} sorted by
    descending score.  Low-confidence or non-word answers fall back to
    "is related to"; an unreachable service falls back to the rule table and
    the failure is counted in service_failures.
    """

    name = "service"

    def __init__(self, base_url: str, threshold: float = DEFAULT_THRESHOLD,
                 fallback: Optional[RelationPredictor] = None,
                 timeout: float = 5.0,
                 transport: Optional[httpx.BaseTransport] = None):
        self.threshold = threshold
        self.fallback = fallback or RuleBasedPredictor()
        self.service_failures = 0
        self._client = httpx.Client(base_url=base_url, timeout=timeout,
                                    transport=transport)

    def predict(self, concept_id: str, prop: str) -> str:
        template = f"{concept_id} [MASK] {prop}"
        try:
            response = self._client.post("/predict", json={"template": template})
            response.raise_for_status()
            tokens = response.json()["tokens"]
        except (httpx.HTTPError, KeyError, ValueError) as exc:
            self.service_failures += 1
            log.warning("relation service unavailable (%s); using rule table", exc)
            return self.fallback.predict(concept_id, prop)
        if not tokens:
            return FALLBACK_RELATION
        best = tokens[0]
        token = str(best.get("token", "")).strip().lower()
        score = float(best.get("score", 0.0))
        if score < self.threshold or not _WORDLIKE.match(token):
            return FALLBACK_RELATION
        return token

    def close(self) -> None:
        self._client.close()


def make_predictor(name: str, url: Optional[str] = None,
                   threshold: float = DEFAULT_THRESHOLD) -> RelationPredictor:
    if name == "rules":
        return RuleBasedPredictor()
    if name == "constant":
        return ConstantPredictor()
    if name == "service":
        if not url:
            raise ValueError("predictor 'service' requires a url")
        return MaskedTokenClient(url, threshold=threshold)
    raise ValueError(f"unknown relation predictor {name!r}")
