"""Fixed surface-rewriting rules for triple sentences.

Two rewrites live here: anonymization (turning "dog can bark" into the
first-person context "I can bark") and negation rendering ("I don't have a
trunk").  Both are versioned rule tables rather than a grammar model so the
pipeline output is reproducible byte for byte.
"""

from __future__ import annotations

import re

RULES_VERSION = 1


class AnonymizationError(ValueError):
    """The concept name could not be removed from a sentence."""


# Person agreement for the first predicate token once the subject is "I".
_FIRST_TOKEN_MAP = {
    "is": "am",
    "was": "am",
    "has": "have",
    "does": "do",
}

# Tokens that end in "s" but are not third-person verb forms.
_NOT_THIRD_PERSON = {
    "is", "was", "has", "does", "as", "its", "this", "thus", "always",
    "various", "plus", "perhaps", "across", "towards", "sometimes",
}

# Whole-predicate rewrites, matched longest-first before token rules.
# These swallow the "I" subject entirely.
_SPECIAL_PREDICATES = [
    ("is likely to be found in", "You are likely to find me in"),
    ("is likely to be found on", "You are likely to find me on"),
]


def _deinflect(token: str) -> str:
    """Strip a third-person -s/-es where the rule table allows it."""
    if token in _NOT_THIRD_PERSON or len(token) < 3:
        return token
    if token.endswith("ss") or token.endswith("us"):
        return token
    if token.endswith("ies"):
        return token[:-3] + "y"
    if token.endswith(("ches", "shes", "xes", "zes", "sses", "oes")):
        return token[:-2]
    if token.endswith("s"):
        return token[:-1]
    return token


def adjust_person(predicate: str) -> str:
    """Rewrite a third-person predicate so it agrees with an "I" subject."""
    tokens = predicate.split()
    if not tokens:
        return predicate
    head = tokens[0]
    if head in _FIRST_TOKEN_MAP:
        tokens[0] = _FIRST_TOKEN_MAP[head]
    else:
        tokens[0] = _deinflect(head)
    return " ".join(tokens)


def _strip_residual_mentions(context: str, concept: str) -> str:
    escaped = re.escape(concept)
    context = re.sub(r"\b%s's\b" % escaped, "my", context, flags=re.IGNORECASE)
    return re.sub(r"\b%s\b" % escaped, "me", context, flags=re.IGNORECASE)


def anonymize(surface: str, concept_id: str) -> str:
    """Replace the concept subject with first person and fix agreement.

    The result must not contain the concept name anywhere; residual
    mid-sentence mentions are rewritten ("dog's" -> "my", "dog" -> "me") and
    if the name still survives as a substring an AnonymizationError is
    raised so the caller can drop the triple.
    """
    concept = concept_id.strip().lower()
    text = surface.strip()
    if not concept:
        raise ValueError("concept_id must be non-empty")
    if not text.lower().startswith(concept):
        raise ValueError(f"surface does not start with concept {concept!r}: {text!r}")

    predicate = text[len(concept):].strip()
    for pattern, replacement in _SPECIAL_PREDICATES:
        if predicate == pattern or predicate.startswith(pattern + " "):
            context = replacement + predicate[len(pattern):]
            break
    else:
        context = "I " + adjust_person(predicate)

    context = _strip_residual_mentions(context, concept)
    if concept in context.lower():
        raise AnonymizationError(
            f"concept {concept!r} still present after anonymization: {context!r}"
        )
    return context


def negate_line(relation: str, prop: str) -> str:
    """Render a neighbour's (relation, property) as a first-person denial.

    "has"/"have"   -> I don't have <p>
    "can"          -> I can't <p>
    "is"/"am" ...  -> I am not <rest> <p>   (covers "is a", "is related to")
    other verbs    -> I don't <base verb> <rest> <p>   ("likes" -> like)
    """
    tokens = relation.strip().lower().split()
    prop = prop.strip()
    if not tokens:
        return f"I am not {prop}"
    head, rest = tokens[0], tokens[1:]
    tail = " ".join(rest + [prop]) if rest else prop
    if head in ("has", "have"):
        return f"I don't have {tail}"
    if head == "can":
        return f"I can't {tail}"
    if head in ("is", "am", "are", "was", "were"):
        return f"I am not {tail}"
    base = _FIRST_TOKEN_MAP.get(head, _deinflect(head))
    if base != head or head in ("want", "like", "need", "eat", "love"):
        return f"I don't {' '.join([base] + rest + [prop])}"
    return f"I am not {tail}"
