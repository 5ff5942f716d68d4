"""Solution sets and answer adjudication.

A riddle's solutions are every concept whose property set contains all of
the riddle's positive properties; negative lines never constrain the set.
That means a difficult riddle can have perfectly valid answers besides its
target (the lookup dictionary makes them enumerable), and guesses are
checked against the whole set.
"""

from __future__ import annotations

import json
import re
from dataclasses import replace
from pathlib import Path
from typing import Optional

from .generate import Riddle
from .triples import LookupDictionary

_WHITESPACE = re.compile(r"\s+")


class CorpusMismatchError(ValueError):
    """A riddle references properties unknown to the lookup dictionary."""


def normalize_term(text: str) -> str:
    return _WHITESPACE.sub(" ", text.strip().casefold())


def solve(riddle: Riddle, lookup: LookupDictionary) -> list[str]:
    """All concepts satisfying every positive property; target listed first,
    the rest alphabetical."""
    wanted = [normalize_term(pl.property) for pl in riddle.positive_lines]
    known = {
        concept: {normalize_term(p) for p in lookup.properties_of(concept)}
        for concept in lookup.concepts()
    }
    for prop in wanted:
        if not any(prop in props for props in known.values()):
            raise CorpusMismatchError(
                f"riddle {riddle.id} references property {prop!r} "
                f"absent from the lookup dictionary")
    solutions = sorted(
        concept for concept, props in known.items()
        if all(p in props for p in wanted)
    )
    if riddle.concept_id not in solutions:
        raise CorpusMismatchError(
            f"target {riddle.concept_id!r} does not satisfy riddle {riddle.id}; "
            f"the riddle and lookup dictionary disagree")
    solutions.remove(riddle.concept_id)
    return [riddle.concept_id] + solutions


def attach_solutions(riddles: list[Riddle], lookup: LookupDictionary
                     ) -> list[Riddle]:
    return [replace(r, solutions=tuple(solve(r, lookup))) for r in riddles]


def load_aliases(path: str | Path) -> dict[str, str]:
    """Alias file: a JSON map of alias -> concept id."""
    with Path(path).open(encoding="utf-8") as fh:
        raw = json.load(fh)
    return {normalize_term(k): normalize_term(v) for k, v in raw.items()}


def verify_answer(guess: str, solutions: list[str],
                  aliases: Optional[dict[str, str]] = None
                  ) -> tuple[bool, Optional[str]]:
    """Adjudicate a guess against a solution set.

    Returns (correct, matched concept).  Matching is exact after
    normalization (trim, casefold, whitespace collapse), optionally routed
    through a registered alias.
    """
    if not guess.strip():
        raise ValueError("guess must be non-empty")
    normalized = normalize_term(guess)
    if aliases and normalized in aliases:
        normalized = aliases[normalized]
    by_norm = {normalize_term(s): s for s in solutions}
    if normalized in by_norm:
        return True, by_norm[normalized]
    return False, None


def recheck_export(riddles: list[Riddle], lookup: LookupDictionary
                   ) -> list[str]:
    """Re-derive every solution set and report mismatches (empty = clean)."""
    problems = []
    for riddle in riddles:
        try:
            fresh = solve(riddle, lookup)
        except CorpusMismatchError as exc:
            problems.append(str(exc))
            continue
        if list(riddle.solutions) != fresh:
            problems.append(
                f"riddle {riddle.id}: stored solutions {list(riddle.solutions)} "
                f"!= recomputed {fresh}")
    return problems
