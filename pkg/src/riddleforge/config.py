"""Pipeline configuration: one declarative JSON file, environment overrides
with a RIDDLE_ prefix, command-line flags on top.

The defaults reproduce the reference constants: extraction with ngrams up
to 3, dedup threshold 0.9, window 1, top 20 per branch; k = 5 neighbours;
3/4/5-sentence combinations.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    # corpus
    corpus_path: str = ""
    corpus_format: str = "text-dir"  # text-dir | text-jsonl | triples-jsonl | triples-tsv
    # extraction
    max_ngram: int = 3
    dedup_threshold: float = 0.9
    window: int = 1
    top_k: int = 20
    # relation prediction
    predictor: str = "rules"  # rules | constant | service
    predictor_url: Optional[str] = None
    predictor_threshold: float = 0.5
    # embedding
    embedder: str = "hashed"  # hashed | file | service
    dimension: int = 256
    embed_seed: int = 0
    embeddings_path: Optional[str] = None
    embedder_url: Optional[str] = None
    # neighbour search
    k: int = 5
    include_self: bool = False
    max_distance: Optional[float] = None
    # generation
    sizes: tuple[int, ...] = (3, 4, 5)
    cap: Optional[int] = 50
    seed: int = 0
    hint_count: int = 2
    # service
    journal_path: Optional[str] = None
    reveal_on_failure: bool = True
    # output
    out_dir: str = "out"

    def validate(self) -> None:
        if self.corpus_format not in ("text-dir", "text-jsonl",
                                      "triples-jsonl", "triples-tsv"):
            raise ConfigError(f"unknown corpus_format {self.corpus_format!r}")
        if self.predictor not in ("rules", "constant", "service"):
            raise ConfigError(f"unknown predictor {self.predictor!r}")
        if self.embedder not in ("hashed", "file", "service"):
            raise ConfigError(f"unknown embedder {self.embedder!r}")
        if self.embedder == "file" and not self.embeddings_path:
            raise ConfigError("embedder 'file' requires embeddings_path")
        if self.embedder == "service" and not self.embedder_url:
            raise ConfigError("embedder 'service' requires embedder_url")
        if self.predictor == "service" and not self.predictor_url:
            raise ConfigError("predictor 'service' requires predictor_url")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if any(s < 3 or s > 5 for s in self.sizes):
            raise ConfigError("combination sizes must be within 3..5")
        if self.cap is not None and self.cap < 1:
            raise ConfigError("cap must be >= 1 or null")
        if self.hint_count < 0:
            raise ConfigError("hint_count must be >= 0")

    # paths for stage artifacts inside out_dir
    def artifact(self, name: str) -> Path:
        return Path(self.out_dir) / name


_INT_FIELDS = {"max_ngram", "window", "top_k", "dimension", "embed_seed",
               "k", "seed", "hint_count"}
_FLOAT_FIELDS = {"dedup_threshold", "predictor_threshold"}
_BOOL_FIELDS = {"include_self", "reveal_on_failure"}
_OPTIONAL_INT = {"cap"}
_OPTIONAL_FLOAT = {"max_distance"}


def _coerce(name: str, value):
    if value is None:
        return None
    if name in _INT_FIELDS:
        return int(value)
    if name in _OPTIONAL_INT:
        return None if value in ("", "null", "none") else int(value)
    if name in _FLOAT_FIELDS:
        return float(value)
    if name in _OPTIONAL_FLOAT:
        return None if value in ("", "null", "none") else float(value)
    if name in _BOOL_FIELDS:
        if isinstance(value, bool):
            return value
        return str(value).strip().lower() in ("1", "true", "yes", "on")
    if name == "sizes":
        if isinstance(value, str):
            value = [int(v) for v in value.split(",") if v.strip()]
        return tuple(int(v) for v in value)
    return value


def load_config(path: Optional[str] = None, overrides: Optional[dict] = None,
                env: Optional[dict] = None) -> PipelineConfig:
    """Build the effective config: file < RIDDLE_* environment < overrides."""
    cfg = PipelineConfig()
    known = {f.name for f in fields(PipelineConfig)}

    if path:
        file_path = Path(path)
        if not file_path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw = json.loads(file_path.read_text(encoding="utf-8"))
        except ValueError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        for key, value in raw.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r} in {path}")
            setattr(cfg, key, _coerce(key, value))

    env = os.environ if env is None else env
    for key, value in env.items():
        if not key.startswith("RIDDLE_"):
            continue
        name = key[len("RIDDLE_"):].lower()
        if name in known:
            setattr(cfg, name, _coerce(name, value))

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in known:
            raise ConfigError(f"unknown config override {key!r}")
        setattr(cfg, key, _coerce(key, value))

    cfg.validate()
    return cfg
