import hashlib
import json

from riddleforge.cli import main

from conftest import (WORKED_EXAMPLE_DIMENSION, WORKED_EXAMPLE_EMBED_SEED, WORKED_EXAMPLE_K,
                      WORKED_EXAMPLE_TSV)


def write_config(tmp_path, **extra) -> str:
    cfg = {
        "corpus_path": str(WORKED_EXAMPLE_TSV),
        "corpus_format": "triples-tsv",
        "embedder": "hashed",
        "dimension": WORKED_EXAMPLE_DIMENSION,
        "embed_seed": WORKED_EXAMPLE_EMBED_SEED,
        "k": WORKED_EXAMPLE_K,
        "seed": 0,
        "out_dir": str(tmp_path / "out"),
    }
    cfg.update(extra)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def run_pipeline(config: str) -> None:
    for command in ("ingest", "classify", "generate", "validate"):
        assert main(["--config", config, command]) == 0


class TestPipeline:
    def test_full_pipeline_artifacts(self, tmp_path, capsys):
        config = write_config(tmp_path)
        run_pipeline(config)
        out = tmp_path / "out"
        for name in ("triples.jsonl", "lookup.json", "ingest_report.json",
                     "classified.jsonl", "classify_report.json", "riddles.json"):
            assert (out / name).is_file(), name
        captured = capsys.readouterr().out
        assert "dog: 4 topic markers / 9 common" in captured

    def test_lookup_export_sorted_keys(self, tmp_path):
        config = write_config(tmp_path)
        assert main(["--config", config, "ingest"]) == 0
        lookup = json.loads((tmp_path / "out" / "lookup.json").read_text())
        assert list(lookup) == sorted(lookup)

    def test_determinism_same_hash(self, tmp_path):
        digests = []
        for run in ("a", "b"):
            base = tmp_path / run
            base.mkdir()
            config = write_config(base)
            run_pipeline(config)
            payload = (base / "out" / "riddles.json").read_bytes()
            digests.append(hashlib.sha256(payload).hexdigest())
        assert digests[0] == digests[1]

    def test_classify_requires_ingest(self, tmp_path):
        config = write_config(tmp_path)
        assert main(["--config", config, "classify"]) == 1

    def test_generate_requires_classify(self, tmp_path):
        config = write_config(tmp_path)
        assert main(["--config", config, "ingest"]) == 0
        assert main(["--config", config, "generate"]) == 1

    def test_text_corpus_ingest(self, tmp_path, capsys):
        corpus = tmp_path / "docs"
        corpus.mkdir()
        for i in range(5):
            (corpus / f"thing{i}.txt").write_text(
                f"The thing{i} has a shiny widget{i}. It has a shiny widget{i} "
                f"every day. A shiny widget{i} is rare.")
        config = write_config(tmp_path, corpus_path=str(corpus),
                              corpus_format="text-dir")
        assert main(["--config", config, "ingest"]) == 0
        lookup = json.loads((tmp_path / "out" / "lookup.json").read_text())
        assert len(lookup) == 5

    def test_mixed_valid_invalid_triples_reported(self, tmp_path):
        data = tmp_path / "mixed.tsv"
        data.write_text("dog\tcan\tbark\nbroken row\ncat\tis a\tpet\n"
                        "owl\tcan\tfly\nfox\tis a\tcanid\n")
        config = write_config(tmp_path, corpus_path=str(data))
        assert main(["--config", config, "ingest"]) == 0
        report = json.loads((tmp_path / "out" / "ingest_report.json").read_text())
        assert report["malformed"] == [{"line": 2, "reason": "expected 3 columns, got 1"}]

    def test_config_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"embedder": "quantum"}')
        assert main(["--config", str(bad), "ingest"]) == 2

    def test_missing_config_file(self, tmp_path):
        assert main(["--config", str(tmp_path / "nope.json"), "ingest"]) == 2

    def test_validate_detects_stale_export(self, tmp_path):
        config = write_config(tmp_path)
        run_pipeline(config)
        riddles_path = tmp_path / "out" / "riddles.json"
        payload = json.loads(riddles_path.read_text())
        payload["riddles"][0]["solutions"] = ["wrong answer"]
        riddles_path.write_text(json.dumps(payload))
        assert main(["--config", config, "validate"]) == 1

    def test_corpus_error_exit_code(self, tmp_path):
        config = write_config(tmp_path, corpus_path=str(tmp_path / "missing.tsv"))
        assert main(["--config", config, "ingest"]) == 3

    def test_seed_flag_overrides_config(self, tmp_path):
        config = write_config(tmp_path)
        run_pipeline(config)
        base = json.loads((tmp_path / "out" / "riddles.json").read_text())
        assert main(["--config", config, "--seed", "77", "generate"]) == 0
        reseeded = json.loads((tmp_path / "out" / "riddles.json").read_text())
        assert base["meta"]["seed"] == 0
        assert reseeded["meta"]["seed"] == 77


class TestRiddleExportSchema:
    def test_export_fields(self, tmp_path):
        config = write_config(tmp_path)
        run_pipeline(config)
        payload = json.loads((tmp_path / "out" / "riddles.json").read_text())
        assert {"meta", "riddles"} <= set(payload)
        for riddle in payload["riddles"]:
            assert {"id", "concept", "kind", "lines", "hints", "solutions",
                    "seed", "flags"} <= set(riddle)
            assert riddle["solutions"], "solutions must be filled before export"
            assert riddle["kind"] in ("easy", "difficult_v1", "difficult_v2")


class TestKindFilter:
    def test_easy_only_export(self, tmp_path):
        config = write_config(tmp_path)
        assert main(["--config", config, "ingest"]) == 0
        assert main(["--config", config, "classify"]) == 0
        assert main(["--config", config, "generate", "--kind", "easy"]) == 0
        payload = json.loads((tmp_path / "out" / "riddles.json").read_text())
        kinds = {r["kind"] for r in payload["riddles"]}
        assert kinds == {"easy"}
