import json

import pytest

from riddleforge.config import ConfigError, PipelineConfig, load_config


class TestDefaults:
    def test_reference_constants(self):
        cfg = PipelineConfig()
        assert cfg.max_ngram == 3
        assert cfg.dedup_threshold == 0.9
        assert cfg.window == 1
        assert cfg.top_k == 20
        assert cfg.k == 5
        assert cfg.predictor_threshold == 0.5
        assert cfg.sizes == (3, 4, 5)
        assert cfg.include_self is False

    def test_validates_out_of_the_box(self):
        PipelineConfig().validate()


class TestLoadConfig:
    def test_file_values_applied(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"k": 7, "seed": 99, "cap": None,
                                    "sizes": [3, 4]}))
        cfg = load_config(str(path), env={})
        assert cfg.k == 7 and cfg.seed == 99 and cfg.cap is None
        assert cfg.sizes == (3, 4)

    def test_env_overrides_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"k": 7}))
        cfg = load_config(str(path), env={"RIDDLE_K": "9",
                                          "RIDDLE_INCLUDE_SELF": "true"})
        assert cfg.k == 9
        assert cfg.include_self is True

    def test_flags_override_env(self, tmp_path):
        cfg = load_config(None, overrides={"seed": 5}, env={"RIDDLE_SEED": "4"})
        assert cfg.seed == 5

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"mystery": 1}))
        with pytest.raises(ConfigError):
            load_config(str(path), env={})

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "nope.json"), env={})

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config(str(path), env={})

    def test_validation_errors(self):
        with pytest.raises(ConfigError):
            load_config(None, overrides={"embedder": "file"}, env={})
        with pytest.raises(ConfigError):
            load_config(None, overrides={"corpus_format": "parquet"}, env={})
        with pytest.raises(ConfigError):
            load_config(None, overrides={"k": 0}, env={})
        with pytest.raises(ConfigError):
            load_config(None, overrides={"sizes": "2,3"}, env={})
