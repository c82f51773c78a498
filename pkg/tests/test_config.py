"""Tests for config module."""

import argparse

import pytest


@pytest.fixture
def config_dir(tmp_path, monkeypatch):
    """Set up a temporary config directory."""
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path))
    return tmp_path / "cdslab"


def run_args(config, **kwargs):
    fields = {"config": str(config), "paths": None, "steps": None, "seed": None, "workers": None, "out": None}
    fields.update(kwargs)
    return argparse.Namespace(**fields)


class TestLoadConfig:
    def test_missing_file_returns_empty(self, config_dir):
        from cdslab.config import load_config

        doc = load_config()
        assert len(doc) == 0

    def test_valid_config_loads(self, config_dir):
        from cdslab.config import load_config

        config_dir.mkdir(parents=True, exist_ok=True)
        (config_dir / "config.toml").write_text("[run]\nworkers = 4\n")

        doc = load_config()
        assert doc["run"]["workers"] == 4

    def test_invalid_toml_returns_empty(self, config_dir, capsys):
        from cdslab.config import load_config

        config_dir.mkdir(parents=True, exist_ok=True)
        (config_dir / "config.toml").write_text("invalid [ toml")

        doc = load_config()
        assert len(doc) == 0

        captured = capsys.readouterr()
        assert "Warning" in captured.err


class TestGetConfig:
    def test_get_existing_key(self, config_dir):
        from cdslab.config import get_config

        config_dir.mkdir(parents=True, exist_ok=True)
        (config_dir / "config.toml").write_text('[run]\nout = "runs"\n')

        assert get_config("run.out") == "runs"

    def test_get_missing_key(self, config_dir):
        from cdslab.config import get_config

        config_dir.mkdir(parents=True, exist_ok=True)
        (config_dir / "config.toml").write_text("[run]\nworkers = 2\n")

        assert get_config("run.nonexistent") is None
        assert get_config("nonexistent.key") is None

    def test_get_table_returns_none(self, config_dir):
        from cdslab.config import get_config

        config_dir.mkdir(parents=True, exist_ok=True)
        (config_dir / "config.toml").write_text("[run]\nworkers = 2\n")

        # Getting a table itself should return None (not a scalar value)
        assert get_config("run") is None


class TestSetConfig:
    def test_set_creates_file(self, config_dir):
        from cdslab.config import set_config

        set_config("run.out", "runs")

        content = (config_dir / "config.toml").read_text()
        assert "runs" in content

    def test_set_preserves_existing(self, config_dir):
        from cdslab.config import set_config

        config_dir.mkdir(parents=True, exist_ok=True)
        (config_dir / "config.toml").write_text('# My config\n[run]\nout = "runs"\n')

        set_config("run.workers", "8")

        content = (config_dir / "config.toml").read_text()
        # Original comment and value should be preserved
        assert "# My config" in content
        assert "runs" in content
        assert "workers = 8" in content

    def test_set_updates_existing_key(self, config_dir):
        from cdslab.config import get_config, set_config

        config_dir.mkdir(parents=True, exist_ok=True)
        (config_dir / "config.toml").write_text("[run]\nworkers = 2\n")

        set_config("run.workers", "6")

        assert get_config("run.workers") == "6"


class TestGetRunDefaults:
    def test_reads_run_table(self, config_dir):
        from cdslab.config import get_run_defaults

        config_dir.mkdir(parents=True, exist_ok=True)
        (config_dir / "config.toml").write_text('[run]\nworkers = 4\nout = "~/runs"\n')

        assert get_run_defaults() == {"workers": 4, "out": "~/runs"}

    def test_empty_when_no_config(self, config_dir):
        from cdslab.config import get_run_defaults

        assert get_run_defaults() == {}

    def test_bad_values_skipped_with_warning(self, config_dir, capsys):
        from cdslab.config import get_run_defaults

        config_dir.mkdir(parents=True, exist_ok=True)
        (config_dir / "config.toml").write_text('[run]\nworkers = "lots"\n')

        assert get_run_defaults() == {}
        assert "Warning" in capsys.readouterr().err


class TestWorkerPrecedence:
    def write_defaults(self, config_dir, workers):
        config_dir.mkdir(parents=True, exist_ok=True)
        (config_dir / "config.toml").write_text(f"[run]\nworkers = {workers}\n")

    def test_user_default(self, config_dir, tmp_path, config_file):
        from cdslab.cli_common import load_run

        self.write_defaults(config_dir, 3)
        run, _ = load_run(run_args(config_file(tmp_path / "run.json")))
        assert run.sim.workers == 3

    def test_document_beats_user_default(self, config_dir, tmp_path, config_file, config_dict):
        from cdslab.cli_common import load_run

        self.write_defaults(config_dir, 3)
        path = config_file(tmp_path / "run.json", simulation={**config_dict["simulation"], "workers": 5})
        run, _ = load_run(run_args(path))
        assert run.sim.workers == 5

    def test_env_beats_document(self, config_dir, tmp_path, config_file, config_dict, monkeypatch):
        from cdslab.cli_common import load_run

        monkeypatch.setenv("CDS_WORKERS", "7")
        path = config_file(tmp_path / "run.json", simulation={**config_dict["simulation"], "workers": 5})
        run, _ = load_run(run_args(path))
        assert run.sim.workers == 7

    def test_flag_beats_env(self, config_dir, tmp_path, config_file, monkeypatch):
        from cdslab.cli_common import load_run

        monkeypatch.setenv("CDS_WORKERS", "7")
        run, _ = load_run(run_args(config_file(tmp_path / "run.json"), workers=2))
        assert run.sim.workers == 2

    def test_bad_env_is_config_error(self, config_dir, tmp_path, config_file, monkeypatch):
        from cdslab.cli_common import load_run
        from cdslab.loader import ConfigError

        monkeypatch.setenv("CDS_WORKERS", "zero")
        with pytest.raises(ConfigError, match="CDS_WORKERS"):
            load_run(run_args(config_file(tmp_path / "run.json")))

    def test_fingerprint_matches_git_blob(self, config_dir, tmp_path, config_file):
        import hashlib

        from cdslab.cli_common import load_run

        path = config_file(tmp_path / "run.json")
        data = path.read_bytes()
        _, fingerprint = load_run(run_args(path))
        assert fingerprint == hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


class TestChunkSizeSource:
    def test_user_chunk_size_is_ignored(self, config_dir, tmp_path, config_file, config_dict):
        from cdslab.cli_common import load_run

        config_dir.mkdir(parents=True, exist_ok=True)
        (config_dir / "config.toml").write_text("[run]\nchunk_size = 7\n")
        simulation = {k: v for k, v in config_dict["simulation"].items() if k != "chunk_size"}
        run, _ = load_run(run_args(config_file(tmp_path / "run.json", simulation=simulation)))
        assert run.sim.chunk_size == 512

    def test_document_chunk_size_is_used(self, config_dir, tmp_path, config_file):
        from cdslab.cli_common import load_run

        config_dir.mkdir(parents=True, exist_ok=True)
        (config_dir / "config.toml").write_text("[run]\nchunk_size = 7\n")
        run, _ = load_run(run_args(config_file(tmp_path / "run.json")))
        assert run.sim.chunk_size == 128


class TestResolveOutDir:
    def test_flag_wins(self, config_dir, tmp_path):
        from cdslab.cli_common import resolve_out_dir

        out = resolve_out_dir(argparse.Namespace(out=str(tmp_path / "flag")))
        assert out == tmp_path / "flag"
        assert out.is_dir()

    def test_user_default(self, config_dir, tmp_path):
        from cdslab.cli_common import resolve_out_dir

        config_dir.mkdir(parents=True, exist_ok=True)
        (config_dir / "config.toml").write_text(f'[run]\nout = "{tmp_path / "runs"}"\n')

        assert resolve_out_dir(argparse.Namespace(out=None)) == tmp_path / "runs"

    def test_working_directory_fallback(self, config_dir, tmp_path, monkeypatch):
        from cdslab.cli_common import resolve_out_dir

        monkeypatch.chdir(tmp_path)
        assert resolve_out_dir(argparse.Namespace(out=None)) == tmp_path / "cdslab-out"


class TestCheckRunSetting:
    @pytest.mark.parametrize(("key", "value"), [("run.workers", "4"), ("run.out", "~/runs")])
    def test_accepts_run_keys(self, key, value):
        from cdslab.config import check_run_setting

        assert check_run_setting(key, value) is None

    def test_rejects_unknown_key(self):
        from cdslab.config import check_run_setting

        assert "unknown key" in check_run_setting("search.limit", "5")
        assert "unknown key" in check_run_setting("run.seed", "5")
        assert "unknown key" in check_run_setting("run.chunk_size", "256")

    @pytest.mark.parametrize("value", ["0", "-2", "many"])
    def test_rejects_bad_counts(self, value):
        from cdslab.config import check_run_setting

        assert "positive integer" in check_run_setting("run.workers", value)
