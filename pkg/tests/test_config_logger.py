import pytest

from src.config_loader import (
    get_path,
    get_project_root,
    load_config,
    quadrature_setting,
    thread_cap,
    tolerance,
)
from src.errors import ConfigError
from src.logger import log_failure, log_skip, write_log


def test_missing_config_file(tmp_path):
    with pytest.raises(FileNotFoundError, match="Config not found"):
        load_config(tmp_path / "nope.yaml")


def test_config_must_be_a_mapping(tmp_path):
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="mapping"):
        load_config(path)


def test_empty_config_is_empty_mapping(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    assert load_config(path) == {}


def test_shipped_config_loads():
    config = load_config()
    assert config["defaults"]["seed"] == 0xD1AC
    assert "logs_dir" in config["paths"]


def test_thread_cap_precedence(monkeypatch):
    monkeypatch.delenv("DIRAC_SHARP_THREADS", raising=False)
    assert thread_cap() == 1
    assert thread_cap({"parallel": {"threads": 3}}) == 3
    assert thread_cap({"parallel": {"threads": 0}}) == 1
    monkeypatch.setenv("DIRAC_SHARP_THREADS", "6")
    assert thread_cap({"parallel": {"threads": 3}}) == 6


def test_thread_cap_rejects_garbage(monkeypatch):
    monkeypatch.setenv("DIRAC_SHARP_THREADS", "many")
    with pytest.raises(ConfigError, match="integer"):
        thread_cap()


def test_tolerance_precedence():
    config = {"tolerances": {"eq1": 1e-6}}
    assert tolerance("eq1") == 1e-8
    assert tolerance("eq1", config) == 1e-6
    assert tolerance("eq1", config, {"eq1": 0.5}) == 0.5
    assert tolerance("eq1", config, {"eq1": None}) == 1e-6
    with pytest.raises(ConfigError, match="Unknown tolerance"):
        tolerance("nonsense")
    assert tolerance("kernel_bound") == 0.0
    assert tolerance("c1_inverse") == 1e-5


def test_quadrature_setting_falls_back():
    assert quadrature_setting("radial_nodes", 200) == 200
    assert quadrature_setting("radial_nodes", 200, {"quadrature": {"radial_nodes": 80}}) == 80


def test_write_log_appends(config, tmp_path):
    write_log("first", config=config)
    log_skip("constant is zero", config=config)
    log_failure("verify", 2, config=config)
    lines = (tmp_path / "logs" / "dirac_sharp.log").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 3
    assert lines[0].endswith("[INFO] first")
    assert "SKIP | constant is zero" in lines[1]
    assert "[WARNING] FAIL | command=verify | failed_rows=2" in lines[2]


def test_write_log_never_raises(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x", encoding="utf-8")
    write_log("lost", config={"paths": {"logs_dir": str(blocker / "logs")}})


def test_get_path_resolves_against_project_root(tmp_path):
    config = {"paths": {"logs_dir": "logs", "output_dir": str(tmp_path)}}
    assert get_path("logs_dir", config) == get_project_root() / "logs"
    assert get_path("output_dir", config) == tmp_path
    assert get_path("cache_dir", config, default="cache") == get_project_root() / "cache"
    with pytest.raises(ConfigError, match="paths.cache_dir"):
        get_path("cache_dir", config)
