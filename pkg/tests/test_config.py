import pytest
import tomli

from app.config import settings as settings_module
from app.config.settings import Settings, get_settings, load_settings, override_settings


@pytest.fixture
def fresh(monkeypatch):
    """Forget the global settings for the duration of a test"""
    monkeypatch.setattr(settings_module, "_settings", None)
    monkeypatch.delenv("OMEGA_STATE_BUDGET", raising=False)
    monkeypatch.delenv("OMEGA_SEED", raising=False)
    monkeypatch.delenv("CONFIG_FILE", raising=False)
    return monkeypatch


def test_defaults():
    settings = Settings()
    assert settings.automata.state_budget == 1_000_000
    assert settings.automata.letter_budget == 4096
    assert settings.sampling.seed == 7
    assert settings.cli.format == "text"


def test_load_bundled_default(fresh):
    settings = load_settings("config/default.toml")
    assert settings.automata.rank_complement_max_states == 8
    assert get_settings() is settings


def test_load_partial_file(fresh, tmp_path):
    path = tmp_path / "config.toml"
    path.write_text("[sampling]\nseed = 11\nsamples = 20\n")
    settings = load_settings(str(path))
    assert settings.sampling.seed == 11
    assert settings.automata.state_budget == 1_000_000


def test_environment_overrides(fresh):
    fresh.setenv("OMEGA_STATE_BUDGET", "500")
    fresh.setenv("OMEGA_SEED", "3")
    settings = load_settings("config/default.toml")
    assert settings.automata.state_budget == 500
    assert settings.sampling.seed == 3


def test_config_file_variable(fresh, tmp_path):
    path = tmp_path / "config.toml"
    path.write_text("[cli]\nformat = \"json\"\n")
    fresh.setenv("CONFIG_FILE", str(path))
    assert get_settings().cli.format == "json"


def test_missing_and_malformed_files(fresh, tmp_path):
    with pytest.raises(FileNotFoundError):
        load_settings(str(tmp_path / "missing.toml"))
    path = tmp_path / "bad.toml"
    path.write_text("[automata\n")
    with pytest.raises(tomli.TOMLDecodeError):
        load_settings(str(path))


def test_get_settings_falls_back_to_defaults(fresh, tmp_path):
    fresh.setenv("CONFIG_FILE", str(tmp_path / "missing.toml"))
    fresh.setenv("OMEGA_SEED", "9")
    assert get_settings().sampling.seed == 9


def test_override_settings(settings):
    override_settings(state_budget=123, seed=4)
    assert settings.automata.state_budget == 123
    assert settings.sampling.seed == 4
    override_settings()
    assert settings.sampling.seed == 4
