import pydantic
import pytest

from uvk import cli
from uvk.evaluator import Strategy
from uvk.settings import (
    BASE_DIR,
    Settings,
    load_configuration_from_yaml,
    load_settings,
    parse_load_path_entry,
    settings,
)
from uvk.universes import UniverseMode


def test_shipped_configuration():
    assert settings.kernel.universe_check is UniverseMode.STRICT
    assert settings.kernel.strategy is Strategy.COMPUTE
    assert set(settings.library.manifests) == {"tier1", "tier2", "tier3"}
    assert all(path.is_file() for path in settings.library.manifests.values())
    (entry,) = settings.library.load_path
    assert entry.directory == BASE_DIR / "lib" / "Foundations"


@pytest.fixture
def environment_settings(monkeypatch, tmp_path) -> Settings:
    monkeypatch.setenv("UVK_LOAD_PATH", f"Extra={tmp_path}")
    return Settings(**load_configuration_from_yaml(BASE_DIR / "config.yaml"))


def test_environment_load_path_is_appended(environment_settings):
    entries = environment_settings.load_path()
    assert [entry.prefix for entry in entries] == ["Foundations", "Extra"]
    assert [entry.prefix for entry in environment_settings.load_path(fallback=False)] == ["Foundations"]


def test_load_path_flags_replace_the_environment(environment_settings, monkeypatch, tmp_path):
    monkeypatch.setattr(cli, "settings", environment_settings)
    flagged = cli.CliConfig.from_flags(load_path=[parse_load_path_entry(f"Flag={tmp_path}")])
    assert [entry.prefix for entry in flagged.load_path] == ["Flag", "Foundations"]
    default = cli.CliConfig.from_flags()
    assert [entry.prefix for entry in default.load_path] == ["Foundations", "Extra"]


def test_alternate_config_file(monkeypatch, tmp_path):
    text = (BASE_DIR / "config.yaml").read_text().replace("fuel: 10000000", "fuel: 500")
    path = tmp_path / "config.yaml"
    path.write_text(text)
    monkeypatch.setenv("UVK_CONFIG", str(path))
    assert load_settings().kernel.fuel == 500


def test_unknown_keys_are_rejected():
    config = load_configuration_from_yaml(BASE_DIR / "config.yaml")
    config["kernel"]["speed"] = "fast"
    with pytest.raises(pydantic.ValidationError):
        Settings(**config)
