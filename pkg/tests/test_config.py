import pytest

from lpadic.config import RunConfig, get_config_file_path, load_config, parse_character
from lpadic.errors import ConfigError, DomainError


def test_defaults_are_valid():
    conf = RunConfig().validate()
    assert conf.p == 3
    assert conf.regularizer == 4
    assert RunConfig(p=7, reg_c=3).regularizer == 3


@pytest.mark.parametrize(
    "overrides",
    [{"p": 2}, {"p": 9}, {"prec": 0}, {"trunc": -1}, {"levels": 0}, {"format": "xml"}],
)
def test_validate_rejects(overrides):
    with pytest.raises(ConfigError):
        RunConfig(**overrides).validate()


def test_merged_skips_unset_options():
    conf = RunConfig(p=5, prec=30).merged(p=None, prec=12, format=None)
    assert conf.p == 5
    assert conf.prec == 12
    assert conf.format == "table"


def test_config_file_location(lpadic_home, monkeypatch):
    assert get_config_file_path() == str(lpadic_home / "config" / "lpadic" / "config.yaml")
    monkeypatch.setenv("LPADIC_CONFIG", "/somewhere/else.yaml")
    assert get_config_file_path() == "/somewhere/else.yaml"


def test_missing_file_gives_defaults(lpadic_home):
    assert load_config() == RunConfig()


def test_load_config(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("p: 7\nlevels: 3\nformat: json\n")
    conf = load_config(str(path))
    assert (conf.p, conf.levels, conf.format) == (7, 3, "json")
    assert conf.prec == 20


def test_load_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("p: 7\nprecision: 3\n")
    with pytest.raises(ConfigError, match="precision"):
        load_config(str(path))
    path.write_text("- 7\n")
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_parse_character():
    chi = parse_character("t:1,n:1", 5)
    assert (chi.tame, chi.conductor_exponent()) == (1, 1)
    chi = parse_character("t:0,n:2", 5)
    assert chi.wild == 1
    assert chi.conductor_exponent() == 2
    assert parse_character("n:2,w:0,t:2", 5).conductor_exponent() == 1
    assert parse_character("trivial", 5).n == 0
    assert parse_character("n:0", 5).exponent == 0


@pytest.mark.parametrize("desc", ["garbage", "t:1", "t:1,n:1,x:2", "t:a,n:1"])
def test_parse_character_errors(desc):
    with pytest.raises(ConfigError):
        parse_character(desc, 5)


def test_parse_character_negative_conductor():
    with pytest.raises(DomainError):
        parse_character("n:-1", 5)
