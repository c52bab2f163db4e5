import os
import logging
from dataclasses import dataclass, fields, replace

import yaml

from lpadic.cyclotomic import DirichletCharacter
from lpadic.errors import ConfigError, DomainError
from lpadic.helpers import is_prime

log = logging.getLogger(__name__)

FORMATS = ("table", "json")


@dataclass(frozen=True)
class RunConfig:
    p: int = 3
    prec: int = 20
    trunc: int = 0
    level: int = 11
    weight: int = 2
    levels: int = 2
    char: str = "trivial"
    format: str = "table"
    reg_c: int | None = None
    seed: int = 0
    workers: int = 4
    bound: int = 13
    cache: bool = True

    def validate(self) -> "RunConfig":
        if self.p == 2 or not is_prime(self.p):
            raise ConfigError(f"p must be an odd prime, got {self.p}")
        if self.prec < 1:
            raise ConfigError(f"precision must be at least 1, got {self.prec}")
        if self.trunc < 0:
            raise ConfigError(f"truncation must be nonnegative, got {self.trunc}")
        if self.levels < 1:
            raise ConfigError(f"levels must be at least 1, got {self.levels}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        return self

    def merged(self, **overrides) -> "RunConfig":
        """
        Copy with every override that is not None applied.
        """
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    @property
    def regularizer(self) -> int:
        return self.reg_c if self.reg_c is not None else 1 + self.p


def get_config_file_path() -> str:
    if "LPADIC_CONFIG" in os.environ:
        return os.environ["LPADIC_CONFIG"]
    if "XDG_CONFIG_HOME" in os.environ:
        conf_dir = os.environ["XDG_CONFIG_HOME"]
    else:
        conf_dir = os.path.join(os.environ.get("HOME", "."), ".config")
    return os.path.join(conf_dir, "lpadic", "config.yaml")


def load_config(path: str | None = None) -> RunConfig:
    """
    Defaults overlaid with the YAML config file, if there is one.
    """
    if path is None:
        path = get_config_file_path()
    if not os.path.exists(path):
        return RunConfig()
    with open(path) as f:
        doc = yaml.safe_load(f) or {}
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: expected a mapping at the top level")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    log.debug(f"loaded config from {path}")
    return RunConfig(**doc)


def parse_character(desc: str, p: int, prec: int = 20) -> DirichletCharacter:
    """
    "trivial", or "t:<tame>,n:<conductor exponent>[,w:<wild>]". The wild exponent defaults to 1 for
    conductors p^2 and up, which makes the character primitive.
    """
    if desc == "trivial":
        return DirichletCharacter.trivial(p, 0, prec)
    try:
        parts = dict(item.split(":", 1) for item in desc.split(","))
        tame = int(parts.pop("t", 0))
        n = int(parts.pop("n"))
        wild = int(parts.pop("w", 1 if n >= 2 else 0))
    except (KeyError, ValueError) as e:
        raise ConfigError(f"cannot parse character descriptor {desc!r}") from e
    if parts:
        raise ConfigError(f"unknown keys {sorted(parts)} in character descriptor {desc!r}")
    if n < 0:
        raise DomainError(f"conductor exponent must be nonnegative, got {n}")
    if n == 0:
        return DirichletCharacter.trivial(p, 0, prec)
    return DirichletCharacter.from_parts(p, n, tame, wild, prec)
