from __future__ import annotations

import os
import pathlib
import typing

import pydantic
import yaml

from uvk.evaluator.nbe import DEFAULT_FUEL, Strategy
from uvk.universes import UniverseMode

BASE_DIR: pathlib.Path = pathlib.Path(__file__).parent.parent


class Kernel(pydantic.BaseModel):
    universe_check: UniverseMode = UniverseMode.STRICT
    strategy: Strategy = Strategy.COMPUTE
    fuel: pydantic.PositiveInt = DEFAULT_FUEL
    transparent_all: bool = False

    class Config:
        extra = pydantic.Extra.forbid
        allow_mutation = False


class LoadPathEntry(pydantic.BaseModel):
    prefix: str
    directory: pathlib.Path
    recursive: bool = False

    @pydantic.validator("prefix")
    def validate_prefix(cls, prefix: str) -> str:
        if prefix and not all(part.isidentifier() for part in prefix.split(".")):
            raise ValueError(f"{prefix!r} is not a dotted library prefix")
        return prefix

    @pydantic.validator("directory")
    def anchor_directory(cls, directory: pathlib.Path) -> pathlib.Path:
        return directory if directory.is_absolute() else BASE_DIR / directory

    class Config:
        extra = pydantic.Extra.forbid
        allow_mutation = False


class Library(pydantic.BaseModel):
    load_path: typing.List[LoadPathEntry] = []
    manifests: typing.Dict[str, pathlib.Path] = {}

    @pydantic.validator("manifests")
    def anchor_manifests(
        cls, manifests: typing.Dict[str, pathlib.Path]
    ) -> typing.Dict[str, pathlib.Path]:
        return {
            name: path if path.is_absolute() else BASE_DIR / path
            for name, path in manifests.items()
        }

    class Config:
        extra = pydantic.Extra.forbid
        allow_mutation = False


class Formatter(pydantic.BaseModel):
    class_: str = pydantic.Field(alias="class")
    datefmt: str
    format: str

    class Config:
        extra = pydantic.Extra.forbid
        allow_mutation = False


class Handler(pydantic.BaseModel):
    level: str
    class_: str = pydantic.Field(alias="class")
    formatter: str
    stream: str

    class Config:
        extra = pydantic.Extra.forbid
        allow_mutation = False


class Logger(pydantic.BaseModel):
    handlers: typing.List[str]
    level: str
    propagate: bool

    class Config:
        extra = pydantic.Extra.forbid
        allow_mutation = False


class Logging(pydantic.BaseModel):
    version: int
    disable_existing_loggers: bool
    formatters: typing.Dict[str, Formatter]
    handlers: typing.Dict[str, Handler]
    loggers: typing.Dict[str, Logger]
    root: Logger

    class Config:
        extra = pydantic.Extra.forbid
        allow_mutation = False


class Settings(pydantic.BaseSettings):
    """A class containing all the settings for the project."""

    UVK_LOAD_PATH: typing.Optional[str] = None
    BASE_DIR: pathlib.Path = BASE_DIR
    kernel: Kernel = Kernel()
    library: Library = Library()
    logging: Logging

    class Config:
        """Meta-options for the Setting's model."""

        title = "uvk's Settings"
        extra = pydantic.Extra.forbid
        allow_mutation = False
        env_file = BASE_DIR / ".env"
        env_file_encoding = "utf-8"

    def load_path(self, fallback: bool = True) -> typing.List[LoadPathEntry]:
        """The configured entries, followed by `UVK_LOAD_PATH` when `fallback` is set."""
        extra = parse_load_path(self.UVK_LOAD_PATH or "") if fallback else []
        return list(self.library.load_path) + extra


def parse_load_path_entry(text: str, recursive: bool = True) -> LoadPathEntry:
    """Parse `PREFIX=DIR`; a bare `DIR` maps to the empty prefix."""
    prefix, separator, directory = text.partition("=")
    if not separator:
        prefix, directory = "", text
    return LoadPathEntry(
        prefix=prefix.strip(),
        directory=pathlib.Path(directory.strip()).expanduser().resolve(),
        recursive=recursive,
    )


def parse_load_path(text: str) -> typing.List[LoadPathEntry]:
    return [
        parse_load_path_entry(item) for item in text.split(os.pathsep) if item.strip()
    ]


def load_configuration_from_yaml(config_file: pathlib.Path) -> typing.Dict:
    with config_file.open(encoding="utf-8") as f:
        config = yaml.safe_load(f)

    return config


def load_settings() -> Settings:
    """Initialize our settings object and return it."""
    config_file = pathlib.Path(os.environ.get("UVK_CONFIG", BASE_DIR / "config.yaml"))
    config = load_configuration_from_yaml(config_file)
    return Settings(**config)


settings = load_settings()
