"""Run configuration: INI file first, then command-line flags (flags win)."""
from __future__ import annotations

import configparser
import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path

import sympy
from sympy.parsing.sympy_parser import parse_expr

from core.errors import ConfigError

logger = logging.getLogger(__name__)

SECTIONS = {
    "group": ("d", "rep"),
    "bounds": ("height", "norm_bound", "x_max", "coset_height", "n_max", "n_min"),
    "tolerances": ("kl_tol", "eigen_step", "lox_normalization"),
    "output": ("path", "format"),
    "logging": ("level",),
}
# INI key -> RunConfig field where they differ
_FIELD = {"path": "output", "level": "log_level"}
FORMATS = ("json", "csv")
NAMED_REPS = ("trivial", "nontrivial")


@dataclass
class RunConfig:
    command: str = ""
    d: int = 1
    rep: str = "trivial"
    height: int = 3
    norm_bound: float = 60.0
    x_max: float = 1e6
    coset_height: int = 6
    n_max: int = 12
    n_min: int = -6
    kl_tol: float = 1e-16
    eigen_step: float = 1e-3
    lox_normalization: float = 1.0
    output: str | None = None
    format: str = "json"
    log_level: str = "WARNING"
    extra: dict = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        if self.d not in (1, 3):
            raise ConfigError(f"group d must be 1 or 3, got {self.d}")
        for name in ("height", "norm_bound", "x_max", "coset_height", "n_max"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"bound {name} must be positive, got {getattr(self, name)}")
        if self.n_min > -1:
            raise ConfigError(f"n_min must be <= -1, got {self.n_min}")
        for name in ("kl_tol", "eigen_step"):
            if not 0 < getattr(self, name) < 1:
                raise ConfigError(f"tolerance {name} must lie in (0, 1), got {getattr(self, name)}")
        if not self.lox_normalization > 0:
            raise ConfigError(f"lox_normalization must be positive, got {self.lox_normalization}")
        if self.format not in FORMATS:
            raise ConfigError(f"output format must be one of {FORMATS}, got {self.format!r}")
        if self.rep not in NAMED_REPS and not Path(self.rep).is_file():
            raise ConfigError(f"representation file {self.rep} does not exist")
        if logging.getLevelName(self.log_level.upper()) not in range(0, 60):
            raise ConfigError(f"unknown log level {self.log_level!r}")
        return self

    def provenance(self) -> dict:
        keep = ("d", "rep", "height", "norm_bound", "x_max", "coset_height", "n_max", "n_min",
                "kl_tol", "eigen_step", "lox_normalization")
        return {k: getattr(self, k) for k in keep}


def _coerce(name: str, raw: str):
    kind = {f.name: f.type for f in dataclasses.fields(RunConfig)}[name]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{name}: cannot read {raw!r} as {kind}") from exc
    return raw


def load_config(path: str | Path | None) -> RunConfig:
    cfg = RunConfig()
    if path is None:
        return cfg
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {path} does not exist")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"unreadable config {path}: {exc}") from exc
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser[section].items():
            if key not in SECTIONS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            name = _FIELD.get(key, key)
            setattr(cfg, name, _coerce(name, raw))
    logger.debug("loaded config %s", path)
    return cfg


def merge_flags(cfg: RunConfig, flags: dict) -> RunConfig:
    names = {f.name for f in dataclasses.fields(RunConfig)}
    for key, value in flags.items():
        if value is None:
            continue
        if key in names:
            setattr(cfg, key, value)
        else:
            cfg.extra[key] = value
    return cfg


def parse_complex(text: str) -> complex:
    """Complex number from text such as "i", "0.5+0.866*i" or "exp(i*pi/3)"."""
    try:
        expr = parse_expr(str(text), local_dict={"i": sympy.I, "I": sympy.I, "j": sympy.I})
        return complex(sympy.N(expr, 20))
    except (SyntaxError, TypeError, ValueError, sympy.SympifyError) as exc:
        raise ConfigError(f"cannot read {text!r} as a complex number") from exc
