"""Run configuration for the command line.

Values come from three layers: command-line flags override the config file,
which overrides the defaults. The config file is flat ``key = value`` text;
keys are the long flag names, dashes or underscores both accepted::

    # railgauge.cfg
    kind = gm
    n = 8
    output-format = csv
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from dataclasses import fields
from dataclasses import replace
from fractions import Fraction
import math
import os
from pathlib import Path
from typing import Any
from typing import Callable
from typing import Mapping
from typing import Optional
import warnings

from .exceptions import ConfigError
from .validation import is_power_of_two

ENV_THREADS = "RAILGAUGE_THREADS"
DEFAULT_THREADS = 4

COMMANDS = ("build-unitary", "measure", "sweep", "coherent", "verify")
KINDS = ("qft", "gm", "hadamard12")
BACKENDS = ("float", "exact")
OUTPUT_FORMATS = ("json", "csv", "text")
SCOPES = (
    "all",
    "unitaries",
    "engine",
    "measurement",
    "analytic",
    "coherent",
    "hadamard12",
)
METHODS = ("closed_form", "series", "fock_sim")
EXACT_KINDS = ("gm", "hadamard12")

_SECTION = "railgauge"


def max_workers() -> int:
    """Worker threads, capped by ``RAILGAUGE_THREADS`` when set."""
    default = min(DEFAULT_THREADS, os.cpu_count() or 1)
    value = os.environ.get(ENV_THREADS)
    if value is None or value.strip() == "":
        return default
    try:
        threads = int(value)
    except ValueError:
        warnings.warn(f"ignoring {ENV_THREADS}={value!r}, not an integer")
        return default
    if threads < 1:
        warnings.warn(f"ignoring {ENV_THREADS}={value!r}, must be at least 1")
        return default
    return threads


def parse_n_range(text: str) -> tuple[int, ...]:
    """``"2..8"`` (inclusive), ``"2,4,8"`` or a single ``"6"``."""
    text = text.strip()
    try:
        if ".." in text:
            low, high = text.split("..", 1)
            return tuple(range(int(low), int(high) + 1))
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"invalid n range {text!r}") from None


def parse_kinds(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {value!r}")


def _optional(convert: Callable[[Any], Any]) -> Callable[[Any], Any]:
    def inner(value: Any) -> Any:
        if value is None:
            return None
        if isinstance(value, str) and value.strip().lower() in ("", "none"):
            return None
        return convert(value)

    return inner


def _tuple_of(parse: Callable[[str], tuple]) -> Callable[[Any], tuple]:
    def inner(value: Any) -> tuple:
        if isinstance(value, str):
            return parse(value)
        return tuple(value)

    return inner


@dataclass(frozen=True)
class RunConfig:
    command: str = "measure"
    kind: str = "gm"
    n: int = 4
    phi: float = 0.0
    signs: Optional[str] = None
    alpha: float = 1.0
    cutoff: Optional[int] = None
    backend: Optional[str] = None
    tol: Optional[float] = None
    output_format: str = "json"
    output_path: Optional[str] = None
    config_path: Optional[str] = None
    threads: Optional[int] = None
    extended: bool = False
    scope: str = "all"
    kinds: tuple[str, ...] = ("qft",)
    n_range: tuple[int, ...] = tuple(range(2, 9))
    prior_plus: Fraction = Fraction(1, 2)
    method: str = "closed_form"
    patterns: bool = False
    progress: bool = False
    upsilon: Optional[complex] = None
    xi: Optional[complex] = None

    def replace(self, **changes: Any) -> RunConfig:
        return replace(self, **changes)

    def workers(self) -> int:
        return self.threads if self.threads is not None else max_workers()

    def _check_kind(self, kind: str, n: int) -> None:
        if kind not in KINDS:
            raise ConfigError(f"unknown interferometer kind {kind!r}")
        if n < 2:
            raise ConfigError(f"n must be at least 2, got {n}")
        if kind == "gm" and not is_power_of_two(n):
            raise ConfigError(f"a Green Machine needs a power of 2 modes, got n={n}")
        if kind == "hadamard12" and n != 12:
            raise ConfigError(f"the Hadamard12 unitary has 12 modes, got n={n}")

    def validate(self) -> RunConfig:
        """Return self, or raise :class:`ConfigError` naming the first problem."""
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown output format {self.output_format!r}")
        if self.backend is not None and self.backend not in BACKENDS:
            raise ConfigError(f"unknown backend {self.backend!r}")
        if not 0 <= self.phi < 2 * math.pi:
            raise ConfigError(f"phi must lie in [0, 2pi), got {self.phi}")
        if self.threads is not None and self.threads < 1:
            raise ConfigError(f"threads must be at least 1, got {self.threads}")
        if self.tol is not None and self.tol < 0:
            raise ConfigError(f"tol must be non-negative, got {self.tol}")
        if not 0 <= self.prior_plus <= 1:
            raise ConfigError(f"prior_plus must lie in [0, 1], got {self.prior_plus}")
        if self.scope not in SCOPES:
            raise ConfigError(f"unknown verification scope {self.scope!r}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown coherent method {self.method!r}")

        if self.command in ("build-unitary", "measure"):
            self._check_kind(self.kind, self.n)
            if self.signs is not None:
                if len(self.signs) != self.n - 1 or set(self.signs) - {"+", "-"}:
                    raise ConfigError(
                        f"signs must be {self.n - 1} characters of + and -, "
                        f"got {self.signs!r}"
                    )
        if self.backend == "exact":
            kinds = self.kinds if self.command == "sweep" else (self.kind,)
            if any(kind not in EXACT_KINDS for kind in kinds):
                raise ConfigError("the exact backend needs kind gm or hadamard12")
            if self.phi != 0:
                raise ConfigError("the exact backend needs phi = 0")
        if self.command == "sweep":
            for kind in self.kinds:
                if kind not in KINDS:
                    raise ConfigError(f"unknown interferometer kind {kind!r}")
        if self.command == "coherent":
            if self.n < 2:
                raise ConfigError(f"n must be at least 2, got {self.n}")
            if self.alpha == 0:
                raise ConfigError("alpha = 0 cannot discriminate")
            if self.cutoff is not None and self.cutoff < 0:
                raise ConfigError(f"cutoff must be non-negative, got {self.cutoff}")
            if self.method == "fock_sim" and not is_power_of_two(self.n):
                raise ConfigError(
                    "the Fock simulation runs on a Green Machine, "
                    "n must be a power of 2"
                )
        return self


_CONVERTERS: dict[str, Callable[[Any], Any]] = {
    "command": str,
    "kind": str,
    "n": int,
    "phi": float,
    "signs": _optional(str),
    "alpha": float,
    "cutoff": _optional(int),
    "backend": _optional(str),
    "tol": _optional(float),
    "output_format": str,
    "output_path": _optional(str),
    "config_path": _optional(str),
    "threads": _optional(int),
    "extended": _bool,
    "scope": str,
    "kinds": _tuple_of(parse_kinds),
    "n_range": _tuple_of(parse_n_range),
    "prior_plus": lambda v: Fraction(str(v)) if not isinstance(v, Fraction) else v,
    "method": str,
    "patterns": _bool,
    "progress": _bool,
    "upsilon": _optional(complex),
    "xi": _optional(complex),
}
assert set(_CONVERTERS) == {f.name for f in fields(RunConfig)}


def _normalise_key(key: str) -> str:
    return key.strip().replace("-", "_")


def coerce(values: Mapping[str, Any]) -> dict[str, Any]:
    """Convert raw values (strings from a file or flags) to field types."""
    out: dict[str, Any] = {}
    for raw_key, value in values.items():
        key = _normalise_key(raw_key)
        if key not in _CONVERTERS:
            raise ConfigError(f"unknown configuration key {raw_key!r}")
        try:
            out[key] = _CONVERTERS[key](value)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            message = f"invalid value for {raw_key}: {value!r} ({exc})"
            raise ConfigError(message) from None
    return out


def read_config_file(path: os.PathLike | str) -> dict[str, Any]:
    """Read a flat ``key = value`` file into typed values."""
    parser = configparser.ConfigParser(
        interpolation=None,
        comment_prefixes=("#", ";"),
        inline_comment_prefixes=("#", ";"),
    )
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    try:
        parser.read_string(f"[{_SECTION}]\n{text}", source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from None
    return coerce(dict(parser[_SECTION]))


def load(flags: Mapping[str, Any], defaults: Optional[RunConfig] = None) -> RunConfig:
    """Merge defaults, the config file named by ``config_path`` and the flags.

    ``flags`` holds only explicitly given options; ``None`` means unset.
    """
    config = defaults or RunConfig()
    given = coerce({k: v for k, v in flags.items() if v is not None})
    path = given.get("config_path")
    if path is not None:
        from_file = read_config_file(path)
        from_file.pop("config_path", None)
        config = config.replace(**from_file)
    return config.replace(**given).validate()
