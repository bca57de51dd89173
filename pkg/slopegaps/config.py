import logging
from typing import Any

from .decorators import coerce_n
from .errors import ConfigError, DomainError

FORMATS = ("csv", "json", "text", "html")
COMMANDS = (
    "geometry",
    "section",
    "rt-eval",
    "distribution",
    "volume",
    "nondiff",
    "empirical",
    "verify",
    "convergence",
    "extrema",
)


class RunConfig:
    """Settings of one command run.

    Keyword overrides sit on top of ``defaults``; calling a config returns a
    copy with further overrides. Invalid combinations raise ConfigError.
    """

    defaults = {
        "command": "verify",
        "n": 7,
        "t_min": 1.0,
        "t_max": 20.0,
        "samples": 901,
        "refine_stamps": False,
        "component": "omega1",
        "x": 1.0,
        "y": 0.5,
        "k": 40.0,
        "ks": (10.0, 20.0, 40.0),
        "depth": 10_000,
        "tol": 1e-8,
        "deriv_tol": 1e-4,
        "grid": 2000,
        "format": "csv",
        "out": "-",
        "dump_vectors": None,
        "seed": 20240601,
    }

    def __init__(self, **kwargs) -> None:
        self.logger = logging.getLogger(self.__class__.__name__)
        unknown = set(kwargs) - set(self.defaults)
        if unknown:
            raise ConfigError(f"unknown settings: {', '.join(sorted(unknown))}")
        self.kwargs = {k: v for k, v in kwargs.items() if v is not None}
        self.validate()

    def __call__(self, **kwargs) -> "RunConfig":
        return self.__class__(**{**self.kwargs, **kwargs})

    def get(self, key, *args) -> Any:
        return {**self.defaults, **self.kwargs}.get(key, *args)

    def __getitem__(self, key) -> Any:
        if key not in self.defaults:
            raise KeyError(key)
        return self.get(key)

    def validate(self) -> None:
        try:
            self.kwargs["n"] = coerce_n(self.get("n"))
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
        if self.get("command") not in COMMANDS:
            raise ConfigError(f"unknown command {self.get('command')!r}")
        if not self.get("t_min") < self.get("t_max"):
            raise ConfigError(f"empty t range [{self.get('t_min')}, {self.get('t_max')}]")
        if self.get("samples") < 2:
            raise ConfigError(f"need at least 2 samples, got {self.get('samples')}")
        if self.get("k") < 1 or any(k < 1 for k in self.get("ks")):
            raise ConfigError("k must be at least 1")
        if self.get("depth") < 1:
            raise ConfigError(f"depth must be at least 1, got {self.get('depth')}")
        if not self.get("tol") > 0 or not self.get("deriv_tol") > 0:
            raise ConfigError("tolerances must be positive")
        if self.get("format") not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}, got {self.get('format')!r}")
        if self.get("component") not in ("omega1", "omega2"):
            raise ConfigError(f"component must be omega1 or omega2, got {self.get('component')!r}")

    def __eq__(self, other) -> bool:
        return isinstance(other, RunConfig) and {**self.defaults, **self.kwargs} == {**other.defaults, **other.kwargs}

    def __repr__(self) -> str:
        s = self.__class__.__qualname__ + "("
        s += ", ".join(f"{k}={v!r}" for k, v in self.kwargs.items())
        s += ")"
        return s
