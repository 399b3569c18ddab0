"""Size guards and runtime configuration."""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from .errors import SizeGuard, SpecError

ENV_OVERRIDE = "WORKBENCH_GUARD_OVERRIDE"


@dataclass(frozen=True)
class Guards:
    max_ring: int = 4096        # rings materialised with full multiplication tables
    max_module: int = 256       # modules enumerated element by element
    max_end: int = 4096         # endomorphism rings / hom groups
    max_subring_search: int = 256

    def check(self, what: str, size: int, limit_name: str) -> None:
        limit = getattr(self, limit_name)
        if size > limit:
            raise SizeGuard(what, size, limit)


def parse_override(text: str) -> dict[str, int]:
    """Parse ``"max_end=8192,max_module=512"`` into a dict."""
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, _, value = part.partition("=")
        key = key.strip()
        if key not in Guards.__dataclass_fields__:
            raise SpecError(f"unknown guard {key!r}")
        try:
            out[key] = int(value)
        except ValueError as exc:
            raise SpecError(f"guard {key} needs an integer, got {value!r}") from exc
        if out[key] <= 0:
            raise SpecError(f"guard {key} must be positive")
    return out


def default_guards() -> Guards:
    text = os.environ.get(ENV_OVERRIDE)
    if not text:
        return Guards()
    return replace(Guards(), **parse_override(text))


_active = [None]


def guards() -> Guards:
    if _active[0] is None:
        _active[0] = default_guards()
    return _active[0]


def set_guards(g: Guards | None) -> None:
    _active[0] = g


CONVENTIONS = ("shared-identity", "own-identity", "both")


@dataclass(frozen=True)
class WorkbenchConfig:
    guards: Guards = field(default_factory=default_guards)
    parallel: int = 1
    max_module: int = 64
    max_generators: int = 2
    convention: str = "both"
    seeds: tuple[int, int] = (0, 1)
    report_path: str | None = None

    def __post_init__(self):
        if self.parallel < 1:
            raise SpecError("parallelism must be >= 1")
        if self.convention not in CONVENTIONS:
            raise SpecError(f"convention must be one of {CONVENTIONS}")
