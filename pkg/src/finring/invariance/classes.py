"""Module classes that supply envelopes or covers.

A class is a membership test plus a constructor for the minimal map
relating a module to the class: a monic envelope ``u: M -> X`` or an epic
cover ``p: X -> M``.  Two classes ship: injective modules (envelopes) and
projective modules (covers).

Pure-injective envelopes are not a separate class here: every finite module
is pure-injective, so its pure-injective envelope is the identity and the
corresponding statements reduce to those for the injective class applied to
modules that are already in the class.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import SpecError
from ..modules.injective import injective_envelope, is_injective
from ..modules.projective import is_projective, projective_cover

ENVELOPE = "envelope"
COVER = "cover"


@dataclass(frozen=True)
class ModuleClass:
    name: str
    direction: str                 # ENVELOPE or COVER
    member: Callable
    construct: Callable            # (module, seed) -> InjectiveEnvelope | ProjectiveCover


INJECTIVE = ModuleClass("injective", ENVELOPE, is_injective, injective_envelope)
PROJECTIVE = ModuleClass("projective", COVER, is_projective, projective_cover)

CLASSES = {c.name: c for c in (INJECTIVE, PROJECTIVE)}


def get_class(name) -> ModuleClass:
    if isinstance(name, ModuleClass):
        return name
    try:
        return CLASSES[name]
    except KeyError:
        raise SpecError(f"unknown module class {name!r}; expected one of {sorted(CLASSES)}") from None
