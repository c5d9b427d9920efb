"""Shared enums and exception types."""
from __future__ import annotations

import enum


class CountingMode(enum.Enum):
    MATCHING = "matching"
    EDGE_COVER = "edgecover"

    @classmethod
    def parse(cls, text: str) -> "CountingMode":
        key = text.strip().lower().replace("-", "").replace("_", "")
        for mode in cls:
            if mode.value == key:
                return mode
        raise InputError(f"unknown counting mode {text!r} (expected matching|edgecover)")


class WcountError(Exception):
    """Base class for all errors raised by this package."""


class InputError(WcountError, ValueError):
    """Malformed or inconsistent input."""


class CapacityError(WcountError):
    """Instance exceeds a configured brute-force cap."""


class ConstructionError(WcountError, ValueError):
    """A reduction instance cannot be built (e.g. subdivision too short)."""


class DomainError(WcountError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ProbabilisticFailure(WcountError):
    """The randomized probe search exhausted its retries (the ZPP failure value)."""
