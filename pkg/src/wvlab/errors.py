"""Error types shared across the library.

Each class corresponds to one failure channel of the public operations, so
callers can discriminate without parsing messages.
"""

from __future__ import annotations


class WvlabError(Exception):
    """Base class for all library errors."""


class NonAnalyticError(WvlabError):
    """Terms |a_n| r^n fail to decay within the scan cap: the series is not
    (numerically) analytic at this radius, or n_cap is too small."""

    def __init__(self, message: str, *, n_cap: int | None = None):
        super().__init__(message)
        self.n_cap = n_cap


class BadParamError(WvlabError):
    """A parameter violates a documented precondition."""


class PhasesTooShortError(WvlabError):
    """The phase sequence does not cover the truncation index.

    ``required_length`` is the number of phases needed (trunc_n + 1).
    """

    def __init__(self, message: str, *, required_length: int):
        super().__init__(message)
        self.required_length = required_length


class DomainError(WvlabError):
    """The statistic is undefined at this radius (e.g. ln{h mu} <= 0)."""


class NumericError(WvlabError):
    """A numerical routine could not reach its accuracy target."""


class ExhaustedError(WvlabError):
    """A search ran out of admissible room (e.g. no admissible radius below
    the working resolution limit)."""
