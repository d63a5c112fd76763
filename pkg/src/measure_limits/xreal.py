"""Extended-real arithmetic and interval domains.

Extended reals are plain floats (``math.inf`` / ``-math.inf`` are legal
values); this module supplies the conventions the rest of the package
relies on:

* ``0 * inf == 0`` inside integration (mass zero kills any value),
* ``(+inf) + (-inf)`` is a trapped error, never a silent ``nan``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf
NEG_INF = -math.inf

XReal = float


class MeasureLimitsError(Exception):
    """Base class for all package errors."""


class MalformedObjectError(MeasureLimitsError):
    """A measure or function violates its structural invariants."""


class DomainMismatchError(MeasureLimitsError):
    """Two objects that must share a domain do not."""


class UndefinedIntegralError(MeasureLimitsError):
    """Both the positive and the negative part of an integral diverge."""


class NotIntegrableError(MeasureLimitsError):
    """An operation requires an absolutely integrable input and got none."""


class UndefinedArithmeticError(MeasureLimitsError):
    """An (+inf) + (-inf)-style operation was attempted."""


class UnsupportedScenarioError(MeasureLimitsError):
    """The requested computation is rejected rather than approximated."""


class ScheduleError(MeasureLimitsError):
    """An epigraphical-limit schedule is inconsistent with the index range."""


class ScenarioFormatError(MeasureLimitsError):
    """A scenario document failed validation; message carries the field path."""


def xadd(a: float, b: float) -> float:
    """Add extended reals, trapping the undefined inf + (-inf) case."""
    if math.isinf(a) and math.isinf(b) and (a > 0) != (b > 0):
        raise UndefinedArithmeticError("(+inf) + (-inf) is undefined")
    return a + b


def xsub(a: float, b: float) -> float:
    return xadd(a, -b)


def xmul_mass(value: float, mass: float) -> float:
    """value * mass with the measure-theoretic convention 0 * inf = 0.

    ``mass`` must be nonnegative and finite.
    """
    if mass == 0.0:
        return 0.0
    return value * mass


def require_not_nan(x: float, what: str) -> float:
    if math.isnan(x):
        raise MalformedObjectError(f"{what} is NaN")
    return x


@dataclass(frozen=True)
class Interval:
    """A closed interval of the real line; either end may be infinite."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo > self.hi:
            raise MalformedObjectError(f"invalid interval [{self.lo}, {self.hi}]")

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, lo: float, hi: float) -> bool:
        return self.lo <= lo and hi <= self.hi

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)
