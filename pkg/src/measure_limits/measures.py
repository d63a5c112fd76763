"""Finite nonnegative measures on real intervals.

A measure is a sum of three layers: point atoms, constant-density cells,
and analytic segments whose sub-interval mass comes from a closed-form
CDF.  Atoms may sit inside cells (masses add); cells and segments must
not overlap each other.  Quadrature never enters the main path: analytic
masses are CDF differences, which keeps the gallery's closed-form
constants exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .kernels import comp_sum
from .xreal import Interval, MalformedObjectError

_LN2 = math.log(2.0)


def _exp2_cdf(s):
    return (1.0 - np.exp2(-np.asarray(s, dtype=np.float64))) / _LN2


def _exp2_mass(a, b):
    # 2^-a * (1 - 2^-(b-a)) / ln 2, written to avoid cancellation for b - a << 1
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return np.exp2(-a) * (-np.expm1(-(b - a) * _LN2)) / _LN2


@dataclass(frozen=True)
class AnalyticSegment:
    """Measure layer on [lo, hi] defined by a monotone CDF with cdf(lo) = 0.

    ``mass_fn``, when given, returns the exact mass of a subinterval and
    is preferred over CDF differences (it can avoid cancellation); the
    CDF remains the definition and the cross-check oracle target.
    """

    name: str
    lo: float
    hi: float
    cdf: Callable[[np.ndarray], np.ndarray]
    mass_fn: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and self.lo < self.hi):
            raise MalformedObjectError(f"bad segment bounds [{self.lo}, {self.hi}]")
        total = float(np.asarray(self.cdf(self.hi)))
        if not (math.isfinite(total) and total >= 0):
            raise MalformedObjectError(f"segment {self.name!r} has non-finite total mass")

    @property
    def total(self) -> float:
        return float(np.asarray(self.cdf(self.hi)))

    def mass(self, a, b) -> np.ndarray:
        """Exact mass of [a, b) subintervals (arrays allowed)."""
        a = np.clip(np.asarray(a, dtype=np.float64), self.lo, self.hi)
        b = np.clip(np.asarray(b, dtype=np.float64), self.lo, self.hi)
        if self.mass_fn is not None:
            out = self.mass_fn(a, b)
        else:
            out = np.asarray(self.cdf(b)) - np.asarray(self.cdf(a))
        return np.maximum(out, 0.0)


#: Named CDFs resolvable from scenario files.
CDF_REGISTRY: dict[str, Callable[[float, float], AnalyticSegment]] = {
    "exp2": lambda lo, hi: AnalyticSegment("exp2", lo, hi, _exp2_cdf, _exp2_mass),
}


def make_segment(name: str, lo: float, hi: float) -> AnalyticSegment:
    try:
        factory = CDF_REGISTRY[name]
    except KeyError:
        raise MalformedObjectError(
            f"unknown analytic CDF {name!r}; known: {sorted(CDF_REGISTRY)}") from None
    return factory(lo, hi)


class FiniteMeasure:
    """Finite nonnegative measure: atoms + density cells + analytic segments."""

    __slots__ = ("atom_locs", "atom_weights", "cell_los", "cell_his",
                 "cell_densities", "segments", "domain")

    def __init__(self, atoms=(), cells=(), segments=(),
                 domain: Interval = Interval(-math.inf, math.inf)):
        atoms = sorted(atoms)
        self.atom_locs = np.asarray([a[0] for a in atoms], dtype=np.float64)
        self.atom_weights = np.asarray([a[1] for a in atoms], dtype=np.float64)
        cells = sorted(cells)
        self.cell_los = np.asarray([c[0] for c in cells], dtype=np.float64)
        self.cell_his = np.asarray([c[1] for c in cells], dtype=np.float64)
        self.cell_densities = np.asarray([c[2] for c in cells], dtype=np.float64)
        self.segments = tuple(sorted(segments, key=lambda s: s.lo))
        self.domain = domain
        self._validate()

    def _validate(self) -> None:
        if self.atom_locs.size:
            if not np.all(np.isfinite(self.atom_locs)):
                raise MalformedObjectError("atom locations must be finite")
            if np.any(self.atom_weights < 0) or not np.all(np.isfinite(self.atom_weights)):
                raise MalformedObjectError("atom weights must be finite and >= 0")
            if np.unique(self.atom_locs).size != self.atom_locs.size:
                raise MalformedObjectError("duplicate atom locations")
            if np.any(self.atom_locs < self.domain.lo) or np.any(self.atom_locs > self.domain.hi):
                raise MalformedObjectError("atom outside domain")
        if self.cell_los.size:
            if not (np.all(np.isfinite(self.cell_los)) and np.all(np.isfinite(self.cell_his))):
                raise MalformedObjectError("cell bounds must be finite")
            if np.any(self.cell_his <= self.cell_los):
                raise MalformedObjectError("cell needs lo < hi")
            if np.any(self.cell_densities < 0) or not np.all(np.isfinite(self.cell_densities)):
                raise MalformedObjectError("cell density must be finite and >= 0")
        # cells and segments must be pairwise non-overlapping
        spans = sorted(
            [(lo, hi, f"cell [{lo}, {hi})") for lo, hi in zip(self.cell_los, self.cell_his)]
            + [(s.lo, s.hi, f"segment {s.name!r} [{s.lo}, {s.hi})") for s in self.segments])
        for (lo1, hi1, d1), (lo2, hi2, d2) in zip(spans, spans[1:]):
            if lo2 < hi1:
                raise MalformedObjectError(f"overlapping regions: {d1} and {d2}")
        for lo, hi, desc in spans:
            if lo < self.domain.lo or hi > self.domain.hi:
                raise MalformedObjectError(f"{desc} outside domain")

    # -- masses ----------------------------------------------------------

    def total_mass(self) -> float:
        parts = [self.atom_weights,
                 self.cell_densities * (self.cell_his - self.cell_los),
                 np.asarray([s.total for s in self.segments])]
        return comp_sum(np.concatenate(parts)) if any(p.size for p in parts) else 0.0

    def continuous_cell_masses(self, edges: np.ndarray) -> np.ndarray:
        """Masses of the partition cells [edges[i], edges[i+1]) from the
        non-atomic layers.  ``edges`` must span the whole domain (infinite
        endpoints included) and contain every cell and segment endpoint of
        this measure, so each partition cell meets one layer piece at
        most; masses are then exact."""
        out = np.zeros(edges.size - 1)
        for lo, hi, rho in zip(self.cell_los, self.cell_his, self.cell_densities):
            i0 = int(np.searchsorted(edges, lo, side="left"))
            i1 = int(np.searchsorted(edges, hi, side="left"))
            if rho:
                out[i0:i1] += rho * (edges[i0 + 1:i1 + 1] - edges[i0:i1])
        for seg in self.segments:
            i0 = int(np.searchsorted(edges, seg.lo, side="left"))
            i1 = int(np.searchsorted(edges, seg.hi, side="left"))
            out[i0:i1] += seg.mass(edges[i0:i1], edges[i0 + 1:i1 + 1])
        return out

    def mass_of_interval(self, lo: float, hi: float,
                         lo_closed: bool = True, hi_closed: bool = False) -> float:
        """Mass of an interval; endpoint atoms included per the closed flags."""
        if hi < lo:
            return 0.0
        terms = []
        for aloc, w in zip(self.atom_locs, self.atom_weights):
            if (lo < aloc < hi) or (aloc == lo and lo_closed) or (aloc == hi and hi_closed):
                terms.append(w)
        clip_lo = np.maximum(self.cell_los, lo)
        clip_hi = np.minimum(self.cell_his, hi)
        grab = clip_hi > clip_lo
        terms.extend(self.cell_densities[grab] * (clip_hi[grab] - clip_lo[grab]))
        for seg in self.segments:
            a, b = max(seg.lo, lo), min(seg.hi, hi)
            if b > a:
                terms.append(float(seg.mass(a, b)))
        return comp_sum(np.asarray(terms)) if terms else 0.0

    def piece_edges(self) -> np.ndarray:
        """All finite structural endpoints (cells, segments, atoms)."""
        return np.unique(np.concatenate([
            self.cell_los, self.cell_his,
            np.asarray([s.lo for s in self.segments]),
            np.asarray([s.hi for s in self.segments if math.isfinite(s.hi)]),
            self.atom_locs,
        ]))

    def __repr__(self) -> str:
        return (f"FiniteMeasure({self.atom_locs.size} atoms, "
                f"{self.cell_los.size} cells, {len(self.segments)} segments, "
                f"mass={self.total_mass():.6g})")


def total_mass(m: FiniteMeasure) -> float:
    """Total mass of the measure; finite by construction."""
    return m.total_mass()


def lebesgue(lo: float, hi: float) -> FiniteMeasure:
    return FiniteMeasure(cells=[(lo, hi, 1.0)], domain=Interval(lo, hi))


def point_mass(loc: float, weight: float, domain: Interval) -> FiniteMeasure:
    return FiniteMeasure(atoms=[(loc, weight)], domain=domain)


@dataclass(frozen=True)
class SignedCellMeasure:
    """Signed masses on disjoint regions: point atoms and half-open cells."""

    atom_locs: tuple[float, ...]
    atom_masses: tuple[float, ...]
    cell_edges: tuple[float, ...]
    cell_masses: tuple[float, ...]

    def all_masses(self) -> np.ndarray:
        return np.concatenate([np.asarray(self.atom_masses),
                               np.asarray(self.cell_masses)])


@dataclass
class MeasureSequence:
    """Lazily generated indexed family mu_1..mu_{n_max}."""

    n_max: int
    builder: Callable[[int], FiniteMeasure]
    _cache: dict = field(default_factory=dict, repr=False)

    def measure(self, n: int) -> FiniteMeasure:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"index {n} outside 1..{self.n_max}")
        m = self._cache.get(n)
        if m is None:
            m = self.builder(n)
            if len(self._cache) > 64:
                self._cache.clear()
            self._cache[n] = m
        return m


def constant_measures(m: FiniteMeasure, n_max: int) -> MeasureSequence:
    return MeasureSequence(n_max, lambda n: m)
