"""Sequential epigraphical lower and upper limits.

The epi-liminf of a function sequence at s is the supremum over index
thresholds N and ball radii delta of the infimum of f_n(s') over n >= N
and s' in the delta-ball around s.  A finite schedule of (N_j, delta_j)
pairs realizes the inner inf/sup exactly (cell scans are exact for step
functions) but truncates the outer limit, so every estimate carries a
certainty tag: ``exact`` requires an analytic certificate or an eventual
form, otherwise the value is ``window``-truncated and downstream checks
must not treat it as a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .functions import EpiCertificate, FnSequence
from .kernels import comp_sum, pos_neg_dot
from .measures import FiniteMeasure
from .refinement import common_refinement, fn_cell_values, measure_cell_masses
from .xreal import ScheduleError, UndefinedIntegralError

EXACT = "exact"
WINDOW = "window"


@dataclass(frozen=True)
class EpiSchedule:
    """Pairs of rising index thresholds and shrinking ball radii."""

    steps: tuple[tuple[int, float], ...]
    n_max: int

    def __post_init__(self) -> None:
        if not self.steps:
            raise ScheduleError("schedule needs at least one (N, delta) step")
        ns = [n for n, _ in self.steps]
        ds = [d for _, d in self.steps]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ScheduleError("index thresholds must be strictly increasing")
        if any(b >= a for a, b in zip(ds, ds[1:])) or ds[-1] <= 0:
            raise ScheduleError("ball radii must be strictly decreasing and positive")
        if ns[-1] > self.n_max:
            raise ScheduleError(
                f"schedule exhausts the index range: N={ns[-1]} > n_max={self.n_max}")

    @property
    def final_delta(self) -> float:
        return self.steps[-1][1]

    @classmethod
    def default(cls, n_max: int, window_start: Optional[int] = None
                ) -> "EpiSchedule":
        """Dyadic schedule; the last threshold is capped at the trailing
        analysis window so tail infima and windowed liminf ranges align."""
        cap = min(window_start or n_max, n_max)
        steps = []
        for j in range(1, 13):
            n = min(2 ** j, cap)
            if steps and n <= steps[-1][0]:
                break
            steps.append((n, 2.0 ** -j))
            if n == cap:
                break
        return cls(tuple(steps), n_max)


@dataclass(frozen=True)
class EpiEstimate:
    per_j: tuple[float, ...]
    value: float
    certainty: str          # EXACT | WINDOW
    stabilized: bool
    source: str             # "certificate" | "eventual" | "window"


def _scan(seq: FnSequence, s: float, sched: EpiSchedule, lower: bool
          ) -> list[float]:
    per_j = []
    for n0, delta in sched.steps:
        best = math.inf if lower else -math.inf
        for n in range(n0, seq.n_max + 1):
            lo, hi = seq.fn(n).range_on(s - delta, s + delta, False, False)
            best = min(best, lo) if lower else max(best, hi)
        per_j.append(best)
    return per_j


def _estimate(seq: FnSequence, s: float, sched: EpiSchedule, lower: bool,
              stab_tol: float) -> EpiEstimate:
    per_j = _scan(seq, s, sched, lower)
    cert = seq.epi_liminf_cert if lower else seq.epi_limsup_cert
    if cert is not None:
        value = cert.value_at(s, "lower" if lower else "upper")
        return EpiEstimate(tuple(per_j), value, EXACT, True, "certificate")
    if seq.eventual_form is not None:
        ev = seq.eventual_form(s, sched.final_delta)
        if ev is not None:
            _, h = ev
            value = h.lower_envelope(s) if lower else h.upper_envelope(s)
            return EpiEstimate(tuple(per_j), value, EXACT, True, "eventual")
    value = per_j[-1]
    if len(per_j) >= 2:
        a, b = per_j[-2], per_j[-1]
        stab = (a == b) if (math.isinf(a) or math.isinf(b)) else abs(a - b) <= stab_tol
    else:
        stab = False
    return EpiEstimate(tuple(per_j), value, WINDOW, stab, "window")


def epi_liminf(seq: FnSequence, s: float, sched: EpiSchedule,
               stab_tol: float = 1e-9) -> EpiEstimate:
    """liminf over n -> inf, s' -> s of f_n(s'); -inf propagates."""
    return _estimate(seq, s, sched, True, stab_tol)


def epi_limsup(seq: FnSequence, s: float, sched: EpiSchedule,
               stab_tol: float = 1e-9) -> EpiEstimate:
    return _estimate(seq, s, sched, False, stab_tol)


def _agree(lo: EpiEstimate, hi: EpiEstimate, tol: float) -> bool:
    if math.isinf(lo.value) or math.isinf(hi.value):
        return lo.value == hi.value
    return abs(hi.value - lo.value) <= tol


@dataclass(frozen=True)
class ExistsReport:
    points: tuple[float, ...]
    point_ok: tuple[bool, ...]
    exception_mass: float
    mass_exact: bool

    @property
    def all_ok(self) -> bool:
        return all(self.point_ok)


def epi_limit_exists(seq: FnSequence, grid, sched: EpiSchedule, tol: float,
                     m: FiniteMeasure, stab_tol: float = 1e-9) -> ExistsReport:
    """Pointwise existence of the epigraphical limit plus the measure of
    the estimated exception set.

    A sample point passes when liminf and limsup agree within tol and both
    carry equal-strength certainty (both exact or both stabilized).  With
    certificates on both sides the exception mass is exact: it is the
    measure of the step-function disagreement set.  Otherwise the mass is
    a sample-based estimate: isolated failures contribute only the atom
    mass at the point, runs of failures contribute their midpoint cells.
    """
    pts = sorted(float(x) for x in grid)
    oks = []
    for s in pts:
        lo = epi_liminf(seq, s, sched, stab_tol)
        hi = epi_limsup(seq, s, sched, stab_tol)
        comparable = ((lo.certainty == EXACT and hi.certainty == EXACT)
                      or (lo.stabilized and hi.stabilized))
        oks.append(comparable and _agree(lo, hi, tol))
    lo_cert, hi_cert = seq.epi_liminf_cert, seq.epi_limsup_cert
    if lo_cert is not None and hi_cert is not None:
        mass = _cert_disagreement_mass(lo_cert, hi_cert, m, tol)
        return ExistsReport(tuple(pts), tuple(oks), mass, True)
    terms = []
    for i, s in enumerate(pts):
        if oks[i]:
            continue
        left_bad = i > 0 and not oks[i - 1]
        right_bad = i + 1 < len(pts) and not oks[i + 1]
        lo_edge = (pts[i - 1] + s) / 2 if left_bad else s
        hi_edge = (s + pts[i + 1]) / 2 if right_bad else s
        if lo_edge == hi_edge:
            terms.append(m.mass_of_interval(s, s, True, True))
        else:
            terms.append(m.mass_of_interval(lo_edge, hi_edge, True, True))
    mass = comp_sum(np.asarray(terms)) if terms else 0.0
    return ExistsReport(tuple(pts), tuple(oks), mass, False)


def _cert_disagreement_mass(lo_cert: EpiCertificate, hi_cert: EpiCertificate,
                            m: FiniteMeasure, tol: float) -> float:
    p = common_refinement([lo_cert.fn, hi_cert.fn, m])
    lv = fn_cell_values(lo_cert.fn, p)
    hv = fn_cell_values(hi_cert.fn, p)
    masses = measure_cell_masses(m, p)
    with np.errstate(invalid="ignore"):
        both_inf = np.isinf(lv) & np.isinf(hv) & (np.sign(lv) == np.sign(hv))
        diff = np.where(both_inf, 0.0, np.abs(hv - lv))
        bad = ~(diff <= tol)
    terms = [comp_sum(masses[bad])] if np.any(bad) else []
    for loc, w in zip(m.atom_locs, m.atom_weights):
        a = lo_cert.value_at(float(loc), "lower")
        b = hi_cert.value_at(float(loc), "upper")
        same_inf = math.isinf(a) and math.isinf(b) and (a > 0) == (b > 0)
        if not (same_inf or (math.isfinite(a) and math.isfinite(b)
                             and abs(b - a) <= tol)):
            terms.append(w)
    return comp_sum(np.asarray(terms)) if terms else 0.0


def _integrate_certificate(cert: EpiCertificate, m: FiniteMeasure,
                           direction: str) -> float:
    """Exact integral of a certificate: cells pointwise, atoms by
    envelope/override in the certificate's semicontinuity direction."""
    p = common_refinement([cert.fn, m])
    vals = fn_cell_values(cert.fn, p)
    masses = measure_cell_masses(m, p)
    if m.atom_locs.size:
        avals = np.asarray([cert.value_at(float(loc), direction)
                            for loc in m.atom_locs])
        vals = np.concatenate([vals, avals])
        masses = np.concatenate([masses, m.atom_weights])
    pos, neg, pos_inf, neg_inf = pos_neg_dot(vals, masses)
    if pos_inf and neg_inf:
        raise UndefinedIntegralError("certificate integral undefined")
    if pos_inf:
        return math.inf
    if neg_inf:
        return -math.inf
    return pos - neg


def epi_integral(seq: FnSequence, m: FiniteMeasure, which: str,
                 sched: EpiSchedule, grid, stab_tol: float = 1e-9
                 ) -> tuple[float, str]:
    """Integral of the epi-liminf/limsup against m, with a certainty tag.

    With an analytic certificate the value is exact.  Without one the
    domain is cut at the sample grid, the windowed estimate at each cell
    midpoint stands in for the cell, and the certainty is ``window``.
    """
    if which not in ("liminf", "limsup"):
        raise ValueError(f"which must be 'liminf' or 'limsup', got {which!r}")
    lower = which == "liminf"
    cert = seq.epi_liminf_cert if lower else seq.epi_limsup_cert
    if cert is not None:
        return (_integrate_certificate(cert, m, "lower" if lower else "upper"),
                EXACT)
    est = lambda s: _estimate(seq, s, sched, lower, stab_tol).value  # noqa: E731
    # refine by the trailing-tail functions so each is cell-constant; the
    # midpoint estimate then bounds every tail function's cell value from
    # the certified side, which keeps windowed Fatou gaps one-sided
    tail_bps = [seq.fn(n).breakpoints
                for n in range(sched.steps[-1][0], seq.n_max + 1)]
    edges = np.unique(np.concatenate([
        np.asarray(sorted(float(x) for x in grid)),
        m.piece_edges(),
        np.asarray([m.domain.lo, m.domain.hi]),
        *tail_bps,
    ]))
    edges = edges[(edges >= m.domain.lo) & (edges <= m.domain.hi)]
    masses = m.continuous_cell_masses(edges)
    mids = (edges[:-1] + edges[1:]) / 2.0
    unbounded = ~np.isfinite(mids)
    if np.any(unbounded):
        finite_edge = np.where(np.isfinite(edges[:-1]), edges[:-1], edges[1:] - 1.0)
        mids = np.where(unbounded, finite_edge + 1.0, mids)
    vals = np.asarray([est(float(x)) for x in mids])
    if m.atom_locs.size:
        vals = np.concatenate([vals, [est(float(loc)) for loc in m.atom_locs]])
        masses = np.concatenate([masses, m.atom_weights])
    pos, neg, pos_inf, neg_inf = pos_neg_dot(vals, masses)
    if pos_inf and neg_inf:
        raise UndefinedIntegralError("epi integral undefined")
    if pos_inf:
        return math.inf, WINDOW
    if neg_inf:
        return -math.inf, WINDOW
    return pos - neg, WINDOW
