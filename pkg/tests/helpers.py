"""Shared test utilities: independent oracles and random object builders.

Oracles deliberately avoid the library's refinement/kernel path: they
evaluate functions pointwise through binary search, accumulate with
math.fsum, and derive analytic masses straight from the CDF, so agreement
with the main path is meaningful.
"""

from __future__ import annotations

import math

import numpy as np

from measure_limits import FiniteMeasure, FnSequence, Interval, MeasureSequence
from measure_limits import PiecewiseFn, Scenario, zero_fn


def brute_edges(f: PiecewiseFn, m: FiniteMeasure) -> list[float]:
    pts = set(float(x) for x in f.breakpoints)
    pts.update(float(x) for x in m.cell_los)
    pts.update(float(x) for x in m.cell_his)
    for s in m.segments:
        pts.add(s.lo)
        if math.isfinite(s.hi):
            pts.add(s.hi)
    for b in (m.domain.lo, m.domain.hi):
        if math.isfinite(b):
            pts.add(b)
    return sorted(pts)


def brute_cell_mass(m: FiniteMeasure, lo: float, hi: float) -> float:
    """Mass of [lo, hi) from the continuous layers, one piece at a time."""
    total = []
    for clo, chi, rho in zip(m.cell_los, m.cell_his, m.cell_densities):
        a, b = max(clo, lo), min(chi, hi)
        if b > a:
            total.append(rho * (b - a))
    for seg in m.segments:
        a, b = max(seg.lo, lo), min(seg.hi, hi)
        if b > a:
            total.append(float(np.asarray(seg.cdf(b)) - np.asarray(seg.cdf(a))))
    return math.fsum(total)


def scan_integrate(f: PiecewiseFn, m: FiniteMeasure) -> float:
    """Pointwise-evaluation integration oracle (finite-valued inputs)."""
    edges = brute_edges(f, m)
    terms = []
    for lo, hi in zip(edges, edges[1:]):
        mid = (lo + hi) / 2.0
        terms.append(f(mid) * brute_cell_mass(m, lo, hi))
    if edges and math.isinf(m.domain.hi):
        # segments may extend beyond the last finite edge
        last = edges[-1]
        terms.append(f(last + 1.0) * brute_cell_mass(m, last, math.inf))
    for loc, w in zip(m.atom_locs, m.atom_weights):
        terms.append(f(float(loc)) * float(w))
    return math.fsum(terms)


def scan_tail(f: PiecewiseFn, m: FiniteMeasure, k: float) -> float:
    """Tail-functional oracle via pointwise |f| indicator scan."""
    edges = brute_edges(f, m)
    terms = []
    for lo, hi in zip(edges, edges[1:]):
        v = abs(f((lo + hi) / 2.0))
        if v >= k:
            terms.append(v * brute_cell_mass(m, lo, hi))
    if edges and math.isinf(m.domain.hi):
        last = edges[-1]
        v = abs(f(last + 1.0))
        if v >= k:
            terms.append(v * brute_cell_mass(m, last, math.inf))
    for loc, w in zip(m.atom_locs, m.atom_weights):
        v = abs(f(float(loc)))
        if v >= k:
            terms.append(v * float(w))
    return math.fsum(terms)


def riemann_mass(density, lo: float, hi: float, n: int = 1_000_000) -> float:
    """Midpoint Riemann sum; the quadrature cross-check for CDF masses."""
    xs = np.linspace(lo, hi, n + 1)
    mids = (xs[:-1] + xs[1:]) / 2.0
    return float(np.sum(density(mids)) * (hi - lo) / n)


def rand_step_fn(rng: np.random.Generator, domain: Interval, max_cells: int = 6,
                 lo: float = -8.0, hi: float = 8.0,
                 ensure_nonneg_cell: bool = False) -> PiecewiseFn:
    n_cells = int(rng.integers(1, max_cells + 1))
    width = domain.hi - domain.lo
    bps = np.sort(rng.uniform(domain.lo, domain.hi, size=n_cells + 1))
    while np.any(np.diff(bps) <= 1e-12 * width):
        bps = np.sort(rng.uniform(domain.lo, domain.hi, size=n_cells + 1))
    vals = rng.uniform(lo, hi, size=n_cells)
    if ensure_nonneg_cell and np.all(vals < 0):
        vals[int(rng.integers(0, n_cells))] = abs(vals[0])
    return PiecewiseFn(bps, vals, 0.0, domain)


def rand_atomic_measure(rng: np.random.Generator, domain: Interval,
                        max_atoms: int = 5) -> FiniteMeasure:
    k = int(rng.integers(1, max_atoms + 1))
    locs = rng.uniform(domain.lo, domain.hi, size=k)
    while np.unique(locs).size != k:
        locs = rng.uniform(domain.lo, domain.hi, size=k)
    weights = rng.uniform(0.0, 2.0, size=k)
    return FiniteMeasure(atoms=list(zip(locs, weights)), domain=domain)


def rand_measure(rng: np.random.Generator, domain: Interval) -> FiniteMeasure:
    """Atoms plus a cell partition of the domain with random densities."""
    cuts = np.sort(rng.uniform(domain.lo, domain.hi,
                               size=int(rng.integers(1, 4))))
    edges = np.concatenate([[domain.lo], cuts, [domain.hi]])
    cells = [(float(a), float(b), float(rng.uniform(0.0, 2.0)))
             for a, b in zip(edges, edges[1:]) if b - a > 1e-9]
    atoms = []
    if rng.random() < 0.5:
        atoms = [(float(rng.uniform(domain.lo, domain.hi)),
                  float(rng.uniform(0.0, 1.0)))]
    return FiniteMeasure(atoms=atoms, cells=cells, domain=domain)


def fatou_random_scenario(rng: np.random.Generator, n_max: int = 16,
                          name: str = "random") -> Scenario:
    """Random scenario for the Fatou property suite.

    mu_n adds one atom of weight <= 1/n at a point where f_n is
    nonnegative, so total-variation distances vanish and the per-index
    integral can only move up from the base value; the windowed gap is
    then one-sided up to rounding.
    """
    domain = Interval(0.0, 1.0)
    base = rand_measure(rng, domain)
    fns = [rand_step_fn(rng, domain, ensure_nonneg_cell=True)
           for _ in range(n_max)]
    perturbed = []
    for n, f in enumerate(fns, start=1):
        nonneg = np.nonzero(f.values >= 0.0)[0]
        i = int(nonneg[int(rng.integers(0, nonneg.size))])
        loc = float((f.breakpoints[i] + f.breakpoints[i + 1]) / 2.0)
        w = float(rng.uniform(0.0, 1.0 / n))
        atoms = list(zip(base.atom_locs, base.atom_weights))
        if any(a == loc for a, _ in atoms):
            atoms = [(a, wt + (w if a == loc else 0.0)) for a, wt in atoms]
        else:
            atoms.append((loc, w))
        cells = list(zip(base.cell_los, base.cell_his, base.cell_densities))
        perturbed.append(FiniteMeasure(atoms=atoms, cells=cells, domain=domain))
    return Scenario(
        name=name,
        measures=MeasureSequence(n_max, lambda n: perturbed[n - 1]),
        limit_measure=base,
        f_seq=FnSequence(n_max, lambda n: fns[n - 1]),
        certificate="tv",
    )


def constant_seq(f: PiecewiseFn, n_max: int) -> FnSequence:
    return FnSequence(n_max, lambda n: f)


def zero_seq(domain: Interval, n_max: int) -> FnSequence:
    return constant_seq(zero_fn(domain), n_max)
