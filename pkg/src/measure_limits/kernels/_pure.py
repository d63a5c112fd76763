"""Pure-Python reduction kernels.

Same contracts as the compiled backend in ``_fast.pyx``.  Sums are
exactly rounded (``math.fsum``), so results are deterministic and
independent of grouping; the compiled backend uses Neumaier
compensation and may differ from these in the last ulp.
"""

from __future__ import annotations

import math

BACKEND = "pure"


def comp_sum(xs) -> float:
    """Compensated sum of a float sequence, left-to-right semantics."""
    return math.fsum(xs) + 0.0


def pos_neg_dot(values, masses) -> tuple[float, float, bool, bool]:
    """Positive- and negative-part dot product of cell values and masses.

    Returns (pos_sum, neg_sum, pos_inf, neg_inf).  Cells with zero mass
    contribute nothing regardless of value (0 * inf = 0); an infinite
    value with positive mass raises the matching inf flag instead of
    polluting the finite accumulator.
    """
    pos_terms = []
    neg_terms = []
    pos_inf = neg_inf = False
    for v, m in zip(values, masses):
        if m == 0.0 or v == 0.0:
            continue
        if v > 0.0:
            if math.isinf(v):
                pos_inf = True
            else:
                pos_terms.append(v * m)
        else:
            if math.isinf(v):
                neg_inf = True
            else:
                neg_terms.append(-v * m)
    return math.fsum(pos_terms) + 0.0, math.fsum(neg_terms) + 0.0, pos_inf, neg_inf


def tail_dot(values, masses, k: float) -> tuple[float, bool]:
    """Sum of |v| * mass over cells with |v| >= k; bool flags an inf term."""
    terms = []
    has_inf = False
    for v, m in zip(values, masses):
        if m == 0.0:
            continue
        a = abs(v)
        if a >= k:
            if math.isinf(a):
                has_inf = True
            else:
                terms.append(a * m)
    return math.fsum(terms) + 0.0, has_inf
