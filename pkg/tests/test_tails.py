import math

import numpy as np
import pytest

from measure_limits import (
    FiniteMeasure,
    FnSequence,
    Interval,
    MalformedObjectError,
    PiecewiseFn,
    check_tail_table,
    constant_measures,
    lebesgue,
    part,
    tail_curve,
    tail_integral,
    verdict,
    shift_search,
    zero_fn,
)
from measure_limits import gallery
from measure_limits.fatou import neg_part_seq

from helpers import constant_seq, scan_tail, zero_seq

DOM = Interval(0.0, 1.0)


def staircase_pair(n_max=16):
    sc = gallery.build("staircase", n_max=n_max)
    return neg_part_seq(sc), sc.measures, sc


def spikes_pair(n_max=50):
    sc = gallery.build("twin_spikes", n_max=n_max)
    return neg_part_seq(sc), sc.measures, sc


def test_staircase_tail_closed_form():
    neg, measures, _ = staircase_pair()
    # ceil(3) = 3: (3+1)/2^2 = 1
    for n in (1, 5, 16):
        assert tail_integral(neg, measures, n, 3.0) == pytest.approx(1.0, abs=1e-12)
        assert tail_integral(neg, measures, n, 2.5) == pytest.approx(1.0, abs=1e-12)


def test_spike_tail_is_one_below_index():
    neg, measures, _ = spikes_pair()
    for n, k in [(10, 5.0), (10, 10.0), (40, 40.0)]:
        assert tail_integral(neg, measures, n, k) == pytest.approx(1.0, abs=1e-15)
    assert tail_integral(neg, measures, 10, 10.5) == 0.0


def test_tail_zero_above_uniform_bound():
    seq = constant_seq(PiecewiseFn([0.0, 1.0], [-3.0], 0.0, DOM), 4)
    measures = constant_measures(lebesgue(0.0, 1.0), 4)
    assert tail_integral(seq, measures, 2, 3.5) == 0.0


def test_tail_against_scan_oracle():
    neg, measures, _ = staircase_pair()
    rng = np.random.default_rng(23)
    for _ in range(25):
        n = int(rng.integers(1, 17))
        k = float(rng.uniform(0.5, 12.0))
        assert tail_integral(neg, measures, n, k) == pytest.approx(
            scan_tail(neg.fn(n), measures.measure(n), k), abs=1e-12)


def test_curve_monotone_and_sup_dominates_window():
    neg, measures, sc = staircase_pair()
    curve = tail_curve(neg, measures, sc.k_grid, sc.window_start)
    assert np.all(np.diff(curve.table, axis=1) <= 1e-12)
    assert np.all(curve.sup_curve >= curve.limsup_curve - 1e-15)
    assert bool(np.all(curve.stabilized))


def test_zero_family_has_zero_curve():
    seq = zero_seq(DOM, 6)
    measures = constant_measures(lebesgue(0.0, 1.0), 6)
    curve = tail_curve(seq, measures, (1.0, 2.0), 3)
    assert np.all(curve.table == 0.0)


def test_verdict_threshold_and_k_star():
    neg, measures, _ = staircase_pair()
    grid = tuple(float(k) for k in range(1, 21))
    curve = tail_curve(neg, measures, grid, 9)
    v = verdict(curve, "ui", tol=1e-2)
    # (13)/2^11 < 1e-2 at K = 12
    assert v.passes and v.k_star == 12.0


def test_verdict_empty_tail_family():
    seq = constant_seq(PiecewiseFn([0.0, 1.0], [-0.25], 0.0, DOM), 4)
    measures = constant_measures(lebesgue(0.0, 1.0), 4)
    curve = tail_curve(seq, measures, (0.5, 1.0), 2)
    v = verdict(curve, "ui", tol=1e-9)
    assert v.passes and v.k_star == 0.5


def test_spikes_fail_aui_on_capped_grid():
    neg, measures, sc = spikes_pair()
    curve = tail_curve(neg, measures, sc.k_grid, sc.window_start)
    assert not verdict(curve, "aui").passes
    assert not verdict(curve, "ui").passes


def test_shift_search_first_index_offender():
    bad = PiecewiseFn([0.0, 1.0], [math.inf], 0.0, DOM)
    fns = [bad] + [zero_fn(DOM)] * 5
    seq = FnSequence(6, lambda n: fns[n - 1])
    measures = constant_measures(lebesgue(0.0, 1.0), 6)
    assert shift_search(seq, measures, 1e-6, 4.0, 5) == 1


def test_shift_search_zero_for_uniform_family():
    neg, measures, sc = staircase_pair()
    assert shift_search(neg, measures, 1e-6, max(sc.k_grid), 10) == 0


def test_shift_search_absent_for_spikes():
    neg, measures, sc = spikes_pair()
    assert shift_search(neg, measures, 1e-6, max(sc.k_grid), 50) is None


def test_shift_search_never_empties_the_range():
    seq = constant_seq(PiecewiseFn([0.0, 1.0], [-5.0], 0.0, DOM), 3)
    measures = constant_measures(lebesgue(0.0, 1.0), 3)
    # tails never vanish at k=2 < 5, and N must stay < n_max
    assert shift_search(seq, measures, 1e-6, 2.0, 99) is None


def test_table_check_staircase_holds_without_shift():
    neg, measures, sc = staircase_pair()
    curve = tail_curve(neg, measures, sc.k_grid, sc.window_start)
    res = check_tail_table(curve.table, sc.k_grid, sc.window_start, 1e-6)
    assert res.status == "holds" and res.shift == 0


def test_table_check_inverse_rows_hold():
    grid = (1.0, 2.0, 4.0, 8.0, 1024.0)
    table = np.array([[1.0 / k for k in grid]] * 6)
    res = check_tail_table(table, grid, 4, tol=1e-2)
    assert res.status == "holds"


def test_table_check_not_triggered_for_constant_one():
    grid = (1.0, 2.0, 4.0)
    table = np.ones((8, 3))
    res = check_tail_table(table, grid, 5, tol=0.5)
    assert res.status == "not_triggered"


def test_table_check_rejects_rising_rows():
    grid = (1.0, 2.0)
    table = np.array([[0.5, 0.7]])
    with pytest.raises(MalformedObjectError):
        check_tail_table(table, grid, 1, tol=1e-6)


def test_curve_csv_layout():
    seq = zero_seq(DOM, 2)
    measures = constant_measures(lebesgue(0.0, 1.0), 2)
    curve = tail_curve(seq, measures, (1.0, 2.0), 1)
    lines = curve.to_csv().strip().splitlines()
    assert lines[0] == "K,n=1,n=2,sup,limsup_window"
    assert len(lines) == 3


def test_single_function_family_as_constant_sequence():
    # u.i. of one function w.r.t. a family: the constant-sequence special case
    f = PiecewiseFn([0.0, 0.5], [-4.0], 0.0, DOM)
    measures = FiniteMeasure(cells=[(0.0, 1.0, 1.0)], domain=DOM)
    seq = constant_seq(part(f, "negative"), 5)
    curve = tail_curve(seq, constant_measures(measures, 5), (1.0, 4.0, 8.0), 3)
    assert verdict(curve, "ui").passes  # vanishes once K > 4
    assert curve.sup_curve[0] == pytest.approx(2.0)


def test_comb_negative_part_curves_flat_below_window_power():
    from measure_limits import gallery
    from measure_limits.fatou import neg_tail_curve
    import math as _m
    sc = gallery.build("dyadic_comb", n_max=20)
    curve = neg_tail_curve(sc)
    # window starts at 13 and the grid tops out at 4096 = 2^12 < 2^13, so
    # both aggregates sit at the constant cliff mass 1/(2 ln 2)
    level = 1.0 / (2.0 * _m.log(2.0))
    assert np.all(np.abs(curve.sup_curve - level) <= 1e-12)
    assert np.all(np.abs(curve.limsup_curve - level) <= 1e-12)
    assert curve.window_start == 13
