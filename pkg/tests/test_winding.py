import numpy as np
import pytest

from klstab.boundary import silw_condition
from klstab.errors import OriginOnCurve, RefinementBudgetExceeded
from klstab.kl import exterior_zero_count_direct, reduce_boundary
from klstab.scheme import CurveSamples, make_beam_warming
from klstab.winding import (
    RefinementPolicy,
    curve_to_csv,
    exterior_zero_count_winding,
    kl_curve_evaluator,
    sample_kl_curve,
    winding_number,
)

AGREEMENT_PRESETS = [(1, 2), (2, 3), (1, 3)]


def circle_curve(fn, n):
    params = np.linspace(0.0, 2.0 * np.pi, n + 1)
    points = np.asarray(fn(params), dtype=complex)
    points[-1] = points[0]
    return CurveSamples(params=params, points=points, closed=True)


def test_unit_circle_index_one():
    curve = circle_curve(lambda t: np.exp(1j * t), 64)
    result = winding_number(curve)
    assert result.index == 1
    assert abs(result.min_distance - 1.0) < 0.01
    assert not result.origin_on_curve


def test_offset_circle_index_zero():
    curve = circle_curve(lambda t: 3.0 + np.exp(1j * t), 256)
    assert winding_number(curve, evaluator=lambda t: 3.0 + np.exp(1j * t)).index == 0


def test_reversed_double_cover_index_minus_two():
    curve = circle_curve(lambda t: np.exp(-2j * t), 128)
    assert winding_number(curve).index == -2


def test_constant_curve_has_index_zero():
    params = np.linspace(0.0, 2.0 * np.pi, 65)
    points = np.full(65, 2.0 - 1.0j)
    result = winding_number(CurveSamples(params=params, points=points, closed=True))
    assert result.index == 0
    assert abs(result.min_distance - abs(2.0 - 1.0j)) < 1e-12


def test_open_curve_rejected():
    params = np.array([0.0, 1.0, 2.0])
    points = np.array([1.0 + 0j, 1j, -1.0 + 0j])
    with pytest.raises(ValueError):
        winding_number(CurveSamples(params=params, points=points, closed=False))


def test_origin_on_curve_raises():
    curve = circle_curve(lambda t: np.exp(1j * t) - 1.0, 64)
    with pytest.raises(OriginOnCurve) as excinfo:
        winding_number(curve, evaluator=lambda t: np.exp(1j * t) - 1.0)
    assert excinfo.value.result.origin_on_curve
    assert excinfo.value.result.index is None


def test_refinement_needed_without_evaluator():
    curve = circle_curve(lambda t: np.exp(1j * t), 4)
    with pytest.raises(RefinementBudgetExceeded):
        winding_number(curve)


def test_refinement_budget_exceeded():
    policy = RefinementPolicy(max_evaluations=6)
    curve = circle_curve(lambda t: np.exp(1j * t), 4)
    with pytest.raises(RefinementBudgetExceeded):
        winding_number(curve, policy, evaluator=lambda t: np.exp(1j * t))


def test_coarse_start_refines_to_correct_index():
    # a near-origin passage forces insertion; the index must match a dense run
    fn = lambda t: np.exp(1j * t) - 0.985
    coarse = winding_number(circle_curve(fn, 64), evaluator=fn)
    dense = winding_number(circle_curve(fn, 16384), evaluator=fn)
    assert coarse.index == dense.index == 1
    assert coarse.samples_used > 65


def test_scale_invariance_of_kl_curve_index():
    rng = np.random.default_rng(13)
    s = make_beam_warming(1.4)
    rb = reduce_boundary(s, silw_condition(2, 2, 3, 0.0))
    curve = sample_kl_curve(s, rb, n0=1024)
    base = winding_number(curve, evaluator=kl_curve_evaluator(s, rb)).index
    for _ in range(20):
        c = rng.uniform(0.1, 10.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        scaled = CurveSamples(params=curve.params, points=curve.points * c, closed=True)
        result = winding_number(scaled, evaluator=lambda t, c=c: c * kl_curve_evaluator(s, rb)(t))
        assert result.index == base


def test_normalized_counts_match_direct_on_grid():
    lams = np.linspace(0.04, 1.96, 49)
    for kd, d in AGREEMENT_PRESETS:
        for lam in lams:
            s = make_beam_warming(lam)
            bc = silw_condition(s.r, kd, d, 0.0)
            rb = reduce_boundary(s, bc)
            direct = exterior_zero_count_direct(rb)
            if direct.has_boundary_band:
                continue
            try:
                count = exterior_zero_count_winding(s, rb, n0=1024)
            except OriginOnCurve:
                continue
            assert count == direct.count, (kd, d, lam)


def test_halving_samples_keeps_index():
    lams = np.linspace(0.04, 1.96, 49)
    for kd, d in AGREEMENT_PRESETS:
        for lam in lams:
            s = make_beam_warming(lam)
            rb = reduce_boundary(s, silw_condition(s.r, kd, d, 0.0))
            try:
                full = exterior_zero_count_winding(s, rb, n0=256)
                half = exterior_zero_count_winding(s, rb, n0=128)
            except OriginOnCurve:
                continue
            assert full == half, (kd, d, lam)


def test_sample_kl_curve_shape_and_closure():
    s = make_beam_warming(0.7)
    rb = reduce_boundary(s, silw_condition(2, 2, 3, 0.0))
    curve = sample_kl_curve(s, rb, n0=128)
    assert curve.params.size == 129
    assert curve.closed
    # stable case: curve stays away from the origin
    assert np.min(np.abs(curve.points)) > 1.0


def test_normalization_shifts_index_by_r():
    s = make_beam_warming(0.7)
    rb = reduce_boundary(s, silw_condition(2, 2, 3, 0.0))
    plain = winding_number(
        sample_kl_curve(s, rb, n0=1024, normalize=False),
        evaluator=kl_curve_evaluator(s, rb, normalize=False),
    )
    normalized = winding_number(
        sample_kl_curve(s, rb, n0=1024, normalize=True),
        evaluator=kl_curve_evaluator(s, rb, normalize=True),
    )
    assert plain.index - s.r == normalized.index
    assert normalized.index == 0  # strongly stable here


def test_curve_csv_format():
    s = make_beam_warming(0.7)
    rb = reduce_boundary(s, silw_condition(2, 2, 3, 0.0))
    text = curve_to_csv(sample_kl_curve(s, rb, n0=64))
    lines = text.strip().split("\n")
    assert lines[0] == "theta,re,im"
    assert len(lines) == 66
    theta, re, im = lines[1].split(",")
    assert float(theta) == 0.0
    complex(float(re), float(im))
