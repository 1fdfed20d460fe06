"""Winding number of the origin for sampled closed curves, with insertion refinement.

The zero count of the determinant outside the closed unit disk equals minus
the winding index of the normalized determinant curve around the origin, so
getting an integer reliably matters more than raw accuracy. The polygon
angle sum is refined by inserting curve midpoints wherever a single turn is
too large or a segment passes suspiciously close to the origin, within a
fixed evaluation budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .config import DEFAULT_TOLS
from .errors import OriginOnCurve, RefinementBudgetExceeded
from .kl import ReducedBoundary, kl_det_explicit
from .scheme import CurveSamples, Scheme


@dataclass(frozen=True)
class RefinementPolicy:
    """Controls for the adaptive winding computation.

    A segment is split when its angle increment exceeds ``angle_threshold``
    or its distance to the origin is below ``proximity_factor`` times its
    length; splitting stops at ``max_evaluations`` total curve evaluations.
    The origin counts as lying on the curve when the closest approach falls
    below ``origin_rel_tol`` times the largest sampled modulus.
    """

    max_evaluations: int = 2**16
    angle_threshold: float = math.pi / 2.0
    proximity_factor: float = 4.0
    origin_rel_tol: float = DEFAULT_TOLS.origin_tol
    integer_tol: float = 1e-6


DEFAULT_POLICY = RefinementPolicy()


@dataclass(frozen=True)
class WindingResult:
    """Index of the origin (None when the origin lies on the curve)."""

    index: Optional[int]
    min_distance: float
    samples_used: int
    origin_on_curve: bool


def _segment_distance_to_origin(pa: complex, pb: complex) -> float:
    d = pb - pa
    len2 = abs(d) ** 2
    if len2 == 0.0:
        return abs(pa)
    t = -((pa * d.conjugate()).real) / len2
    t = min(1.0, max(0.0, t))
    return abs(pa + t * d)


def winding_number(
    curve: CurveSamples,
    policy: RefinementPolicy = DEFAULT_POLICY,
    evaluator: Optional[Callable[[float], complex]] = None,
) -> WindingResult:
    """Signed number of turns of a closed sampled curve around the origin.

    ``evaluator`` maps a parameter value to a curve point and is called for
    inserted midpoints; without it any segment that needs refinement is a
    hard error. Raises :class:`OriginOnCurve` when the refined polygon
    comes closer to the origin than the relative threshold, and
    :class:`RefinementBudgetExceeded` when the angle sum cannot be trusted
    within the evaluation budget.
    """
    if not curve.closed:
        raise ValueError("winding numbers are defined for closed curves only")
    params = curve.params
    points = curve.points
    if params.size < 4:
        raise ValueError("need at least 3 distinct points on a closed curve")

    scale = float(np.max(np.abs(points)))
    if scale == 0.0:
        raise OriginOnCurve(
            "curve is identically zero",
            WindingResult(index=None, min_distance=0.0, samples_used=params.size, origin_on_curve=True),
        )

    evaluations = params.size
    total_angle = 0.0
    min_distance = math.inf

    def on_curve(dist: float):
        raise OriginOnCurve(
            f"curve passes within {dist:.3e} of the origin (threshold {policy.origin_rel_tol * scale:.3e})",
            WindingResult(index=None, min_distance=dist, samples_used=evaluations, origin_on_curve=True),
        )

    abs_tol = policy.origin_rel_tol * scale
    for p in points:
        if abs(p) < abs_tol:
            on_curve(float(abs(p)))

    # Depth-first, left-to-right over segments; splitting pushes halves so the
    # accumulation order stays the parameter order.
    stack = [
        (params[k], points[k], params[k + 1], points[k + 1])
        for k in range(params.size - 2, -1, -1)
    ]
    while stack:
        ta, pa, tb, pb = stack.pop()
        seg_len = abs(pb - pa)
        seg_dist = _segment_distance_to_origin(pa, pb)
        increment = np.angle(pb * np.conjugate(pa))
        needs_split = seg_len > 0.0 and (
            abs(increment) > policy.angle_threshold or seg_dist < policy.proximity_factor * seg_len
        )
        if needs_split:
            if evaluator is None:
                raise RefinementBudgetExceeded(
                    "segment needs refinement but no curve evaluator was provided"
                )
            if evaluations + 1 > policy.max_evaluations:
                if seg_dist < abs_tol:
                    on_curve(seg_dist)
                raise RefinementBudgetExceeded(
                    f"refinement exceeded {policy.max_evaluations} curve evaluations"
                )
            tm = 0.5 * (ta + tb)
            pm = complex(evaluator(tm))
            evaluations += 1
            scale = max(scale, abs(pm))
            abs_tol = policy.origin_rel_tol * scale
            if abs(pm) < abs_tol:
                on_curve(float(abs(pm)))
            stack.append((tm, pm, tb, pb))
            stack.append((ta, pa, tm, pm))
            continue
        if seg_dist < abs_tol:
            on_curve(seg_dist)
        min_distance = min(min_distance, seg_dist)
        total_angle += float(increment)

    if min_distance < abs_tol:
        on_curve(min_distance)
    turns = total_angle / (2.0 * math.pi)
    index = round(turns)
    if abs(turns - index) > policy.integer_tol:
        raise RefinementBudgetExceeded(
            f"angle sum {turns:.3e} turns is not within {policy.integer_tol} of an integer"
        )
    return WindingResult(
        index=int(index),
        min_distance=float(min_distance),
        samples_used=evaluations,
        origin_on_curve=False,
    )


def kl_curve_evaluator(
    s: Scheme, rb: ReducedBoundary, normalize: bool = True
) -> Callable[[float], complex]:
    """Parameter-to-point map for the determinant curve on the unit circle.

    With ``normalize`` the determinant is divided by ``z**r``, which shifts
    the winding index so that the exterior zero count is simply its negative.
    """

    def evaluate(theta):
        z = np.exp(1j * np.asarray(theta, dtype=float))
        value = kl_det_explicit(rb, s, z)
        if normalize:
            value = value / z**rb.r
        return value

    return evaluate


def sample_kl_curve(
    s: Scheme,
    rb: ReducedBoundary,
    n0: int = 1024,
    normalize: bool = True,
) -> CurveSamples:
    """Sample the determinant curve at ``n0 + 1`` uniform parameters on [0, 2pi]."""
    if n0 < 64:
        raise ValueError("n0 must be at least 64")
    params = np.linspace(0.0, 2.0 * np.pi, n0 + 1)
    points = np.asarray(kl_curve_evaluator(s, rb, normalize)(params), dtype=complex)
    points[-1] = points[0]
    return CurveSamples(params=params, points=points, closed=True)


def exterior_zero_count_winding(
    s: Scheme,
    rb: ReducedBoundary,
    n0: int = 1024,
    policy: RefinementPolicy = DEFAULT_POLICY,
) -> int:
    """Zero count of the determinant outside the closed unit disk, by winding.

    Equals ``r`` minus the index of the raw determinant curve; on the
    normalized curve used here that is just minus the index. Propagates
    :class:`OriginOnCurve` when a zero sits on the unit circle itself.
    """
    curve = sample_kl_curve(s, rb, n0=n0, normalize=True)
    result = winding_number(curve, policy, evaluator=kl_curve_evaluator(s, rb, normalize=True))
    return -result.index


def curve_to_csv(curve: CurveSamples) -> str:
    """CSV dump with columns theta, re, im."""
    lines = ["theta,re,im"]
    for theta, point in zip(curve.params, curve.points):
        lines.append(f"{float(theta)!r},{float(point.real)!r},{float(point.imag)!r}")
    return "\n".join(lines) + "\n"
