"""Interior schemes: coefficients, structural assumptions and the symbol.

A scheme here is an explicit one-step update using only the current point
and its ``r`` left neighbours,

    U_j^{n+1} = a_{-r} U_{j-r}^n + ... + a_{-1} U_{j-1}^n + a_0 U_j^n,

stored together with its CFL number ``lambda = a*dt/dx``. The coefficients
are real; all presets in scope are real-valued.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .config import DEFAULT_TOLS, Tolerances


@dataclass(frozen=True, eq=False)
class Scheme:
    """Totally upwind stencil ``(a_{-r}, ..., a_0)`` with its CFL number.

    ``a`` is stored in ascending index order, ``a[0] = a_{-r}`` through
    ``a[-1] = a_0``. Construction trims leading near-zero coefficients so the
    non-degeneracy requirement on ``a_{-r}`` holds by representation.
    """

    a: np.ndarray
    lam: float

    def __post_init__(self):
        arr = np.asarray(self.a, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "a", arr)

    @classmethod
    def from_coefficients(
        cls, coefficients: Iterable[float], lam: float, trim_rel: float = DEFAULT_TOLS.trim_rel
    ) -> "Scheme":
        arr = np.asarray(list(coefficients), dtype=float)
        if arr.size == 0:
            raise ValueError("a scheme needs at least one coefficient")
        scale = float(np.max(np.abs(arr)))
        if scale == 0.0:
            raise ValueError("all scheme coefficients are zero")
        first = int(np.argmax(np.abs(arr) > trim_rel * scale))
        if arr.size - first < 1 or not np.any(np.abs(arr) > trim_rel * scale):
            raise ValueError("all scheme coefficients are negligible")
        if lam <= 0:
            raise ValueError("the CFL number must be positive")
        return cls(arr[first:].copy(), float(lam))

    @property
    def r(self) -> int:
        return self.a.size - 1

    @property
    def a_lead(self) -> float:
        """Coefficient of the leftmost stencil point, ``a_{-r}``."""
        return float(self.a[0])

    @property
    def a_zero(self) -> float:
        """Coefficient of the current point, ``a_0``."""
        return float(self.a[-1])


def make_beam_warming(lam: float, trim_rel: float = DEFAULT_TOLS.trim_rel) -> Scheme:
    """Second-order upwind (Beam-Warming) scheme for advection at CFL ``lam``.

    At ``lam = 1`` the leftmost coefficient vanishes and the stencil trims
    to the one-cell shift ``(1, 0)``.
    """
    if lam <= 0:
        raise ValueError("the CFL number must be positive")
    a_m2 = lam * (lam - 1.0) / 2.0
    a_m1 = lam * (2.0 - lam)
    a_0 = (lam - 1.0) * (lam - 2.0) / 2.0
    return Scheme.from_coefficients([a_m2, a_m1, a_0], lam, trim_rel)


PRESETS = {"beam-warming": make_beam_warming}


def scheme_from_descriptor(descriptor: dict, trim_rel: float = DEFAULT_TOLS.trim_rel) -> Scheme:
    """Build a scheme from a JSON-style descriptor.

    Either ``{"preset": "beam-warming", "lambda": 1.4}`` or
    ``{"coefficients": [a_-r, ..., a_0], "lambda": 1.4}``.
    """
    lam = descriptor.get("lambda")
    if lam is None:
        raise ValueError("scheme descriptor needs a 'lambda' entry")
    if "preset" in descriptor:
        name = descriptor["preset"]
        if name not in PRESETS:
            raise ValueError(f"unknown scheme preset {name!r}; available: {sorted(PRESETS)}")
        return PRESETS[name](float(lam), trim_rel)
    if "coefficients" in descriptor:
        return Scheme.from_coefficients(descriptor["coefficients"], float(lam), trim_rel)
    raise ValueError("scheme descriptor needs 'preset' or 'coefficients'")


def symbol(s: Scheme, xi):
    """Amplification symbol ``sum_k a_k exp(i k xi)``; accepts arrays."""
    xi_arr = np.asarray(xi, dtype=float)
    ks = np.arange(-s.r, 1)
    values = np.exp(1j * np.multiply.outer(xi_arr, ks)) @ s.a
    if np.isscalar(xi) or xi_arr.ndim == 0:
        return complex(values)
    return values


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of the structural checks on a scheme.

    Flags are advisory: construction never refuses a scheme, the analyzer
    decides what to do with violations.
    """

    h0_nondegenerate: bool
    h2_cauchy_stable: bool
    h2_max_symbol_modulus: float
    h3_consistent: bool
    h3_residual_sum: float
    h3_residual_order1: float
    a0_interior: bool
    a0: float

    @property
    def all_pass(self) -> bool:
        return (
            self.h0_nondegenerate
            and self.h2_cauchy_stable
            and self.h3_consistent
            and self.a0_interior
        )

    def to_dict(self) -> dict:
        return {
            "h0_nondegenerate": self.h0_nondegenerate,
            "h2_cauchy_stable": self.h2_cauchy_stable,
            "h2_max_symbol_modulus": self.h2_max_symbol_modulus,
            "h3_consistent": self.h3_consistent,
            "h3_residual_sum": self.h3_residual_sum,
            "h3_residual_order1": self.h3_residual_order1,
            "a0_interior": self.a0_interior,
            "a0": self.a0,
        }


def validate(s: Scheme, n_xi: int = 4096, tols: Tolerances = DEFAULT_TOLS) -> AssumptionReport:
    """Check non-degeneracy, Cauchy stability, consistency and ``|a_0| < 1``.

    Cauchy stability is checked by dense sampling of the symbol modulus on
    ``n_xi`` uniform frequencies; the symbols in scope are trigonometric
    polynomials of tiny degree, so sampling is reliable.
    """
    if n_xi < 64:
        raise ValueError("n_xi must be at least 64")
    h0 = abs(s.a_lead) > tols.trim_rel * float(np.max(np.abs(s.a)))

    xi = np.linspace(0.0, 2.0 * np.pi, n_xi, endpoint=False)
    max_mod = float(np.max(np.abs(symbol(s, xi))))
    h2 = max_mod <= 1.0 + tols.cauchy_tol

    ks = np.arange(-s.r, 1)
    residual_sum = float(np.sum(s.a) - 1.0)
    residual_order1 = float(np.dot(ks, s.a) + s.lam)
    h3 = abs(residual_sum) <= tols.consistency_tol and abs(residual_order1) <= tols.consistency_tol

    a0 = s.a_zero
    return AssumptionReport(
        h0_nondegenerate=bool(h0),
        h2_cauchy_stable=bool(h2),
        h2_max_symbol_modulus=max_mod,
        h3_consistent=bool(h3),
        h3_residual_sum=residual_sum,
        h3_residual_order1=residual_order1,
        a0_interior=bool(abs(a0) < 1.0),
        a0=a0,
    )


@dataclass(frozen=True, eq=False)
class CurveSamples:
    """Ordered closed polygonal sampling of a complex curve."""

    params: np.ndarray
    points: np.ndarray
    closed: bool

    def __post_init__(self):
        params = np.asarray(self.params, dtype=float)
        points = np.asarray(self.points, dtype=complex)
        if params.shape != points.shape:
            raise ValueError("params and points must have the same length")
        if params.size and np.any(np.diff(params) <= 0):
            raise ValueError("params must be strictly increasing")
        if self.closed and params.size and abs(points[0] - points[-1]) > 1e-12 * max(
            1.0, float(np.max(np.abs(points)))
        ):
            raise ValueError("closed curve must end where it starts")
        params.setflags(write=False)
        points.setflags(write=False)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "points", points)


def sample_symbol_curve(s: Scheme, n: int) -> CurveSamples:
    """Sample the closed symbol curve at ``n + 1`` uniform parameters on [0, 2pi].

    Coarse samplings are allowed (the curve is a tiny trigonometric
    polynomial); use a few hundred points when the image matters.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    params = np.linspace(0.0, 2.0 * np.pi, n + 1)
    points = symbol(s, params)
    points = points.copy()
    points[-1] = points[0]
    return CurveSamples(params=params, points=points, closed=True)
