"""Complex polynomial arithmetic, root finding and root clustering.

Degrees in this package stay in the single digits (stencil widths and
boundary orders), so dense coefficient arrays, companion-matrix eigenvalues
and quadratic-cost clustering are reliable and cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple, Union

import numpy as np

from .config import DEFAULT_TOLS
from .errors import DegenerateLeadingCoefficient

NEG_INF = float("-inf")


def _trim(coeffs: np.ndarray, trim_rel: float) -> np.ndarray:
    """Drop trailing (leading-power) coefficients negligible vs the largest one."""
    if coeffs.size == 0:
        return coeffs
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0.0:
        return coeffs[:0]
    significant = np.nonzero(np.abs(coeffs) > trim_rel * scale)[0]
    if significant.size == 0:
        return coeffs[:0]
    return coeffs[: significant[-1] + 1]


@dataclass(frozen=True, eq=False)
class ComplexPolynomial:
    """Dense complex polynomial, coefficients in ascending power order.

    The representation is normalized: trailing coefficients negligible
    relative to the largest one are trimmed, so the leading coefficient is
    always significant. The zero polynomial is the empty coefficient array
    and reports degree ``-inf``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[complex], trim_rel: float = DEFAULT_TOLS.trim_rel) -> "ComplexPolynomial":
        arr = np.atleast_1d(np.asarray(list(coeffs), dtype=complex))
        return cls(_trim(arr, trim_rel))

    @classmethod
    def zero(cls) -> "ComplexPolynomial":
        return cls(np.zeros(0, dtype=complex))

    @classmethod
    def one(cls) -> "ComplexPolynomial":
        return cls(np.ones(1, dtype=complex))

    @classmethod
    def from_roots(cls, roots: Iterable[complex], leading: complex = 1.0) -> "ComplexPolynomial":
        coeffs = np.array([leading], dtype=complex)
        for root in roots:
            coeffs = np.convolve(coeffs, np.array([-root, 1.0], dtype=complex))
        return cls(coeffs)

    @property
    def degree(self) -> Union[int, float]:
        return self.coeffs.size - 1 if self.coeffs.size else NEG_INF

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def __call__(self, z):
        """Horner evaluation; accepts scalars or arrays."""
        if self.is_zero:
            if np.isscalar(z):
                return 0j
            return np.zeros_like(np.asarray(z, dtype=complex))
        if np.isscalar(z):
            acc = 0j
            for c in self.coeffs[::-1]:
                acc = acc * z + c
            return acc
        zarr = np.asarray(z, dtype=complex)
        acc = np.zeros_like(zarr)
        for c in self.coeffs[::-1]:
            acc = acc * zarr + c
        return acc

    def __add__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        n = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(n, dtype=complex)
        out[: self.coeffs.size] += self.coeffs
        out[: other.coeffs.size] += other.coeffs
        return ComplexPolynomial.from_coeffs(out) if n else ComplexPolynomial.zero()

    def __sub__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        n = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(n, dtype=complex)
        out[: self.coeffs.size] += self.coeffs
        out[: other.coeffs.size] -= other.coeffs
        return ComplexPolynomial.from_coeffs(out) if n else ComplexPolynomial.zero()

    def __neg__(self) -> "ComplexPolynomial":
        return ComplexPolynomial(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, ComplexPolynomial):
            if self.is_zero or other.is_zero:
                return ComplexPolynomial.zero()
            return ComplexPolynomial.from_coeffs(np.convolve(self.coeffs, other.coeffs))
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, factor: complex) -> "ComplexPolynomial":
        if factor == 0 or self.is_zero:
            return ComplexPolynomial.zero()
        return ComplexPolynomial(self.coeffs * factor)

    def derivative(self) -> "ComplexPolynomial":
        if self.coeffs.size <= 1:
            return ComplexPolynomial.zero()
        return ComplexPolynomial(self.coeffs[1:] * np.arange(1, self.coeffs.size))

    def monic(self) -> "ComplexPolynomial":
        if self.is_zero:
            raise ValueError("the zero polynomial has no monic normalization")
        return ComplexPolynomial(self.coeffs / self.coeffs[-1])


@dataclass(frozen=True)
class RootSet:
    """Clustered roots with multiplicities; multiplicities sum to the degree."""

    roots: Tuple[Tuple[complex, int], ...]

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.roots], dtype=complex)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([m for _, m in self.roots], dtype=int)

    @property
    def total_multiplicity(self) -> int:
        return int(sum(m for _, m in self.roots))

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)


def poly_eval(p: ComplexPolynomial, z: complex) -> complex:
    """Evaluate ``p`` at ``z`` (Horner)."""
    return p(z)


def _newton_refine(coeffs: np.ndarray, roots: np.ndarray, passes: int = 2) -> np.ndarray:
    """Polish companion-matrix roots; keep a step only when it reduces |p|."""
    p = ComplexPolynomial(coeffs)
    dp = p.derivative()
    for _ in range(passes):
        pv = p(roots)
        dv = dp(roots)
        safe = np.abs(dv) > 1e-300
        step = np.where(safe, pv / np.where(safe, dv, 1.0), 0.0)
        candidate = roots - step
        better = np.abs(p(candidate)) <= np.abs(pv)
        roots = np.where(better, candidate, roots)
    return roots


def _cluster(values: np.ndarray, radius: float) -> Tuple[Tuple[complex, int], ...]:
    """Merge values pairwise closer than ``radius`` (transitively, union-find)."""
    n = values.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri

    clusters: dict[int, list[complex]] = {}
    for i in range(n):
        clusters.setdefault(find(i), []).append(values[i])
    merged = [(complex(np.mean(members)), len(members)) for members in clusters.values()]
    merged.sort(key=lambda item: (item[0].real, item[0].imag))
    return tuple(merged)


def poly_roots(
    p,
    cluster_radius: float = DEFAULT_TOLS.cluster_radius,
    trim_rel: float = DEFAULT_TOLS.trim_rel,
) -> RootSet:
    """All complex roots of ``p``, clustered into representatives with multiplicity.

    ``p`` may be a :class:`ComplexPolynomial` or a raw ascending coefficient
    sequence. Raw input with a negligible leading coefficient is rejected so
    the caller trims deliberately instead of silently losing a root.
    """
    if isinstance(p, ComplexPolynomial):
        coeffs = p.coeffs
    else:
        coeffs = np.atleast_1d(np.asarray(p, dtype=complex))
        if coeffs.size:
            scale = float(np.max(np.abs(coeffs)))
            if scale == 0.0 or abs(coeffs[-1]) <= trim_rel * scale:
                raise DegenerateLeadingCoefficient(
                    "leading coefficient is below the trim tolerance; trim the polynomial first"
                )
    if coeffs.size < 2:
        raise ValueError("root finding requires degree >= 1")

    raw = np.roots(coeffs[::-1])
    raw = _newton_refine(coeffs, raw)
    return RootSet(_cluster(raw, cluster_radius))
