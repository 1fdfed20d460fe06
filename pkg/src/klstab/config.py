"""Numeric tolerances used throughout the package.

Every tolerance that influences a verdict is collected here so that a single
object can be threaded through the pipeline and overridden from the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class Tolerances:
    """Knobs controlling root clustering, band classification and gating.

    cluster_radius:
        Roots of a polynomial closer than this are merged into one root with
        summed multiplicity.
    trim_rel:
        Coefficients below ``trim_rel * max(|coeff|)`` are treated as zero
        when normalizing polynomials and stencils.
    unit_circle_tol:
        Half-width of the ambiguity band around the unit circle used when
        classifying roots as interior / on-circle / exterior.
    origin_tol:
        Relative closest-approach threshold for the winding computation; the
        absolute threshold is ``origin_tol * max(|curve point|)``.
    gamma_tol:
        Distance threshold for membership of a point in the symbol curve.
    kernel_tol:
        Relative size below which a kernel-vector component counts as zero
        in the boundary-zero classification.
    cauchy_tol:
        Allowed excess of the sampled symbol modulus above 1 when checking
        Cauchy stability.
    consistency_tol:
        Allowed residual in the consistency relations on the coefficients.
    """

    cluster_radius: float = 1e-7
    trim_rel: float = 1e-12
    unit_circle_tol: float = 1e-6
    origin_tol: float = 1e-8
    gamma_tol: float = 1e-6
    kernel_tol: float = 1e-7
    cauchy_tol: float = 1e-10
    consistency_tol: float = 1e-10

    def replace(self, **kwargs) -> "Tolerances":
        current = {f.name: getattr(self, f.name) for f in fields(self)}
        current.update(kwargs)
        return Tolerances(**current)

    def validate(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not value > 0.0:
                raise ValueError(f"tolerance {f.name} must be positive, got {value}")


DEFAULT_TOLS = Tolerances()
