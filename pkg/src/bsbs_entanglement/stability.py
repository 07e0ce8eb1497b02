"""Hurwitz stability of the drift matrix."""

from dataclasses import dataclass

import numpy as np

from .exceptions import NumericalError

__all__ = ["StabilityReport", "assess_stability", "MARGINAL_BAND"]

MARGINAL_BAND = 1e-12


@dataclass(frozen=True)
class StabilityReport:
    spectral_abscissa: float
    stable: bool
    marginal: bool
    eigenvalues: tuple

    @property
    def decay_rate(self):
        """Slowest decay rate of the linear dynamics, ``-spectral_abscissa``."""
        return -self.spectral_abscissa


def assess_stability(A):
    """Eigenvalue test for Hurwitz stability.

    The system is stable when every eigenvalue of ``A`` has real part
    below ``-MARGINAL_BAND``. Points whose spectral abscissa lies within
    the band around zero are flagged ``marginal`` and reported unstable.

    Eigenvalues are returned sorted by descending real part (ties broken
    by descending imaginary part).
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"drift matrix must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NumericalError(f"drift matrix has non-finite entries:\n{A}")
    try:
        eig = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue computation failed ({exc}) for\n{A}") from exc
    order = np.lexsort((-eig.imag, -eig.real))
    eig = eig[order]
    abscissa = float(eig.real.max())
    return StabilityReport(
        spectral_abscissa=abscissa,
        stable=abscissa < -MARGINAL_BAND,
        marginal=abs(abscissa) <= MARGINAL_BAND,
        eigenvalues=tuple(complex(z) for z in eig),
    )
