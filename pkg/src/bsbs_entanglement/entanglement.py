"""Bipartite Gaussian entanglement from the full covariance matrix.

A mode pair is selected by deleting the third mode's rows and columns
(the Gaussian partial trace), and the logarithmic negativity is read off
the smallest symplectic eigenvalue of the partially transposed 4x4
covariance, ``E_N = max(0, -ln(2 nu_minus))``.
"""

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import UnphysicalStateError
from .model import MODE_INDICES

__all__ = [
    "ModePair",
    "EntanglementResult",
    "extract_pair_covariance",
    "compute_sigma",
    "min_symplectic_eigenvalue_pt",
    "logarithmic_negativity",
    "physicality_check",
    "symplectic_form",
]

MODES = tuple(MODE_INDICES)

# discriminant thresholds, relative to max(1, sigma^2)
_CLAMP_SILENT = 1e-12
_CLAMP_ERROR = 1e-9
# nu_minus within this relative distance of 1/2 counts as the separable boundary
THRESHOLD_RESOLUTION = 1e-12


@dataclass(frozen=True)
class ModePair:
    first: str = "optical"
    second: str = "mechanical"

    def __post_init__(self):
        for mode in (self.first, self.second):
            if mode not in MODE_INDICES:
                raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
        if self.first == self.second:
            raise ValueError("a mode pair needs two distinct modes")

    @classmethod
    def parse(cls, text):
        """Build from ``"optical-mechanical"`` style labels."""
        parts = text.strip().lower().split("-")
        if len(parts) != 2:
            raise ValueError(f"mode pair must look like 'optical-mechanical', got {text!r}")
        return cls(*parts)

    @property
    def indices(self):
        return MODE_INDICES[self.first] + MODE_INDICES[self.second]

    def __str__(self):
        return f"{self.first}-{self.second}"


@dataclass(frozen=True)
class EntanglementResult:
    sigma: float
    det_chi: float
    nu_minus: float
    log_negativity: float
    entangled: bool
    infinite: bool = False


def extract_pair_covariance(V, pair=ModePair()):
    """4x4 covariance ``[[V_i, V_ij], [V_ij^T, V_j]]`` of ``pair``, in pair order."""
    V = np.asarray(V, dtype=float)
    idx = pair.indices
    return V[np.ix_(idx, idx)]


def _det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _det4(m):
    total = Fraction(0)
    for perm in itertools.permutations(range(4)):
        inversions = sum(perm[i] > perm[j] for i in range(4) for j in range(i + 1, 4))
        term = m[0][perm[0]] * m[1][perm[1]] * m[2][perm[2]] * m[3][perm[3]]
        total += -term if inversions % 2 else term
    return total


def _exact_invariants(chi):
    # Sigma and det chi in exact rational arithmetic on the float entries.
    # Sigma^2 - 4 det chi = (nu_+^2 - nu_-^2)^2 cancels catastrophically in
    # floating point when nu_+ ~ nu_- (e.g. near-vacuum product states).
    chi = np.asarray(chi, dtype=float)
    if chi.shape != (4, 4):
        raise ValueError(f"two-mode covariance must be 4x4, got {chi.shape}")
    m = [[Fraction(float(x)) for x in row] for row in chi]
    a = [row[:2] for row in m[:2]]
    b = [row[2:] for row in m[2:]]
    c = [row[2:] for row in m[:2]]
    sigma = _det2(a) + _det2(b) - 2 * _det2(c)
    return sigma, _det4(m)


def compute_sigma(chi):
    """``det V_i + det V_j - 2 det V_ij`` from the 2x2 blocks of ``chi``."""
    return float(_exact_invariants(chi)[0])


def _nu_minus(sigma, det_chi):
    disc = sigma * sigma - 4 * det_chi
    scale = max(1, sigma * sigma)
    if disc < 0:
        if disc < -_CLAMP_ERROR * scale:
            raise UnphysicalStateError(
                f"negative discriminant sigma^2 - 4 det = {float(disc):.3e}; covariance is unphysical"
            )
        if disc < -_CLAMP_SILENT * scale:
            warnings.warn(f"clamping small negative discriminant {float(disc):.3e} to zero", RuntimeWarning)
        disc = 0
    sigma, det_chi = float(sigma), float(det_chi)
    root = math.sqrt(disc)
    if sigma + root <= 0:
        return 0.0
    # (sigma - root)/2 rewritten as 2 det/(sigma + root): no cancellation when sigma >> det
    nu_sq = 2 * det_chi / (sigma + root)
    return math.sqrt(max(nu_sq, 0.0))


def min_symplectic_eigenvalue_pt(chi):
    """Smallest symplectic eigenvalue of the partially transposed ``chi``.

    ``nu_minus = sqrt((Sigma - sqrt(Sigma^2 - 4 det chi)) / 2)`` with
    ``Sigma = det V_i + det V_j - 2 det V_ij``.

    Raises
    ------
    UnphysicalStateError
        When ``Sigma^2 - 4 det chi`` is clearly negative.
    """
    return _nu_minus(*_exact_invariants(chi))


def logarithmic_negativity(chi):
    """Full entanglement summary for a two-mode covariance.

    ``nu_minus == 0`` (singular ``chi``) is reported as ``inf`` with the
    ``infinite`` flag set. States with ``2 nu_minus >= 1 - 1e-12`` are
    treated as separable, so round-off on product states cannot produce
    a spurious positive ``E_N`` of order 1e-16.
    """
    sigma, det_chi = _exact_invariants(chi)
    nu = _nu_minus(sigma, det_chi)
    sigma, det_chi = float(sigma), float(det_chi)
    if nu == 0.0:
        return EntanglementResult(sigma, det_chi, 0.0, math.inf, True, infinite=True)
    entangled = 2 * nu < 1 - THRESHOLD_RESOLUTION
    e_n = -math.log(2 * nu) if entangled else 0.0
    return EntanglementResult(sigma, det_chi, nu, e_n, entangled)


def symplectic_form(n_modes):
    """Block-diagonal symplectic form with blocks ``[[0, 1], [-1, 0]]``."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def physicality_check(V, tol=1e-9):
    """True iff ``V + (i/2) Omega`` is positive semidefinite (within ``tol``)."""
    V = np.asarray(V, dtype=float)
    omega = symplectic_form(V.shape[0] // 2)
    eig = np.linalg.eigvalsh(V + 0.5j * omega)
    return bool(eig.min() >= -tol)
