"""Steady-state and transient covariance of the linear Gaussian dynamics.

The covariance obeys ``dV/dt = A V + V A^T + D``. Its steady state solves
the Lyapunov equation ``A V + V A^T = -D``, which is only meaningful when
``A`` is Hurwitz stable.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DivergenceError, SolverError, UnstableSystemError
from .stability import assess_stability

__all__ = [
    "SolveReport",
    "solve_steady_covariance",
    "evolve_covariance",
    "lyapunov_residual",
    "default_horizon",
    "DEFAULT_DT",
    "HORIZON_CAP",
    "RESIDUAL_TOL",
]

DEFAULT_DT = 0.01
HORIZON_CAP = 2e5
RESIDUAL_TOL = 1e-10
ASYMMETRY_WARN = 1e-8


@dataclass(frozen=True)
class SolveReport:
    """Result of a steady-state solve.

    ``asymmetry`` is the largest entry of ``|V - V^T|`` before the
    symmetrization step; ``symmetrized`` is set when that step moved
    any entry by more than 1e-12.
    """

    covariance: np.ndarray
    residual_norm: float
    symmetrized: bool
    asymmetry: float

    @property
    def asymmetry_warning(self):
        return self.asymmetry > ASYMMETRY_WARN


def lyapunov_residual(A, D, V):
    """Relative residual ``||A V + V A^T + D||_F / ||D||_F``."""
    A, D, V = (np.asarray(m, dtype=float) for m in (A, D, V))
    r = A @ V + V @ A.T + D
    return float(np.linalg.norm(r) / np.linalg.norm(D))


def solve_steady_covariance(A, D, tol_residual=RESIDUAL_TOL, check_stability=True):
    """Solve ``A V + V A^T = -D`` by a dense Kronecker-vectorized solve.

    With column-major vectorization the equation becomes
    ``(I kron A + A kron I) vec(V) = -vec(D)``, an ``n^2 x n^2`` linear
    system solved by LU with partial pivoting.

    Parameters
    ----------
    A : (n, n) array
        Drift matrix; must be Hurwitz stable.
    D : (n, n) array
        Symmetric positive semidefinite diffusion matrix.
    tol_residual : float
        Maximum accepted relative residual.
    check_stability : bool
        Reject non-Hurwitz ``A`` before solving.

    Returns
    -------
    SolveReport
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or D.shape != (n, n):
        raise ValueError(f"shape mismatch: A {A.shape}, D {D.shape}")
    if check_stability:
        report = assess_stability(A)
        if not report.stable:
            raise UnstableSystemError(
                f"drift matrix is not Hurwitz (spectral abscissa {report.spectral_abscissa:.3e})"
            )

    eye = np.eye(n)
    lhs = np.kron(eye, A) + np.kron(A, eye)
    rhs = -D.reshape(-1, order="F")
    try:
        with warnings.catch_warnings(), np.errstate(divide="ignore", invalid="ignore"):
            warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
            vec = scipy.linalg.solve(lhs, rhs)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as exc:
        raise SolverError(f"Kronecker system is singular or ill-conditioned: {exc}") from exc
    V = vec.reshape((n, n), order="F")

    asymmetry = float(np.max(np.abs(V - V.T)))
    V_sym = (V + V.T) / 2
    residual = lyapunov_residual(A, D, V_sym)
    if not residual <= tol_residual:
        raise SolverError(f"Lyapunov residual {residual:.3e} exceeds tolerance {tol_residual:.1e}")
    return SolveReport(
        covariance=V_sym,
        residual_norm=residual,
        symmetrized=bool(np.max(np.abs(V_sym - V)) > 1e-12),
        asymmetry=asymmetry,
    )


def default_horizon(A):
    """Integration time after which the transient has died out.

    ``50 / r`` with ``r`` the smallest of the diagonal damping rates
    ``-2 A_ii`` and the decay rate ``-max Re(lambda)``, capped at
    ``HORIZON_CAP``.
    """
    A = np.asarray(A, dtype=float)
    rates = [r for r in -2 * np.diag(A) if r > 0]
    report = assess_stability(A)
    if report.stable:
        rates.append(report.decay_rate)
    if not rates:
        return HORIZON_CAP
    return min(HORIZON_CAP, 50.0 / min(rates))


def _rk4_step(A, D, V, h):
    def rhs(X):
        return A @ X + X @ A.T + D

    k1 = rhs(V)
    k2 = rhs(V + 0.5 * h * k1)
    k3 = rhs(V + 0.5 * h * k2)
    k4 = rhs(V + h * k3)
    return V + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def _rk4_propagator(A, D, h):
    # One RK4 step is affine in V; tabulate it on the matrix-unit basis.
    n = A.shape[0]
    m = n * n
    offset = _rk4_step(A, D, np.zeros((n, n)), h)
    zero_noise = np.zeros((n, n))
    M = np.zeros((m + 1, m + 1))
    for k in range(m):
        E = np.zeros(m)
        E[k] = 1.0
        M[:m, k] = _rk4_step(A, zero_noise, E.reshape(n, n), h).ravel()
    M[:m, m] = offset.ravel()
    M[m, m] = 1.0
    return M


def evolve_covariance(A, D, V0, dt=DEFAULT_DT, t_end=None):
    """Integrate ``dV/dt = A V + V A^T + D`` with classical RK4.

    ``N = ceil(t_end / dt)`` equal steps of size ``t_end / N`` are taken.
    Because the RK4 step for this linear equation is an affine map of
    ``V``, the map is tabulated once and applied in power-of-two blocks
    (``N`` steps cost ``O(log N)`` matrix products); the result is the
    same sequence of RK4 iterates. The state is re-symmetrized after
    every applied block.

    Parameters
    ----------
    A, D : (n, n) arrays
    V0 : (n, n) array
        Symmetric initial covariance.
    dt : float
        Nominal step, in units of 1/omega_m.
    t_end : float, optional
        Final time; defaults to :func:`default_horizon`.

    Raises
    ------
    DivergenceError
        If the state becomes non-finite; ``step`` reports how many steps
        had been completed.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    V0 = np.asarray(V0, dtype=float)
    n = A.shape[0]
    if not dt > 0:
        raise ValueError("dt must be positive")
    if t_end is None:
        t_end = default_horizon(A)
    if t_end < dt:
        raise ValueError("t_end must be at least one step dt")
    steps = math.ceil(t_end / dt - 1e-9)
    h = t_end / steps

    P = _rk4_propagator(A, D, h)
    state = np.append(((V0 + V0.T) / 2).ravel(), 1.0)
    done = 0
    block = 1
    remaining = steps
    with np.errstate(over="ignore", invalid="ignore"):
        while remaining:
            if remaining & 1:
                state = P @ state
                done += block
                V = state[:-1].reshape(n, n)
                state[:-1] = ((V + V.T) / 2).ravel()
                if not np.all(np.isfinite(state)):
                    raise DivergenceError(
                        f"covariance diverged after {done} of {steps} steps", step=done
                    )
            remaining >>= 1
            if remaining:
                P = P @ P
                block *= 2
                if not np.all(np.isfinite(P)):
                    raise DivergenceError(
                        f"propagator overflowed while building a {block}-step block "
                        f"({done} of {steps} steps completed)",
                        step=done,
                    )
    return state[:-1].reshape(n, n).copy()
