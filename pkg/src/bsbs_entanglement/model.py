"""Parameter model and linearized dynamics of the three-mode system.

One optical cavity mode, one Brillouin acoustic mode and one mechanical
mode, linearized around their classical steady states. Every rate and
frequency is expressed in units of the mechanical frequency, so the
mechanical frequency is exactly 1 inside the matrices built here.

The quadrature vector is ordered

    (dX_a1, dY_a1, dq_a, dp_a, dq_m, dp_m)

and the vacuum variance of each quadrature is 1/2.
"""

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .exceptions import ParameterError, UnsupportedFeatureError

__all__ = [
    "SystemParams",
    "thermal_occupancy",
    "control_amplitude",
    "effective_brillouin_coupling",
    "build_drift_matrix",
    "build_diffusion_matrix",
    "MODE_INDICES",
]

# rows/columns of each mode in the quadrature vector
MODE_INDICES = {
    "optical": (0, 1),
    "acoustic": (2, 3),
    "mechanical": (4, 5),
}


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the linearized model.

    All rates are in units of the mechanical frequency. The defaults are
    the reference working point: red-sideband drive, ``kappa = 0.02``,
    ``gamma_a = 0.4``, ``gamma_m = 1e-4``, ``G_m = 0.15``, ``n_th = 100``,
    with the Brillouin coupling and acoustic detuning placed at the
    entangled point ``G_a = 0.2``, ``Delta_a = 1``.

    ``omega_m`` is the mechanical angular frequency in rad/s. It never
    enters the dynamics; it only converts scaled rates to SI units via
    :meth:`to_si`.
    """

    delta_tilde: float = -1.0
    delta_a: float = 1.0
    kappa: float = 0.02
    gamma_a: float = 0.4
    gamma_m: float = 1e-4
    g_coupling_a: float = 0.2
    g_coupling_m: float = 0.15
    n_th: float = 100.0
    j_m: float = 0.0
    theta: float = 0.0
    g_single_m: float = 1e-4
    g_single_a: float = 0.0
    omega_m: float = 2 * math.pi * 1e6

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParameterError(f"{f.name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ParameterError(f"{f.name} must be finite, got {value!r}")
            object.__setattr__(self, f.name, float(value))
        for name in ("kappa", "gamma_a", "gamma_m", "omega_m"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be strictly positive")
        for name in ("n_th", "g_coupling_a", "g_coupling_m", "g_single_a"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be non-negative")

    def replace(self, **changes):
        """Return a copy with some fields changed (validated again)."""
        return replace(self, **changes)

    def to_si(self, name):
        """Value of a scaled rate field in rad/s."""
        if name in ("n_th", "theta", "omega_m"):
            raise ParameterError(f"{name} is not a scaled rate")
        return getattr(self, name) * self.omega_m

    @classmethod
    def field_names(cls):
        return tuple(f.name for f in fields(cls))


def thermal_occupancy(energy_ratio):
    """Bose-Einstein occupancy ``1 / (exp(x) - 1)`` for ``x = hbar*omega/(k_B*T)``."""
    if not energy_ratio > 0:
        raise ParameterError("energy ratio must be positive (finite positive temperature)")
    return 1.0 / math.expm1(energy_ratio)


def control_amplitude(drive_amplitude, detuning_prime, kappa_2):
    """Classical steady-state amplitude of the strong control mode.

    Parameters
    ----------
    drive_amplitude : float
        Drive rate of the control field.
    detuning_prime : float
        Control detuning including the static optomechanical shift.
    kappa_2 : float
        Decay rate of the control cavity mode.

    Returns
    -------
    complex
        ``-E / (i*Delta' - kappa_2/2)``.
    """
    if not kappa_2 > 0:
        raise ParameterError("kappa_2 must be strictly positive")
    return -drive_amplitude / complex(-kappa_2 / 2, detuning_prime)


def effective_brillouin_coupling(g_single_a, alpha_2):
    """Effective Brillouin coupling ``g_a * |alpha_2|`` (taken real)."""
    if g_single_a < 0:
        raise ParameterError("g_single_a must be non-negative")
    return g_single_a * abs(alpha_2)


def build_drift_matrix(params):
    """Real 6x6 drift matrix of the quadrature fluctuations.

    Raises
    ------
    UnsupportedFeatureError
        If ``params.j_m`` is nonzero; phonon hopping has no place in the
        drift matrix implemented here.
    """
    if params.j_m != 0:
        raise UnsupportedFeatureError(
            "phonon-phonon hopping j_m != 0 is not supported by the drift matrix"
        )
    k2 = params.kappa / 2
    ga2 = params.gamma_a / 2
    gm2 = params.gamma_m / 2
    dt = params.delta_tilde
    da = params.delta_a
    Ga = params.g_coupling_a
    Gm2 = 2 * params.g_coupling_m
    wm = 1.0
    return np.array(
        [
            [-k2, -dt, 0.0, -Ga, 0.0, 0.0],
            [dt, -k2, Ga, 0.0, Gm2, 0.0],
            [0.0, -Ga, -ga2, da, 0.0, 0.0],
            [Ga, 0.0, -da, -ga2, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, -gm2, wm],
            [Gm2, 0.0, 0.0, 0.0, -wm, -gm2],
        ]
    )


def build_diffusion_matrix(params):
    """Diagonal diffusion matrix; the acoustic bath is taken at zero temperature."""
    mech = params.gamma_m * (2 * params.n_th + 1) / 2
    return np.diag(
        [
            params.kappa / 2,
            params.kappa / 2,
            params.gamma_a / 2,
            params.gamma_a / 2,
            mech,
            mech,
        ]
    )
