"""Truncated nonlinear Jaynes-Cummings model: parameters, Hamiltonians, dressed states.

Everything lives in the three-state space spanned by the bare product basis

    index 0  <->  |10> = |e,0>   (qubit excited, no phonon)
    index 1  <->  |01> = |g,1>   (qubit ground, one phonon)
    index 2  <->  |00> = |g,0>   (shared ground state)

with hbar = 1 and the common qubit/resonator frequency omega as the unit of
energy and inverse time. Every matrix in this package uses this index
convention unless a function explicitly says otherwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    NegativeNonlinearity,
    NegativeRate,
    NonPositiveCoupling,
    NonPositiveFrequency,
    RegimeWarning,
)

DIM = 3
BARE_LABELS = ("|10>", "|01>", "|00>")


@dataclass(frozen=True)
class ModelParams:
    """Physical inputs, all dimensionless multiples of the common frequency.

    Attributes
    ----------
    omega : float
        Qubit and resonator frequency (resonant case), the unit of energy.
    g : float
        Qubit-resonator coupling.
    chi : float
        Kerr nonlinearity of the resonator.
    gamma_plus, gamma_minus : float
        Decay rates of the upper/lower dressed states toward the ground
        state. Note the normalization: the corresponding populations decay
        at gamma/2 and coherences at gamma/4 (see `njc.spectral`).
    """

    omega: float
    g: float
    chi: float
    gamma_plus: float
    gamma_minus: float

    def __post_init__(self) -> None:
        # "not (x > 0)" also rejects NaN.
        if not (self.omega > 0):
            raise NonPositiveFrequency(f"omega must be > 0, got {self.omega}")
        if not (self.g > 0):
            raise NonPositiveCoupling(f"g must be > 0, got {self.g}")
        if not (self.chi >= 0):
            raise NegativeNonlinearity(f"chi must be >= 0, got {self.chi}")
        if not (self.gamma_plus >= 0):
            raise NegativeRate(f"gamma_plus must be >= 0, got {self.gamma_plus}")
        if not (self.gamma_minus >= 0):
            raise NegativeRate(f"gamma_minus must be >= 0, got {self.gamma_minus}")
        if self.chi > 0.5 * self.g:
            warnings.warn(
                f"chi={self.chi} exceeds g/2={0.5 * self.g}; the closed forms stay "
                "exact in the truncated space but the weak-nonlinearity regime "
                "they were meant for no longer holds",
                RegimeWarning,
                stacklevel=2,
            )


def validate_params(
    omega: float,
    g: float,
    chi: float,
    gamma_plus: float,
    gamma_minus: float,
) -> ModelParams:
    """Coerce five raw numbers into a validated ModelParams."""
    return ModelParams(
        omega=float(omega),
        g=float(g),
        chi=float(chi),
        gamma_plus=float(gamma_plus),
        gamma_minus=float(gamma_minus),
    )


@dataclass(frozen=True)
class EigenStructure:
    """Closed-form single-excitation spectrum.

    Omega = sqrt(g^2 + chi^2) is half the doublet splitting and
    theta = arcsin(g/Omega) the mixing angle, taken on the principal branch
    so cos(theta) = chi/Omega >= 0. The dressed kets over (|10>, |01>) are

        ket_plus  = ( cos(theta/2), sin(theta/2))     energy E1_plus
        ket_minus = (-sin(theta/2), cos(theta/2))     energy E1_minus

    with E1_pm = omega/2 + chi +- Omega and ground energy E0 = -omega/2.

    Note on conventions: these kets diagonalize the single-excitation block
    that carries the Kerr shift 2*chi on the |10> slot. The literal matrix
    from `hamiltonian_full` carries the shift on the |01> slot instead; it
    has the same eigenvalues, but its eigenvectors are the above with the
    two amplitudes exchanged. All spectral machinery (mode operators,
    closed-form populations, the numerical generator) is built from the
    dressed decomposition, so both solver routes share one Hamiltonian.
    """

    Omega: float
    theta: float
    E0: float
    E1_plus: float
    E1_minus: float
    ket_plus: tuple[float, float]
    ket_minus: tuple[float, float]


def hamiltonian_full(params: ModelParams) -> np.ndarray:
    """Hamiltonian with the Kerr term, in the bare basis.

    diag(omega/2, omega/2 + 2*chi, -omega/2) plus the coupling g between
    |10> and |01>.
    """
    w, g, chi = params.omega, params.g, params.chi
    return np.array(
        [
            [0.5 * w, g, 0.0],
            [g, 0.5 * w + 2.0 * chi, 0.0],
            [0.0, 0.0, -0.5 * w],
        ],
        dtype=complex,
    )


def hamiltonian_jc(params: ModelParams) -> np.ndarray:
    """Linear Jaynes-Cummings Hamiltonian: `hamiltonian_full` with chi = 0."""
    return hamiltonian_full(
        ModelParams(params.omega, params.g, 0.0, params.gamma_plus, params.gamma_minus)
    )


def eigenstructure(params: ModelParams) -> EigenStructure:
    """Dressed energies, mixing angle and kets for the given parameters."""
    Omega = math.hypot(params.g, params.chi)
    # Same angle as arcsin(g/Omega) on the principal branch, but conditioned
    # uniformly: arcsin loses ~g*eps/chi near theta = pi/2, atan2 does not.
    theta = math.atan2(params.g, params.chi)
    c_half = math.cos(0.5 * theta)
    s_half = math.sin(0.5 * theta)
    shift = 0.5 * params.omega + params.chi
    return EigenStructure(
        Omega=Omega,
        theta=theta,
        E0=-0.5 * params.omega,
        E1_plus=shift + Omega,
        E1_minus=shift - Omega,
        ket_plus=(c_half, s_half),
        ket_minus=(-s_half, c_half),
    )


def dressed_transform(es: EigenStructure) -> np.ndarray:
    """Orthogonal matrix whose columns are the dressed kets in bare coordinates.

    Column order (E1+, E1-, E0); rho_bare = U @ rho_dressed @ U.T.
    """
    c_half, s_half = es.ket_plus
    return np.array(
        [
            [c_half, -s_half, 0.0],
            [s_half, c_half, 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
