"""Closed-form spectral solution of the dissipative dynamics.

The evolution generator (Hamiltonian part plus the two loss channels
emptying the dressed doublet into the ground state) is diagonalized by nine
mode operators rho_k with closed-form eigenvalues lambda_k, so that

    rho(t) = sum_k C_k exp(lambda_k t) rho_k.

Normalization of the loss channels, fixed here once for the whole package:
each channel enters as

    (gamma/2) J rho J+  -  (gamma/4) (P rho + rho P),     P = J+ J,

i.e. half the weight of the more common convention. Dressed populations
therefore decay at gamma/2 and coherences at gamma/4; every rate below
follows from that.

Mode operators are stored in the dressed basis with index order
(E1+, E1-, E0); helpers transform to and from the package-wide bare basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonzeroChi, SingularBasis, UnequalRates
from .model import (
    EigenStructure,
    ModelParams,
    dressed_transform,
    eigenstructure,
)

# Condition-number ceiling for the Gram matrix of the nine modes. The exact
# Gram matrix is parameter independent with condition ~6; anything larger
# means the mode table itself is corrupted.
_GRAM_COND_LIMIT = 1e8


@dataclass(frozen=True)
class SpectralMode:
    """One eigenpair of the generator: L(rho) = lam * rho.

    `rho` is the 3x3 mode matrix in the dressed basis (E1+, E1-, E0).
    """

    index: int
    lam: complex
    rho: np.ndarray


@dataclass(frozen=True)
class SpectralBasis:
    """The nine modes, in the fixed table order, plus their eigenstructure."""

    modes: tuple[SpectralMode, ...]
    es: EigenStructure
    gamma_plus: float
    gamma_minus: float


@dataclass(frozen=True)
class CoefficientSet:
    """Expansion coefficients C_k of an initial state over the nine modes."""

    c: tuple[complex, ...]


def _mode_matrices() -> list[np.ndarray]:
    """The nine mode matrices in the dressed basis (parameter independent).

    Order: P0, P-' = P- - P0, P+' = P+ - P0, |E0><E1-|, |E0><E1+|,
    |E1-><E1+|, then the adjoints of modes 4-6.
    """

    def unit(i: int, j: int) -> np.ndarray:
        m = np.zeros((3, 3), dtype=complex)
        m[i, j] = 1.0
        return m

    p_plus, p_minus, p_ground = unit(0, 0), unit(1, 1), unit(2, 2)
    lower_minus = unit(2, 1)  # |E0><E1-|
    lower_plus = unit(2, 0)  # |E0><E1+|
    cross = unit(1, 0)  # |E1-><E1+|
    return [
        p_ground,
        p_minus - p_ground,
        p_plus - p_ground,
        lower_minus,
        lower_plus,
        cross,
        lower_minus.conj().T,
        lower_plus.conj().T,
        cross.conj().T,
    ]


def eigenoperators(
    es: EigenStructure, gamma_plus: float, gamma_minus: float
) -> SpectralBasis:
    """Build the nine (lambda_k, rho_k) eigenpairs of the generator.

    Eigenvalues, with nu_pm = E1_pm - E0 = omega + chi +- Omega the two
    transition frequencies:

        lambda_1 = 0
        lambda_2 = -gamma_minus/2
        lambda_3 = -gamma_plus/2
        lambda_4 = +i nu_minus - gamma_minus/4
        lambda_5 = +i nu_plus  - gamma_plus/4
        lambda_6 = +i 2 Omega  - (gamma_plus + gamma_minus)/4
        lambda_{7,8,9} = conj(lambda_{4,5,6})
    """
    nu_minus = es.E1_minus - es.E0
    nu_plus = es.E1_plus - es.E0
    lams = [
        0.0 + 0.0j,
        complex(-0.5 * gamma_minus),
        complex(-0.5 * gamma_plus),
        1j * nu_minus - 0.25 * gamma_minus,
        1j * nu_plus - 0.25 * gamma_plus,
        1j * (nu_plus - nu_minus) - 0.25 * (gamma_plus + gamma_minus),
    ]
    lams += [lam.conjugate() for lam in lams[3:6]]
    mats = _mode_matrices()

    gram = np.array(
        [[np.trace(a.conj().T @ b) for b in mats] for a in mats], dtype=complex
    )
    cond = np.linalg.cond(gram)
    if not cond < _GRAM_COND_LIMIT:
        raise SingularBasis(f"mode Gram matrix condition {cond:.3e} too large")

    modes = tuple(
        SpectralMode(index=k + 1, lam=lams[k], rho=mats[k]) for k in range(9)
    )
    return SpectralBasis(
        modes=modes, es=es, gamma_plus=gamma_plus, gamma_minus=gamma_minus
    )


def expand_initial(rho0: np.ndarray, basis: SpectralBasis) -> CoefficientSet:
    """Solve rho(0) = sum_k C_k rho_k for the coefficients C_k.

    `rho0` is given in the bare basis. A general 9x9 linear solve, so any
    initial state over the truncated space is supported, not only |e,0>.
    """
    u = dressed_transform(basis.es)
    rho_dressed = u.T @ np.asarray(rho0, dtype=complex) @ u
    columns = np.stack(
        [mode.rho.flatten(order="F") for mode in basis.modes], axis=1
    )
    target = rho_dressed.flatten(order="F")
    try:
        coeffs = np.linalg.solve(columns, target)
    except np.linalg.LinAlgError as exc:
        raise SingularBasis(f"mode matrix is numerically singular: {exc}") from exc
    residual = np.linalg.norm(columns @ coeffs - target)
    if residual > 1e-10:
        raise SingularBasis(f"expansion residual {residual:.3e} too large")
    return CoefficientSet(c=tuple(complex(x) for x in coeffs))


def evolve_analytic(
    basis: SpectralBasis, coeffs: CoefficientSet, t: float
) -> np.ndarray:
    """Density matrix at time t, in the bare basis.

    rho(t) = sum_k C_k exp(lambda_k t) rho_k, transformed back to the bare
    index convention.
    """
    rho_dressed = np.zeros((3, 3), dtype=complex)
    for mode, c in zip(basis.modes, coeffs.c):
        rho_dressed += c * np.exp(mode.lam * t) * mode.rho
    u = dressed_transform(basis.es)
    return u @ rho_dressed @ u.T


def _trig(params: ModelParams) -> tuple[float, float, float]:
    """(Omega, cos theta, sin theta) for the mixing angle convention used here."""
    es = eigenstructure(params)
    return es.Omega, params.chi / es.Omega, params.g / es.Omega


def pe_closed_form(params: ModelParams, t):
    """Excited-state probability for the initial state |e,0>.

    Pe(t) = [ (1-cos th)/2 e^{-gm t/4} - (1+cos th)/2 e^{-gp t/4} ]^2
            + sin^2 th e^{-(gp+gm) t/4} cos^2(Omega t)

    with th the mixing angle and gp/gm the two decay rates. Accepts a
    scalar or an array of times.
    """
    omega_r, cos_th, sin_th = _trig(params)
    gp, gm = params.gamma_plus, params.gamma_minus
    tt = np.asarray(t, dtype=float)
    lower = 0.5 * (1.0 - cos_th) * np.exp(-0.25 * gm * tt)
    upper = 0.5 * (1.0 + cos_th) * np.exp(-0.25 * gp * tt)
    out = (lower - upper) ** 2 + (
        sin_th**2 * np.exp(-0.25 * (gp + gm) * tt) * np.cos(omega_r * tt) ** 2
    )
    return float(out) if np.ndim(t) == 0 else out


def pe_closed_form_expanded(params: ModelParams, t):
    """Algebraically expanded form of `pe_closed_form` (three plain terms).

    sin^4(th/2) e^{-gm t/2} + cos^4(th/2) e^{-gp t/2}
        + (1/2) sin^2 th e^{-(gp+gm) t/4} cos(2 Omega t)

    Kept as a separate code path so transcription errors in either form
    show up as a broken identity, not as silently shared behavior.
    """
    omega_r, cos_th, sin_th = _trig(params)
    gp, gm = params.gamma_plus, params.gamma_minus
    tt = np.asarray(t, dtype=float)
    sin_half_sq = 0.5 * (1.0 - cos_th)
    cos_half_sq = 0.5 * (1.0 + cos_th)
    out = (
        sin_half_sq**2 * np.exp(-0.5 * gm * tt)
        + cos_half_sq**2 * np.exp(-0.5 * gp * tt)
        + 0.5 * sin_th**2 * np.exp(-0.25 * (gp + gm) * tt) * np.cos(2.0 * omega_r * tt)
    )
    return float(out) if np.ndim(t) == 0 else out


def pe_ideal(g: float, gamma: float, t):
    """Plain damped Rabi oscillation e^{-gamma t/2} cos^2(g t)."""
    tt = np.asarray(t, dtype=float)
    out = np.exp(-0.5 * gamma * tt) * np.cos(g * tt) ** 2
    return float(out) if np.ndim(t) == 0 else out


def pe_equal_rates(params: ModelParams, t):
    """Specialization of `pe_closed_form` to gamma_plus == gamma_minus == gamma.

    e^{-gamma t/2} (cos^2 th + sin^2 th cos^2(Omega t)); the local minima lie
    on the envelope e^{-gamma t/2} cos^2 th.
    """
    if params.gamma_plus != params.gamma_minus:
        raise UnequalRates(
            f"gamma_plus={params.gamma_plus} != gamma_minus={params.gamma_minus}"
        )
    omega_r, cos_th, sin_th = _trig(params)
    gamma = params.gamma_plus
    tt = np.asarray(t, dtype=float)
    out = np.exp(-0.5 * gamma * tt) * (
        cos_th**2 + sin_th**2 * np.cos(omega_r * tt) ** 2
    )
    return float(out) if np.ndim(t) == 0 else out


def pe_linear_limit(params: ModelParams, t):
    """Specialization of `pe_closed_form` to chi == 0 (unequal rates allowed).

    (1/4)(e^{-gm t/4} - e^{-gp t/4})^2 + e^{-(gp+gm) t/4} cos^2(g t); the
    minima at cos^2(g t) = 0 equal the first, slowly varying term.
    """
    if params.chi != 0.0:
        raise NonzeroChi(f"chi={params.chi} must be exactly 0")
    gp, gm = params.gamma_plus, params.gamma_minus
    tt = np.asarray(t, dtype=float)
    out = 0.25 * (np.exp(-0.25 * gm * tt) - np.exp(-0.25 * gp * tt)) ** 2 + (
        np.exp(-0.25 * (gp + gm) * tt) * np.cos(params.g * tt) ** 2
    )
    return float(out) if np.ndim(t) == 0 else out


def pe_lower_envelope(params: ModelParams, t):
    """Slowly varying floor through the oscillation minima of `pe_closed_form`.

    [ (1-cos th)/2 e^{-gm t/4} - (1+cos th)/2 e^{-gp t/4} ]^2 -- the value of
    Pe at the times where cos^2(Omega t) = 0. For equal rates this reduces to
    e^{-gamma t/2} cos^2 th; for chi = 0 to (1/4)(e^{-gm t/4} - e^{-gp t/4})^2.
    """
    _, cos_th, _ = _trig(params)
    gp, gm = params.gamma_plus, params.gamma_minus
    tt = np.asarray(t, dtype=float)
    lower = 0.5 * (1.0 - cos_th) * np.exp(-0.25 * gm * tt)
    upper = 0.5 * (1.0 + cos_th) * np.exp(-0.25 * gp * tt)
    out = (lower - upper) ** 2
    return float(out) if np.ndim(t) == 0 else out


def short_time_rate(params: ModelParams) -> float:
    """Initial logarithmic decay rate of Pe: -d ln Pe / dt at t -> 0+.

    r = cos th (gamma_plus - gamma_minus)/4 + (gamma_plus + gamma_minus)/4;
    reduces to (gamma_plus + gamma_minus)/4 when chi = 0 and to gamma/2 for
    equal rates.
    """
    _, cos_th, _ = _trig(params)
    gp, gm = params.gamma_plus, params.gamma_minus
    return cos_th * 0.25 * (gp - gm) + 0.25 * (gp + gm)
