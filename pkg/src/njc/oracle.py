"""Independent numerical cross-check of the closed-form solution.

The generator is realized as a 9x9 matrix over column-vectorized density
matrices and integrated with a fixed-step classical Runge-Kutta 4 scheme.
Nothing here reuses the mode decomposition: agreement between this route and
`njc.spectral` is the package's main internal consistency check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StepTooLarge
from .model import ModelParams, dressed_transform, eigenstructure
from .spectral import SpectralBasis

# RK4 stability guard: dt times the Gershgorin bound on the generator's
# spectral radius must stay below this.
_STABILITY_LIMIT = 0.1


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-major (Fortran) vectorization of a matrix."""
    return np.asarray(rho, dtype=complex).flatten(order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of `vec`."""
    v = np.asarray(v, dtype=complex)
    n = int(round(len(v) ** 0.5))
    return v.reshape((n, n), order="F")


@dataclass(frozen=True)
class Superoperator:
    """Generator matrix acting on column-vectorized 3x3 density matrices.

    Under column-major stacking, vec(A X B) = (B.T kron A) vec(X), so the
    commutator -i[H, rho] becomes -i((I kron H) - (H.T kron I)).
    """

    matrix: np.ndarray


def build_liouvillian(params: ModelParams) -> Superoperator:
    """Generator of the master equation in the bare basis.

    Built in the dressed basis, where the Hamiltonian is diagonal with
    energies (E1+, E1-, E0) and the loss channels are

        (gamma/2) J rho J+  -  (gamma/4) (P rho + rho P),
        J = |E0><E1+->,  P = J+ J,

    then carried to the bare basis by the orthogonal dressed transform.
    """
    es = eigenstructure(params)
    h_dressed = np.diag(
        np.array([es.E1_plus, es.E1_minus, es.E0], dtype=complex)
    )
    eye = np.eye(3, dtype=complex)
    lio = -1j * (np.kron(eye, h_dressed) - np.kron(h_dressed.T, eye))
    for rate, idx in ((params.gamma_plus, 0), (params.gamma_minus, 1)):
        jump = np.zeros((3, 3), dtype=complex)
        jump[2, idx] = 1.0
        proj = np.zeros((3, 3), dtype=complex)
        proj[idx, idx] = 1.0
        lio += 0.5 * rate * np.kron(jump.conj(), jump)
        lio -= 0.25 * rate * (np.kron(eye, proj) + np.kron(proj.T, eye))
    u = dressed_transform(es)
    s = np.kron(u, u)
    return Superoperator(matrix=s @ lio @ s.T)


def _build_liouvillian_bare(params: ModelParams) -> Superoperator:
    """Same generator assembled directly in the bare basis.

    Cross-check construction for the basis-independence test; not used by
    the integrator.
    """
    es = eigenstructure(params)
    u = dressed_transform(es)
    h_bare = (
        u @ np.diag(np.array([es.E1_plus, es.E1_minus, es.E0], dtype=complex)) @ u.T
    )
    ground = np.array([0.0, 0.0, 1.0], dtype=complex)
    kets = {
        "plus": np.array([*es.ket_plus, 0.0], dtype=complex),
        "minus": np.array([*es.ket_minus, 0.0], dtype=complex),
    }
    eye = np.eye(3, dtype=complex)
    lio = -1j * (np.kron(eye, h_bare) - np.kron(h_bare.T, eye))
    for rate, name in ((params.gamma_plus, "plus"), (params.gamma_minus, "minus")):
        jump = np.outer(ground, kets[name].conj())
        proj = jump.conj().T @ jump
        lio += 0.5 * rate * np.kron(jump.conj(), jump)
        lio -= 0.25 * rate * (np.kron(eye, proj) + np.kron(proj.T, eye))
    return Superoperator(matrix=lio)


@dataclass(frozen=True)
class Trajectory:
    """Fixed-grid integration output.

    times[i] = i * dt; states[i] is the 3x3 density matrix in the bare
    basis; pe[i] is its (0, 0) entry, the excited-state probability.
    """

    times: np.ndarray
    states: np.ndarray
    pe: np.ndarray


def _rk4_step_matrix(lio: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step as a matrix.

    The generator is constant, so running the four stages on the identity
    collapses the update v -> v + h/6 (k1 + 2 k2 + 2 k3 + k4) into a single
    matrix applied per step.
    """
    eye = np.eye(lio.shape[0], dtype=complex)
    k1 = lio.copy()
    k2 = lio @ (eye + 0.5 * h * k1)
    k3 = lio @ (eye + 0.5 * h * k2)
    k4 = lio @ (eye + h * k3)
    return eye + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(
    superop: Superoperator, rho0: np.ndarray, t_end: float, dt: float
) -> Trajectory:
    """Fixed-step RK4 integration of d(vec rho)/dt = L vec rho.

    Snapshots at every grid point i * dt for i = 0 .. floor(t_end/dt); when
    t_end is not a multiple of dt the grid stops just short of t_end.
    """
    if dt <= 0:
        raise StepTooLarge(f"dt must be positive, got {dt}")
    if t_end < 0:
        raise ValueError(f"t_end must be >= 0, got {t_end}")
    bound = float(np.max(np.sum(np.abs(superop.matrix), axis=1)))
    if dt * bound > _STABILITY_LIMIT:
        raise StepTooLarge(
            f"dt={dt} times the Gershgorin bound {bound:.3e} exceeds "
            f"{_STABILITY_LIMIT}; reduce the step"
        )
    n_steps = int(np.floor(t_end / dt + 1e-9))
    times = np.arange(n_steps + 1) * dt
    step = _rk4_step_matrix(superop.matrix, dt)
    vecs = np.empty((n_steps + 1, 9), dtype=complex)
    vecs[0] = vec(rho0)
    v = vecs[0]
    for i in range(1, n_steps + 1):
        v = step @ v
        vecs[i] = v
    # Row-major reshape of a column-major vec gives the transpose.
    states = vecs.reshape(n_steps + 1, 3, 3).swapaxes(1, 2)
    return Trajectory(times=times, states=states, pe=states[:, 0, 0].real.copy())


def verify_eigenpairs(superop: Superoperator, basis: SpectralBasis) -> np.ndarray:
    """Frobenius residuals ||L rho_k - lambda_k rho_k|| for the nine modes.

    The mode matrices are carried from the dressed to the bare basis before
    applying the generator matrix. Returns the nine residuals in mode order;
    thresholds are the caller's business.
    """
    u = dressed_transform(basis.es)
    residuals = np.empty(9)
    for i, mode in enumerate(basis.modes):
        rho_bare = u @ mode.rho @ u.T
        r = superop.matrix @ vec(rho_bare) - mode.lam * vec(rho_bare)
        residuals[i] = np.linalg.norm(r)
    return residuals
