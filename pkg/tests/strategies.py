"""Hypothesis strategies shared across the njc test modules."""

import numpy as np
from hypothesis import strategies as st

import njc


@st.composite
def model_params(draw, max_omega=10.0, max_rate=0.1):
    """Random valid parameter sets inside the weak-nonlinearity regime.

    chi is drawn as a fraction of g/2 so no RegimeWarning fires; rates may
    be zero.
    """
    omega = draw(st.floats(0.1, max_omega))
    g = draw(st.floats(1e-3, 1.0))
    chi = g / 2.0 * draw(st.floats(0.0, 1.0))
    gamma_plus = draw(st.floats(0.0, max_rate))
    gamma_minus = draw(st.floats(0.0, max_rate))
    return njc.validate_params(omega, g, chi, gamma_plus, gamma_minus)


@st.composite
def density_matrices(draw):
    """Random physical states: Hermitian, positive, unit trace."""
    re = draw(
        st.lists(st.floats(-1.0, 1.0), min_size=9, max_size=9).map(np.asarray)
    )
    im = draw(
        st.lists(st.floats(-1.0, 1.0), min_size=9, max_size=9).map(np.asarray)
    )
    a = (re + 1j * im).reshape(3, 3)
    rho = a @ a.conj().T + 1e-3 * np.eye(3)
    return rho / np.trace(rho).real
