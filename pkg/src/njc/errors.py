"""Exception and warning types shared across the package."""

from __future__ import annotations


class NjcError(Exception):
    """Base class for all errors raised by this package."""


class NonPositiveFrequency(NjcError):
    """Resonator/qubit frequency must be strictly positive."""


class NonPositiveCoupling(NjcError):
    """Qubit-resonator coupling must be strictly positive."""


class NegativeNonlinearity(NjcError):
    """Kerr nonlinearity must be non-negative."""


class NegativeRate(NjcError):
    """Dissipation rates must be non-negative."""


class SingularBasis(NjcError):
    """Dressed-state basis could not be formed (degenerate splitting)."""


class UnequalRates(NjcError):
    """Closed form requires equal decay rates for the two dressed states."""


class NonzeroChi(NjcError):
    """Closed form is only valid in the linear (chi = 0) limit."""


class StepTooLarge(NjcError):
    """Integrator step too large for the generator's spectral radius."""


class NonPhysicalState(NjcError):
    """Density matrix failed a trace/hermiticity/positivity check."""


class TooSparse(NjcError):
    """Time grid too coarse to resolve oscillations reliably."""


class WindowTooLong(NjcError):
    """Fit window extends beyond the short-time regime."""


class UnknownPreset(NjcError):
    """Requested named parameter set does not exist."""


class GridTooLarge(NjcError):
    """Sweep grid exceeds the allowed number of points."""


class ConfigError(NjcError):
    """Scenario or sweep configuration is invalid (file or inline)."""


class NonFiniteValue(NjcError):
    """NaN or Inf reached the export layer."""


class RegimeWarning(UserWarning):
    """Parameters outside the regime where the three-level truncation holds."""
