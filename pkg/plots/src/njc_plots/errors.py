"""Exception types raised by njc-plots."""


class PlotsError(Exception):
    """Base class for all errors this package raises on purpose."""


class MalformedCsv(PlotsError):
    """The CSV file cannot be read as a trajectory table."""


class MissingColumn(PlotsError):
    """A required column is absent from the CSV header."""


class MissingSidecar(PlotsError):
    """No metadata sidecar next to the CSV, but one is required."""


class EnvelopeMismatch(PlotsError):
    """Curve minima disagree with the envelope recomputed from metadata."""
