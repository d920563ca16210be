"""
Exception hierarchy for the sure-success search planner.

Input validation problems raise plain ValueError; everything below signals a
numerical condition the caller has to branch on.
"""


class QuantumSearchError(Exception):
    """Base class for numerical failures in planning or verification"""


class DegenerateAngle(QuantumSearchError):
    """A count formula's denominator vanishes (theta -> 0, beta -> 0 or pi/2)"""


class DegenerateSpectrum(QuantumSearchError):
    """The block operator has coinciding eigenvalues; eigenvectors are arbitrary"""


class ConvergenceFailure(QuantumSearchError):
    """A root bracket could not be found or bisection did not converge"""


class BetaMismatch(QuantumSearchError):
    """A full-space instance does not reproduce the planned beta"""


class SureSuccessViolation(QuantumSearchError):
    """A verified run ended below the success tolerance"""
