"""
Exceptions raised by acelib.

Geometry and input problems derive from ``ValueError``; failures of an
operation that received valid input derive from ``RuntimeError``. Settling
that does not converge is not an error: it is reported with
``sklearn.exceptions.ConvergenceWarning``.
"""


class KinematicInfeasible(ValueError):
    """ A wheel height pair is farther apart than the link can reach. """


class AttitudeDomainError(ValueError):
    """ Differential joint heights imply a roll outside [-pi/2, pi/2]. """


class NonMonotoneConfiguration(ValueError):
    """ A suspension triangle is not monotone within the joint limits. """


class InvalidModelFile(ValueError):
    """ A rover model file cannot be parsed or misses parameters. """


class OutOfBounds(ValueError):
    """ A query region extends beyond the DEM extent. """


class Unevaluatable(Exception):
    """ A pose cannot be evaluated on the available terrain.

    Parameters
    ----------
    reason : str
        Either ``'unknown_terrain'`` or ``'out_of_bounds'``.
    message : str, optional
    """

    def __init__(self, reason, message=None):
        self.reason = reason
        super().__init__(message if message is not None else reason)


class PlacementFailure(RuntimeError):
    """ Rock placement ran out of attempts before reaching the coverage. """


class SuspensionLimitExceeded(RuntimeError):
    """ The settled state leaves the mechanical joint limits.

    The settle result is attached as ``result``.
    """

    def __init__(self, message, result=None):
        self.result = result
        super().__init__(message)
