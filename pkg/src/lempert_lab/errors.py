"""Exception hierarchy shared by all subpackages."""


class LempertLabError(Exception):
    """Base class for every error raised by lempert_lab."""


class InvalidDomainError(LempertLabError, ValueError):
    """A domain description does not define a valid bounded Jordan domain."""


class BoundaryProximityError(LempertLabError, ValueError):
    """A point lies inside the refused collar around the boundary."""


class OutsideDomainError(LempertLabError, ValueError):
    """A point that must be interior lies outside the domain."""


class ConvergenceError(LempertLabError, RuntimeError):
    """An iterative solver failed to reach its tolerance.

    ``residual`` carries the last residual the solver saw.
    """

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class AdmissibilityError(LempertLabError, RuntimeError):
    """No admissible polynomial curve was found."""


class StageError(LempertLabError, RuntimeError):
    """A stage of the disc-construction pipeline failed.

    The failing stage name is kept in ``stage`` and the original error is
    chained as ``__cause__``.
    """

    def __init__(self, stage, message):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
