"""Exception hierarchy. CLI exit codes hang off ``exit_code``."""


class HillGreenError(Exception):
    exit_code = 1


class InvalidGrid(HillGreenError, ValueError):
    exit_code = 64


class PotentialDomain(HillGreenError, ValueError):
    exit_code = 64


class OutOfDomain(HillGreenError, ValueError):
    exit_code = 64


class Resonant(HillGreenError):
    """The boundary determinant vanishes: lambda is an eigenvalue of the problem."""

    exit_code = 2

    def __init__(self, what, determinant, threshold=None):
        self.what = what
        self.determinant = float(determinant)
        self.threshold = threshold
        msg = f"{what} is resonant (determinant {self.determinant:.3e}"
        if threshold is not None:
            msg += f", threshold {threshold:.3e}"
        super().__init__(msg + ")")


class DegenerateIdentity(HillGreenError):
    exit_code = 2

    def __init__(self, what, value, threshold=None):
        self.what = what
        self.value = float(value)
        self.threshold = threshold
        super().__init__(f"{what}: nondegeneracy scalar {self.value:.3e} below threshold")


class NotFound(HillGreenError):
    exit_code = 4


class HypothesisViolated(HillGreenError):
    exit_code = 3


class NotContractive(HypothesisViolated):
    pass


class MaxIterExceeded(HillGreenError):
    exit_code = 1


class QuadratureFailure(HillGreenError):
    exit_code = 1
