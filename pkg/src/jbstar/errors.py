"""Exception types raised by the package."""


class JBStarError(Exception):
    pass


class ModelMismatch(JBStarError, ValueError):
    pass


class InvalidDescriptor(JBStarError, ValueError):
    pass


class StructureViolation(JBStarError, ValueError):
    """Data does not respect the block or symmetry pattern of its model."""


class SingularElement(JBStarError, ArithmeticError):
    pass


class NotRegular(JBStarError, ArithmeticError):
    pass


class NotTripotent(JBStarError, ValueError):
    pass


class SpectralDomainError(JBStarError, ValueError):
    pass


class NotUnitary(JBStarError, ValueError):
    pass


class DistanceTooLarge(JBStarError, ValueError):
    pass


class LogBranch(JBStarError, ArithmeticError):
    pass


class PhaseJumpTooLarge(JBStarError, ValueError):
    pass


class NotCircleModel(JBStarError, ValueError):
    pass


class FamilyInvariantViolated(JBStarError, ValueError):
    pass


class NonConvergent(JBStarError, ArithmeticError):
    pass


class NotUnital(JBStarError, ValueError):
    pass


class DecompositionError(JBStarError, ArithmeticError):
    """A recovered object failed one of its verification checks."""


class HypothesisFailed(JBStarError, ValueError):
    pass


class ConnectedUnitarySet(JBStarError, ValueError):
    pass
