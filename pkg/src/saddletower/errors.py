"""Exception hierarchy.

Errors are grouped by how a caller should react: bad input
(``ValidationError``), a mathematically unmet precondition
(``PreconditionError``) or a solver that did not converge
(``ConvergenceError``).  The CLI maps these onto exit codes 2, 3 and 4.
"""


class SaddleTowerError(Exception):
    pass


class ValidationError(SaddleTowerError, ValueError):
    pass


class PreconditionError(SaddleTowerError):
    pass


class ConvergenceError(SaddleTowerError):
    pass


# configuration data
class ZeroNodeError(ValidationError):
    pass


class DuplicateNodeError(ValidationError):
    pass


class ShapeMismatchError(ValidationError):
    pass


class CrossLayerCollisionError(ValidationError):
    pass


class Theta1NonzeroError(PreconditionError):
    pass


class Theta2NonzeroError(PreconditionError):
    pass


class ConsistencyFailure(SaddleTowerError):
    """Internal arithmetic went wrong; not the caller's fault."""


# polynomials
class DegreeZeroError(ValidationError):
    pass


class BadCError(PreconditionError):
    pass


class DegenerateDegreeError(PreconditionError):
    pass


class NonSimpleRootsError(PreconditionError):
    pass


class RootAtPunctureError(PreconditionError):
    pass


class ZeroC2Error(PreconditionError):
    pass


class InvariantViolationError(PreconditionError):
    pass


class NoSolutionsError(ConvergenceError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class SharedRootsError(PreconditionError):
    pass


class InexactDivisionError(PreconditionError):
    pass


# engine
class NoConvergenceError(ConvergenceError):
    def __init__(self, message, best=None, residual=None, history=None):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.history = history or []


class SingularStepError(ConvergenceError):
    pass


class DegenerateQtildeError(PreconditionError):
    pass


class BlockNotBalancedError(PreconditionError):
    pass


class BlockNotNormalizedError(PreconditionError):
    pass
