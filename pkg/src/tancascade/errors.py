"""Exception types raised by the tancascade toolkit."""


class TanCascadeError(Exception):
    """Base class for all toolkit errors."""


class PoleProximity(TanCascadeError, ValueError):
    """Argument lies within pole_tolerance of a pole where no directional rule applies."""


class UnsidedPole(TanCascadeError, ValueError):
    """A pole was reached by a point that carries no approach side."""


class DegenerateDerivative(TanCascadeError, ValueError):
    """The derivative vanishes or saturates where a quotient by it is needed."""


class NoConvergence(TanCascadeError, RuntimeError):
    """An iterative procedure ran out of iterations."""


class NewtonDiverged(NoConvergence):
    """Newton iteration left its trust region or failed to reduce the residual."""


class DerivativeNearOne(TanCascadeError, ArithmeticError):
    """The Newton Jacobian of f^N(x) - x is nearly singular (near-parabolic cycle)."""


class PoleOnCycle(TanCascadeError, ValueError):
    """A cycle point sits on a pole, so the multiplier is undefined."""


class NoCrossing(TanCascadeError, ValueError):
    """The multiplier does not cross the target value inside the bracket."""


class NotRenormalizable(TanCascadeError, ValueError):
    """No pre-pole bracket exists at the requested renormalization level."""


class OutOfDomain(TanCascadeError, ValueError):
    """Argument lies outside the domain of a restricted iterate."""


class NoSignChange(TanCascadeError, ValueError):
    """A root bracket does not contain a sign change."""


class OrbitHitPole(TanCascadeError, ValueError):
    """An orbit hit a pole before the step at which that is allowed."""


class InsufficientData(TanCascadeError, ValueError):
    """Not enough entries for the requested estimate."""


class ClosureFailed(TanCascadeError, ValueError):
    """A virtual-cycle orbit does not close on the pole within tolerance."""


class SingularPartial(TanCascadeError, ZeroDivisionError):
    """A partial derivative that must be inverted is zero."""


class BranchJump(TanCascadeError, ValueError):
    """A finite-difference stencil straddles a pre-pole discontinuity."""


class OrderingViolated(TanCascadeError, ValueError):
    """Cantor-system endpoints are out of the expected order."""


class IoFailure(TanCascadeError, OSError):
    """A raster could not be written or read."""
