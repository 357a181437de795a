"""Exception types shared across the package."""


class StabledgError(Exception):
    """Base class for all package-specific errors."""


# -- dynamic-graph preconditions ------------------------------------------

class DuplicateVertex(StabledgError):
    pass


class UnknownVertex(StabledgError):
    pass


class UnknownNeighbor(StabledgError):
    pass


class SelfLoop(StabledgError):
    pass


class EmptyGraph(StabledgError):
    pass


# -- streams / harness -----------------------------------------------------

class ParseError(StabledgError):
    pass


class ModelViolation(StabledgError):
    """An algorithm received an event its update model does not allow."""


class EmptyTrace(StabledgError):
    pass


class InvariantBreached(StabledgError):
    """A per-step invariant failed during a replay.

    Carries the event timestamp and the name of the violated check.
    """

    def __init__(self, t, name, detail=""):
        self.t = t
        self.name = name
        self.detail = detail
        super().__init__(f"invariant '{name}' breached at t={t}" + (f": {detail}" if detail else ""))


# -- oracles ----------------------------------------------------------------

class BudgetExceeded(StabledgError):
    """Exact solving was refused or aborted because the instance is too large."""

    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


# -- algorithms --------------------------------------------------------------

class TargetUnavailable(StabledgError):
    pass


class AverageDegreeExceeded(StabledgError):
    pass


class NotIndependent(StabledgError):
    pass


class NoImprovingSwap(StabledgError):
    """No size-bounded feasible swap improves the current solution."""


class ContinuityViolated(StabledgError):
    """The optimum moved by more than the declared continuity constant."""


# -- generators ---------------------------------------------------------------

class SelectionFailed(StabledgError):
    pass


class ConfigModelStuck(StabledgError):
    pass


class WiringInfeasible(StabledgError):
    pass


class TooLarge(StabledgError):
    pass
