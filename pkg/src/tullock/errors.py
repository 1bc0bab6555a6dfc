"""Exception hierarchy shared by every module."""


class TullockError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TullockError, ValueError):
    """A parameter violates a model invariant (R <= 1, a <= 0, ...)."""


class SchemaError(TullockError, ValueError):
    """A document is structurally malformed; ``path`` names the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class AllZeroProfile(TullockError, ValueError):
    """Every production is zero, so winning probabilities are undefined."""


class AllZeroOpponents(TullockError, ValueError):
    """Opponents produce nothing; the deviation supremum is not attained."""


class NotConvexPlayer(TullockError, ValueError):
    """Thresholds were requested for a player with r <= 1."""


class AboveUpperThreshold(TullockError, ValueError):
    """k2 was evaluated above the player's upper participation threshold."""


class AtDiscontinuity(TullockError, ValueError):
    """A share derivative was requested exactly at the upper threshold."""


class NoConvexPlayers(TullockError, ValueError):
    """The candidate-node grid needs at least one player with r > 1."""


class InvalidSSLT(TullockError, ValueError):
    """The target is below twice the largest element, or an element is not positive."""


class BadEpsParam(TullockError, ValueError):
    """The sentinel perturbation would make the sentinel elasticity non-positive."""


class TooLarge(TullockError, ValueError):
    """A brute-force enumeration was asked to exceed its size guard."""


class MaxIterationsExceeded(TullockError, RuntimeError):
    """An iterative solver ran out of iterations; carries its last state."""

    def __init__(self, message, profile=None, residual=None):
        super().__init__(message)
        self.profile = profile
        self.residual = residual
