"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition."""


class NotAStateError(ValidationError):
    """A matrix fails the density-matrix checks (Hermitian, unit trace, PSD)."""


class ZeroProbabilityError(ValidationError):
    """A post-measurement branch with vanishing outcome probability was requested."""


class WrongClassError(ValidationError):
    """A closed-form formula was applied outside its class of states."""
