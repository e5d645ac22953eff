"""Exception hierarchy."""


class DissensionError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(DissensionError, ValueError):
    pass


class NotHermitianError(DissensionError, ValueError):
    pass


class ConvergenceError(DissensionError, RuntimeError):
    pass


class NormalizationError(DissensionError, ValueError):
    pass


class RankError(DissensionError, ValueError):
    pass


class ArityError(DissensionError, ValueError):
    pass


class SubsystemError(DissensionError, ValueError):
    """Bad qubit index, duplicated target, or overlapping subsystem sets."""


class ParseError(DissensionError, ValueError):
    pass


class ValidationError(DissensionError, ValueError):
    """A matrix failed one of the density-matrix invariants.

    ``invariant`` is one of ``"square"``, ``"finite"``, ``"dimension"``,
    ``"hermitian"``, ``"trace"`` or ``"positive semidefinite"``.
    """

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant
