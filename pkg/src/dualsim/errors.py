"""Exception hierarchy shared by the simulator modules."""


class DualityError(ValueError):
    """Base class for all simulator errors."""


class DimensionError(DualityError):
    """Operands have incompatible shapes or branch counts."""


class NumericalError(DualityError):
    """An input violates a numerical precondition (Hermiticity, unitarity, PSD, ...)."""


class NotHermitianError(NumericalError):
    pass


class NotUnitaryError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass
