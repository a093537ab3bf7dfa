"""Exception hierarchy. Everything raised for bad input derives from InputError."""


class InputError(ValueError):
    pass


class InfiniteValuationError(InputError):
    pass


class NotPIntegralError(InputError):
    pass


class SupersingularError(InputError):
    pass


class SingularCurveError(InputError):
    pass


class NotAUnitError(InputError):
    pass


class SingularMatrixError(InputError):
    """Constant-term matrix is singular mod p; ``reduction`` holds it."""

    def __init__(self, message, reduction=None, det_mod_p=None):
        super().__init__(message)
        self.reduction = reduction
        self.det_mod_p = det_mod_p


class NotOpenError(InputError):
    pass


class HypothesisError(InputError):
    pass


class UnresolvedWeightError(InputError):
    pass
