"""Exception types raised across the package."""

from .algebra.fields import BadCharacteristic
from .algebra.modular import NoReconstruction


class NotDegreeSeven(ValueError):
    """The coefficient f7 vanishes, so the model is not septic."""


class OcticModel(ValueError):
    """An octic model (f8 != 0) was supplied; only septic models are supported."""


class NotSquarefree(ValueError):
    """F(X, 1) has a repeated factor and the curve was not flagged degenerate."""


class BadPrime(ValueError):
    """The curve has bad reduction (or is undefined) modulo this prime."""


class FieldTooLarge(ValueError):
    pass


class FieldMismatch(ValueError):
    pass


class DoesNotSplit(ValueError):
    """F(X, 1) does not split into linear factors over the base field."""


class NotOnKummer(ValueError):
    pass


class RankUnstable(RuntimeError):
    """Independent primes or sample sets produced different ranks."""


class KernelTooBig(RuntimeError):
    pass


class KernelEmpty(RuntimeError):
    pass


class KernelUnexpectedDim(RuntimeError):
    pass


class BudgetExceeded(RuntimeError):
    """An iteration limit was hit before the requested tolerance."""


__all__ = [
    "BadCharacteristic",
    "BadPrime",
    "BudgetExceeded",
    "DoesNotSplit",
    "FieldMismatch",
    "FieldTooLarge",
    "KernelEmpty",
    "KernelTooBig",
    "KernelUnexpectedDim",
    "NoReconstruction",
    "NotDegreeSeven",
    "NotOnKummer",
    "NotSquarefree",
    "OcticModel",
    "RankUnstable",
]
