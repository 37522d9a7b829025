"""Exception hierarchy shared by all ranklab modules.

Gate errors (bad preconditions, rejected parameters) derive from GateError and
map to CLI exit code 2; budget refusals map to exit code 3; usage errors to 1.
"""

from __future__ import annotations


class RankLabError(Exception):
    """Base class for all ranklab errors."""


class GateError(RankLabError):
    """A precondition or parameter gate rejected the input (CLI exit 2)."""


class BudgetExceeded(RankLabError):
    """An enumeration would exceed the configured budget (CLI exit 3)."""

    def __init__(self, needed: int, allowed: int, what: str = "items"):
        super().__init__(f"enumeration of {needed} {what} exceeds budget {allowed}")
        self.needed = needed
        self.allowed = allowed
        self.what = what


class UsageError(RankLabError):
    """Malformed command line or file input (CLI exit 1)."""


class NotPrime(GateError):
    pass


class WrongLevel(GateError):
    pass


class AmbientMismatch(GateError):
    pass


class TowerMismatch(GateError):
    pass


class DimensionMismatch(GateError):
    pass


class PreconditionHyperplaneWeight(GateError):
    pass


class NoEmbedding(GateError):
    pass


class IotaFull(GateError):
    pass


class KernelMismatch(GateError):
    pass


class GcdViolation(GateError):
    pass


class KTooLarge(GateError):
    pass


class EtaConditionViolated(GateError):
    pass


class InvalidParams(GateError):
    pass


class NotMRD(GateError):
    pass


class EmptyCode(GateError):
    pass


class ParamMismatch(GateError):
    pass


class HypothesisViolated(GateError):
    pass


class RankDeficientA(GateError):
    pass


class ShapeMismatch(GateError):
    pass


class IdealiserNotMaximal(GateError):
    pass


class DivisibilityViolation(GateError):
    pass


class NonIntegral(GateError):
    pass


class NotMaxScattered(GateError):
    pass


class NotSpanning(GateError):
    pass


class IoError(RankLabError):
    pass
