"""Exception hierarchy with stable machine-readable codes."""


class FreermError(Exception):
    code = "E_INTERNAL"


class QuadratureError(FreermError):
    code = "E_QUADRATURE"


class DivergenceError(FreermError):
    code = "E_DIVERGENCE"


class ZeroMeasureError(FreermError):
    code = "E_ZERO_MEASURE"


class EmptyTruncationError(FreermError):
    code = "E_EMPTY_TRUNCATION"


class UnknownNameError(FreermError, KeyError):
    code = "E_UNKNOWN_NAME"

    def __str__(self):
        return Exception.__str__(self)


class KernelConditionError(FreermError, ValueError):
    code = "E_KERNEL_CONDITION"


class BracketError(FreermError, ValueError):
    code = "E_BRACKET"


class MonotonicityError(FreermError, ValueError):
    code = "E_NOT_MONOTONE"


class IlogViolationError(FreermError, ValueError):
    code = "E_ILOG"


class InadmissibleClassError(FreermError, ValueError):
    code = "E_INADMISSIBLE_CLASS"


class JumpCountError(FreermError):
    code = "E_JUMP_CAP"


class DegenerateSetError(FreermError):
    code = "E_DEGENERATE_SET"


class ContinuationError(FreermError):
    code = "E_CONTINUATION"

    def __init__(self, message, last_good=None):
        super().__init__(message)
        self.last_good = last_good


class NegativeDensityError(FreermError):
    code = "E_NEGATIVE_DENSITY"


class NonHermitianError(FreermError, ValueError):
    code = "E_NON_HERMITIAN"


class EigenConvergenceError(FreermError):
    code = "E_EIGEN_CONVERGENCE"


class ConfigError(FreermError, ValueError):
    code = "E_CONFIG"


class EmptyRunError(FreermError):
    code = "E_EMPTY_RUN"
