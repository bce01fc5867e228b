"""Exception hierarchy."""


class LargeSpinError(Exception):
    """Base class for all package errors."""


class SolverError(LargeSpinError):
    """Numerical failure inside a solver (maps to CLI exit code 2)."""


class NonHermitianInput(LargeSpinError, ValueError):
    def __init__(self, asymmetry, scale):
        self.asymmetry = asymmetry
        super().__init__(f"matrix is not Hermitian: max |M - M^H| = {asymmetry:.3e} (scale {scale:.3e})")


class DimensionMismatch(LargeSpinError, ValueError):
    pass


class InvalidSpin(LargeSpinError, ValueError):
    pass


class InvalidCoupling(LargeSpinError, ValueError):
    pass


class UnknownIon(LargeSpinError, KeyError):
    pass


class NonNormalizedState(LargeSpinError, ValueError):
    pass


class PolarSingularity(LargeSpinError, ValueError):
    pass


class DegenerateOverlap(SolverError):
    pass


class InvalidParams(LargeSpinError, ValueError):
    pass


class InvalidBasis(LargeSpinError, ValueError):
    pass


class NotConverged(SolverError):
    pass


class UnsupportedAlpha(LargeSpinError, ValueError):
    pass


class OutOfRegime(LargeSpinError, ValueError):
    pass


class QuadrupletNotResolved(SolverError):
    def __init__(self, width, gap):
        self.width = width
        self.gap = gap
        super().__init__(f"lowest quadruplet not resolved: width {width:.3e}, gap to fifth level {gap:.3e}")


class ConfigParseError(LargeSpinError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ConfigValidationError(LargeSpinError, ValueError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
