"""Exception hierarchy shared by all modules."""


class DSPError(Exception):
    """Base class for library errors."""


class ExpressionSyntaxError(DSPError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DivisionByZero(DSPError, ZeroDivisionError):
    pass


class SizeLimit(DSPError):
    pass


class ShapeMismatch(DSPError, ValueError):
    pass


class InvalidSpec(DSPError, ValueError):
    """A class spec, JNF or tuple violates its structural invariants."""


class PsiUndefined(DSPError):
    def __init__(self, reasons):
        super().__init__("Psi is undefined: " + ", ".join(reasons))
        self.reasons = tuple(reasons)


class InvalidChoice(DSPError, ValueError):
    pass


class EmptyClassList(DSPError, ValueError):
    pass


class NotDiagonalizable(DSPError):
    pass


class NotBlockTriangular(DSPError):
    pass


class PreconditionViolated(DSPError):
    pass


class ZeroParameter(DSPError, ValueError):
    pass


class SpectralConstraintViolated(DSPError, ValueError):
    pass


class ScalarSum(DSPError):
    pass


class TraceMismatch(DSPError):
    pass


class ConstructionFailed(DSPError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EquivalentBlocks(DSPError):
    pass


class ExtDimensionMismatch(DSPError):
    def __init__(self, message, dim_l=None, dim_n=None):
        super().__init__(message)
        self.dim_l = dim_l
        self.dim_n = dim_n


class InvalidInstance(DSPError, ValueError):
    pass


class InfeasibleShape(DSPError, ValueError):
    pass


class SchemaError(DSPError, ValueError):
    """A JSON document does not follow the expected file layout."""
