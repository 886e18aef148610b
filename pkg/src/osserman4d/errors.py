"""Exception types raised across the package."""


class CurvatureError(ValueError):
    """Base class for invalid input to the curvature toolkit."""


class NonSymmetric(CurvatureError):
    pass


class ZeroVector(CurvatureError):
    pass


class NotOrthonormal(CurvatureError):
    pass


class SymmetryViolation(CurvatureError):
    def __init__(self, which: str, magnitude: float):
        self.which = which
        self.magnitude = float(magnitude)
        super().__init__(f"{which} violated by {self.magnitude:.3e}")


class BadParameters(CurvatureError):
    pass


class NotAComplexStructure(CurvatureError):
    pass


class NotHalfFlat(CurvatureError):
    pass


class OutOfDomain(CurvatureError):
    pass


class SingularMetric(CurvatureError):
    pass


class UnknownChart(CurvatureError):
    pass


class ParseError(CurvatureError):
    pass
