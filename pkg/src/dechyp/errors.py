"""Exception hierarchy shared by all modules."""


class DecHypError(Exception):
    """Base class for every error raised by the package."""


class NonFiniteInput(DecHypError, ValueError):
    pass


class NonPositiveWeight(DecHypError, ValueError):
    pass


class BadCenterNorm(DecHypError, ValueError):
    pass


class BadPointNorm(DecHypError, ValueError):
    pass


class NoOrthogeodesic(DecHypError, ValueError):
    """Two flare axes (or a flare axis and a line) intersect."""


class NonPositiveProduct(DecHypError, ValueError):
    pass


class NoRadicalLine(DecHypError, ValueError):
    pass


class InvalidTriangle(DecHypError, ValueError):
    """The Gram matrix of a decorated triangle does not have signature (2,1)."""


class DegenerateSystem(DecHypError, ValueError):
    pass


class SupportUndefined(DecHypError, ValueError):
    pass


class ParseError(DecHypError, ValueError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class TopologyError(DecHypError, ValueError):
    pass


class FormatVersionError(DecHypError, ValueError):
    pass


class DegenerateQuad(DecHypError, ValueError):
    pass


class NotFlippable(DecHypError, ValueError):
    pass


class MaxFlipsExceeded(DecHypError, RuntimeError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ImproperDecoration(DecHypError, RuntimeError):
    pass


class NotConverged(DecHypError, ValueError):
    pass


class BadDeterminant(DecHypError, ValueError):
    pass


class SingularFace(DecHypError, ValueError):
    pass
