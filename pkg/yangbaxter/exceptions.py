class YangBaxterError(Exception):
    """Base class for every error raised by the yangbaxter package."""


class BackendMismatchError(YangBaxterError, TypeError):
    """Exact and Float scalars were combined in one operation."""


class DimensionMismatchError(YangBaxterError, ValueError):
    pass


class ParameterError(YangBaxterError, ValueError):
    """Malformed parameter set, index out of range or bad parameter file."""


class SizeLimitError(YangBaxterError, ValueError):
    pass


class NonInvertibleError(YangBaxterError, ValueError):
    """The entangling criterion is only defined for invertible gates."""


class FormatError(YangBaxterError, ValueError):
    """Malformed scalar string, Matrix Market file or JSON document."""
