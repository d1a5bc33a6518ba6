"""Exception hierarchy shared by all trispline modules."""


class TrisplineError(Exception):
    """Base class for every error raised by this package."""


class DegenerateTriangle(TrisplineError, ValueError):
    pass


class CoincidentPoints(TrisplineError, ValueError):
    pass


class NotFound(TrisplineError, LookupError):
    """A query point lies outside every triangle of the mesh."""


class OutsideDomain(NotFound):
    pass


class IntegerOverflow(TrisplineError, OverflowError):
    """An exact rational coefficient left the signed 128-bit range."""


class DivisibilityViolation(TrisplineError, ArithmeticError):
    """Exact polynomial division left a remainder where none is possible."""


class ShapeConfigError(TrisplineError, ValueError):
    pass


class ParseError(TrisplineError, ValueError):
    pass


class MeshIndexError(TrisplineError, IndexError):
    pass


class MissingData(TrisplineError, ValueError):
    pass


class BadGrid(TrisplineError, ValueError):
    pass


class SingularMap(TrisplineError, ValueError):
    pass
