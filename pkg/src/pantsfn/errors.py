"""Exception hierarchy.

Validation problems (bad input data) derive from :class:`ValidationError`;
numerical breakdowns (a degenerate polygon, a non-hyperbolic word) derive
from :class:`NumericalDegeneration`. The CLI maps the two families to exit
codes 1 and 2.
"""


class PantsError(Exception):
    pass


class ValidationError(PantsError, ValueError):
    pass


class NumericalDegeneration(PantsError, ArithmeticError):
    pass


class NotHyperbolic(NumericalDegeneration):
    pass


class DegenerateHexagon(NumericalDegeneration):
    pass


class DegeneratePentagon(NumericalDegeneration):
    pass


class LengthOutOfRange(ValidationError):
    pass


class BadGraph(ValidationError):
    pass


class BadPath(ValidationError):
    pass


class GraphMismatch(ValidationError):
    pass


class IndexMismatch(ValidationError):
    pass


class BoundaryCuff(ValidationError):
    pass


class NoCrossing(ValidationError):
    pass


class UnknownGenerator(ValidationError):
    pass
