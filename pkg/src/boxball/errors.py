"""Exception hierarchy.

Every error carries a short ``category`` string; the CLI prints it as
``error:<category>: message`` so harnesses can match on it.
"""


class BoxBallError(Exception):
    category = "error"


class ParseError(BoxBallError, ValueError):
    category = "parse"


class MalformedWalkError(BoxBallError, ValueError):
    category = "malformed-walk"


class MalformedExcursionError(BoxBallError, ValueError):
    category = "malformed-excursion"


class EnumerationLimitError(BoxBallError, ValueError):
    category = "enumeration-limit"


class NotStrictError(BoxBallError, ValueError):
    category = "not-strict"


class UndefinedDynamicsError(BoxBallError, ValueError):
    category = "undefined-dynamics"


class MalformedDiagramError(BoxBallError, ValueError):
    category = "malformed-diagram"


class MalformedYoungError(BoxBallError, ValueError):
    category = "malformed-young"


class NotInAError(BoxBallError, ValueError):
    category = "not-in-A"


class DegenerateParameterError(BoxBallError, ValueError):
    category = "degenerate-parameter"


class UnsupportedDensityError(BoxBallError, ValueError):
    category = "unsupported-density"


class TruncationError(BoxBallError, ValueError):
    category = "truncation"
