"""Exceptions shared across growthlab modules."""


class CapacityError(RuntimeError):
    """A configured resource cap was hit before the computation finished.

    Raised instead of returning a possibly wrong partial answer.  The
    message names the cap (tuple budget, state space, element count,
    backtracking nodes) and how far the computation got.
    """


class ParseError(ValueError):
    """Malformed textual input (expression DSL, graph, relation or b-file).

    ``position`` is a character offset for one-line inputs and a line
    number for line-oriented files; it is already part of ``message``.
    """

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position
