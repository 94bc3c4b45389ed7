"""Exception types raised across the package."""


class OrbspliceError(Exception):
    pass


class SingularMatrix(OrbspliceError, ArithmeticError):
    pass


class GraphError(OrbspliceError, ValueError):
    pass


class ParseError(GraphError):
    def __init__(self, reason, line=None, column=None):
        self.reason = reason
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + reason)


class DuplicateVertex(ParseError):
    pass


class UnknownVertexInEdge(ParseError):
    pass


class NonPositiveWeight(ParseError):
    pass


class UnknownVertex(GraphError):
    pass


class UnknownEdge(GraphError):
    pass


class NotBlowDownable(GraphError):
    pass


class NotNegativeDefinite(GraphError):
    pass


class DecoratedInterior(GraphError):
    pass


class NoInteriorVertex(GraphError):
    pass


class NotALeaf(GraphError):
    pass


class NoNodes(GraphError):
    pass


class GenerationFailure(OrbspliceError, RuntimeError):
    """Selected generators failed to generate; indicates a bug, never bad input."""


class ConditionsFail(OrbspliceError):
    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = list(failures)
