"""Exception hierarchy shared by the library and the command line."""


class AnalysisError(Exception):
    """Base class for every error raised by automeasure."""


class ParseError(AnalysisError, ValueError):
    """Malformed automaton or chain file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(AnalysisError, ValueError):
    """A mathematical hypothesis of the requested computation does not hold."""


class NotInvertibleError(PreconditionError):
    pass


class NotReversibleError(PreconditionError):
    pass


class NonUniqueStationaryError(PreconditionError):
    """The chain has several recurrent classes, so no unique stationary vector."""

    def __init__(self, classes, labels=None):
        self.classes = [sorted(c) for c in classes]
        if labels is not None:
            shown = [[labels[i] for i in c] for c in self.classes]
        else:
            shown = self.classes
        super().__init__(
            f"stationary vector is not unique: {len(shown)} recurrent classes {shown}"
        )
