class FracOscException(Exception):
    """
    General purpose exception for the package.
    Any and all exceptions thrown by fracosc must be
    of this class. ``exit_code`` is what the command line returns
    when the exception ends a run.
    """
    exit_code = 2


class UsageException(FracOscException):
    exit_code = 1


class ExprSyntaxError(UsageException):

    def __init__(self, message, line=1, column=1, expected=None):
        self.line = line
        self.column = column
        self.expected = expected
        super().__init__(
            "{0} (line {1}, column {2}){3}".format(
                message, line, column,
                ", expected " + str(expected) if expected else ""
            )
        )


class UnknownIdentifierError(UsageException):
    pass


class ArityError(UsageException):
    pass


class ConfigError(UsageException):
    pass


class DomainError(FracOscException):
    exit_code = 2


class PoleError(DomainError):

    def __init__(self, pole, message=None):
        self.pole = pole
        super().__init__(message or "Gamma function has a pole at {0}".format(pole))


class EvaluationError(DomainError):
    pass


class DivisionByZero(EvaluationError):
    pass


class UnsupportedFormError(DomainError):
    pass


class SolverError(DomainError):

    def __init__(self, message, node=None, t=None, state=None):
        self.node = node
        self.t = t
        self.state = state
        super().__init__(
            "{0} (last good node {1} at t={2})".format(message, node, t)
        )


class SingularityError(DomainError):
    pass


class RankError(DomainError):
    pass


class AccuracyError(FracOscException):
    exit_code = 3

    def __init__(self, message, magnitude=None):
        self.magnitude = magnitude
        super().__init__(message)


class ResidualAssertionError(AccuracyError):
    pass
