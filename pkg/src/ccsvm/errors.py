"""Exception hierarchy. Every error carries the CLI exit code it maps to."""


class CCError(Exception):
    exit_code = 1


class ParseError(CCError):
    exit_code = 3

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class DomainError(CCError):
    exit_code = 4


class DuplicateError(CCError):
    exit_code = 5


class NotFoundError(CCError):
    exit_code = 6


class InvalidFlipError(CCError):
    exit_code = 7


class InvalidTraceError(CCError, ValueError):
    exit_code = 8


class TrainingError(CCError):
    exit_code = 9


class ContractViolation(CCError, ValueError):
    exit_code = 10


class UndefinedFormulaError(CCError, ZeroDivisionError):
    exit_code = 11


class UndefinedTestError(CCError):
    exit_code = 12


class ConfigError(CCError, ValueError):
    exit_code = 13


EXIT_CODES = {
    cls.__name__: cls.exit_code
    for cls in (
        ParseError,
        DomainError,
        DuplicateError,
        NotFoundError,
        InvalidFlipError,
        InvalidTraceError,
        TrainingError,
        ContractViolation,
        UndefinedFormulaError,
        UndefinedTestError,
        ConfigError,
    )
}
