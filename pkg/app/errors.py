class GcdZetaError(Exception):
    exit_code = 1


class DomainError(GcdZetaError, ValueError):
    """An argument lies outside the operation's domain."""


class ValidationError(GcdZetaError, ValueError):
    """Input parsed but failed a semantic check (e.g. a non-prime base)."""


class ParseError(GcdZetaError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceError(GcdZetaError):
    exit_code = 2

    def __init__(self, message: str, cap: int | float | None = None):
        self.cap = cap
        if cap is not None:
            message = f"{message} (cap {cap:g})"
        super().__init__(message)


class PrecisionError(GcdZetaError):
    exit_code = 2


class NumericError(GcdZetaError):
    exit_code = 2


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, GcdZetaError):
        return exc.exit_code
    # pydantic validation errors are ValueErrors too
    if isinstance(exc, ValueError):
        return 1
    return 2
