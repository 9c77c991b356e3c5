"""Exception types shared across the toolkit."""


class FoolkitError(Exception):
    pass


class ParseError(FoolkitError):
    """Syntax error with source position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class SortMismatch(FoolkitError):
    def __init__(self, message, path=(), expected=None, found=None):
        self.path = tuple(path)
        self.expected = expected
        self.found = found
        if expected is not None or found is not None:
            message = f"{message} (expected {expected}, found {found})"
        if self.path:
            message = f"{message} at {'/'.join(self.path)}"
        super().__init__(message)


class UndeclaredSymbol(FoolkitError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"undeclared symbol: {name}")


class DuplicateDeclaration(FoolkitError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"duplicate declaration: {name}")


class UnboundVariable(FoolkitError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unbound variable: {name}")


class NotRestrictedForm(FoolkitError):
    pass


class DomainMissing(FoolkitError):
    def __init__(self, sort):
        self.sort = sort
        super().__init__(f"no finite domain assigned to sort {sort}")


class SearchSpaceTooLarge(FoolkitError):
    pass


class CorruptProof(FoolkitError):
    def __init__(self, step_id, message=""):
        self.step_id = step_id
        super().__init__(f"proof step {step_id} does not replay{': ' + message if message else ''}")


class UnsupportedHigherOrderFeature(FoolkitError):
    def __init__(self, location, message="higher-order feature outside the supported fragment"):
        self.location = location
        super().__init__(f"{message} at {location}")
