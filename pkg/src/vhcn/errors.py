"""Exception hierarchy shared by the library and the CLI."""


class VhcnError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(VhcnError, ValueError):
    """An input violates a documented range or invariant."""

    def __init__(self, name, value, constraint):
        self.name = name
        self.value = value
        self.constraint = constraint
        super().__init__(f"{name}={value!r} is invalid: expected {constraint}")


class NoBoundaryError(ParameterError):
    """Raised when the rate/latency boundary does not exist (loss-free path)."""


class EmptyCatalogError(VhcnError, ValueError):
    pass


class ScenarioParseError(VhcnError):
    """Scenario text is not well-formed."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class ScenarioValidationError(VhcnError):
    """A scenario value parsed fine but breaks a model invariant."""

    def __init__(self, section, message):
        self.section = section
        super().__init__(f"[{section}] {message}")


class ComputationError(VhcnError):
    """A module failed while evaluating a scenario section."""

    def __init__(self, section, cause):
        self.section = section
        self.cause = cause
        super().__init__(f"[{section}] {cause}")


def check(condition, name, value, constraint, exc=ParameterError):
    if not condition:
        raise exc(name, value, constraint)
