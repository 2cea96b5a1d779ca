"""Exception hierarchy shared by every layersem module."""


class LayerSemError(Exception):
    """Base class for all errors raised by layersem."""


class ModelError(LayerSemError):
    """A value could not be constructed because it breaks a model invariant."""


class UnknownPortError(ModelError):
    def __init__(self, port, context=""):
        self.port = port
        msg = f"unknown port {port!r}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class UnknownLayerError(ModelError):
    def __init__(self, name, known=()):
        self.name = name
        msg = f"unknown layer {name!r}"
        if known:
            msg += f"; known layers: {', '.join(sorted(known))}"
        super().__init__(msg)


class TypeViolationError(ModelError):
    def __init__(self, port, service, allowed):
        self.port = port
        self.service = service
        super().__init__(
            f"service {service!r} is not in the type of port {port!r} "
            f"(allowed: {sorted(allowed)})"
        )


class InvalidConfigurationError(LayerSemError):
    """Raised where a valid configuration is required but validation failed."""

    def __init__(self, report):
        self.report = report
        super().__init__("invalid configuration:\n" + report.describe())


class BudgetExceededError(LayerSemError):
    """An exhaustive enumeration would exceed its configured budget.

    Never silently truncated: callers either raise this or mark the
    affected check as skipped.
    """

    def __init__(self, what, size, budget):
        self.what = what
        self.size = size
        self.budget = budget
        super().__init__(f"{what}: {size} exceeds budget {budget}")


class DocumentError(LayerSemError):
    """A configuration document is malformed."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
