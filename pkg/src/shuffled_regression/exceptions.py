"""Exception hierarchy shared by the solver modules and the CLI."""


class InvalidInputError(ValueError):
    """Raised for malformed, non-finite or dimensionally inconsistent input."""


class RankError(InvalidInputError):
    """Raised when a design matrix has numerical rank zero."""


class ProblemSizeError(InvalidInputError):
    """Raised when an exhaustive method is asked to handle too large an instance."""


class DegenerateSplitError(ValueError):
    """Raised when a rectangle has no coordinate wide enough to split."""


class ConfigError(ValueError):
    """Raised for malformed benchmark configuration files."""
