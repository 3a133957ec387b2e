"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
NumericFault -> 4. Everything else is a programming error and escapes.
"""


class VoxalignError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(VoxalignError):
    """Invalid configuration: bad ranks, shapes, ranges, templates, specs."""


class DataError(VoxalignError):
    """Invalid data: bad file contents, metadata, labels, or inputs."""


class ContractViolation(VoxalignError):
    """An input violated a documented precondition of an operation."""


class NumericFault(VoxalignError):
    """Non-finite value encountered where the computation requires finiteness."""


class MissingGradientError(VoxalignError):
    """A trainable parameter received no gradient during backprop."""
