"""Exception types raised across the package."""


class OpecError(Exception):
    """Base class for all package errors."""


class InvalidConfigurationError(OpecError, ValueError):
    """A scenario, link count or horizon is not usable."""


class InvalidArgumentError(OpecError, ValueError):
    """Arguments to a per-slot function are mutually incompatible."""


class InvalidDistributionError(OpecError, ValueError):
    """A discrete distribution violates its support/probability rules."""


class ConfigFileError(OpecError):
    """A config file could not be read, parsed or validated.

    ``path`` and ``line`` locate the problem when known.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = str(path)
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
