"""Exception hierarchy shared by all xtkit modules."""


class XtError(Exception):
    """Base class of all errors raised by xtkit."""


class ParseError(XtError, ValueError):
    """A literal could not be parsed.

    ``position`` is the character offset into the parsed text (or ``None``),
    ``key`` the configuration key the text was read from, if any.
    """

    def __init__(self, message, position=None, key=None):
        self.message = message
        self.position = position
        self.key = key
        super().__init__(self._render())

    def _render(self):
        msg = self.message
        if self.position is not None:
            msg = f'{msg} (at position {self.position})'
        if self.key is not None:
            msg = f"key '{self.key}': {msg}"
        return msg

    def with_key(self, key):
        err = type(self).__new__(type(self))
        err.message, err.position, err.key = self.message, self.position, key
        Exception.__init__(err, err._render())
        return err


class SizeError(ParseError):
    """A parsed container holds fewer entries than requested."""


class ConfigError(XtError):
    """Invalid or inconsistent configuration."""


class MissingKeyError(ConfigError, KeyError):

    def __init__(self, key, context=''):
        self.key = key
        msg = f"missing key '{key}'"
        if context:
            msg += f' in {context}'
        super().__init__(msg)

    def __str__(self):
        return self.args[0]


class FactoryError(ConfigError):
    """Unknown type id passed to one of the factories."""

    def __init__(self, type_id, available, what='type'):
        self.type_id = type_id
        self.available = tuple(available)
        super().__init__(f"unknown {what} '{type_id}', available are: " + ', '.join(self.available))


class UsageError(XtError):
    """An API was called in a state or with arguments it does not support."""


class PatternError(XtError, ValueError):
    """Mutation of a sparse matrix entry that is not contained in its pattern."""


class ProjectionError(XtError):
    """A projection could not be computed."""


class CapabilityError(XtError, NotImplementedError):
    """The object does not provide the requested operation (e.g. a jacobian)."""
