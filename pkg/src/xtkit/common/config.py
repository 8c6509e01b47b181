"""Hierarchical configuration trees with typed extraction."""

from dataclasses import dataclass

from xtkit.common.exceptions import ConfigError, MissingKeyError, ParseError
from xtkit.common.strings import format_value, parse_matrix, parse_scalar, parse_vector

_FORBIDDEN = set('=[]#') | set(' \t\r\n')
_MISSING = object()


@dataclass(frozen=True)
class ValueKind:
    """What to extract from a string leaf.

    ``shape`` is ``'scalar'``, ``'vector'`` or ``'matrix'``; sizes of ``0``
    request automatic detection.
    """

    shape: str = 'scalar'
    element: type = float
    size: int = 0
    cols: int = 0

    def __post_init__(self):
        if self.shape not in ('scalar', 'vector', 'matrix'):
            raise ValueError(f'unknown value shape {self.shape!r}')
        if self.size < 0 or self.cols < 0:
            raise ValueError('requested sizes must be nonnegative')

    @classmethod
    def scalar(cls, element=float):
        return cls('scalar', element)

    @classmethod
    def vector(cls, size=0, element=float):
        return cls('vector', element, size)

    @classmethod
    def matrix(cls, rows=0, cols=0, element=float):
        return cls('matrix', element, rows, cols)

    def parse(self, text):
        if self.shape == 'scalar':
            return parse_scalar(text, self.element)
        if self.shape == 'vector':
            return parse_vector(text, self.size, self.element)
        return parse_matrix(text, self.size, self.cols, self.element)


def _check_key(key):
    if not isinstance(key, str) or not key:
        raise ConfigError(f'invalid key {key!r}')
    bad = _FORBIDDEN.intersection(key)
    if bad:
        raise ConfigError(f"invalid character {sorted(bad)[0]!r} in key '{key}'")
    if any(not seg for seg in key.split('.')):
        raise ConfigError(f"empty segment in key '{key}'")
    return key


class ConfigTree:
    """Ordered map from dotted key paths to string values.

    A path is either a leaf or an interior group, never both.  Values set
    via ``cfg[key] = value`` are converted with :func:`format_value`, so
    numbers, lists and nested lists may be assigned directly.

    >>> cfg = ConfigTree({'type': 'xt.grid.gridprovider.cube', 'num_refinements': 0})
    >>> cfg.get('num_refinements', int)
    0
    """

    def __init__(self, entries=None, **kwargs):
        self._entries = {}
        for key, value in dict(entries or {}, **kwargs).items():
            self[key] = value

    # mapping protocol
    def __getitem__(self, key):
        try:
            return self._entries[key]
        except KeyError:
            raise MissingKeyError(key) from None

    def __setitem__(self, key, value):
        _check_key(key)
        if key not in self._entries:
            prefix = key + '.'
            for existing in self._entries:
                if existing.startswith(prefix) or key.startswith(existing + '.'):
                    raise ConfigError(f"key '{key}' conflicts with existing key '{existing}'")
        value = format_value(value)
        if '\n' in value or '\r' in value:
            raise ConfigError(f"value of key '{key}' contains a line break")
        self._entries[key] = value

    def __delitem__(self, key):
        del self._entries[key]

    def __contains__(self, key):
        return key in self._entries

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        if not isinstance(other, ConfigTree):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self):
        return f'ConfigTree({self._entries!r})'

    def keys(self):
        return self._entries.keys()

    def items(self):
        return self._entries.items()

    def copy(self):
        return ConfigTree(self._entries)

    def has_key(self, key):
        return key in self._entries

    def has_sub(self, prefix):
        prefix = prefix + '.'
        return any(k.startswith(prefix) for k in self._entries)

    def sub(self, prefix):
        """Subtree below ``prefix`` with the prefix stripped from all keys."""
        head = prefix + '.'
        sub = ConfigTree()
        sub._entries = {k[len(head):]: v for k, v in self._entries.items() if k.startswith(head)}
        if not sub._entries:
            raise MissingKeyError(prefix, 'sub tree')
        return sub

    def add(self, other, prefix='', overwrite=True):
        """Merge ``other`` (optionally below ``prefix``) into this tree."""
        for key, value in other.items():
            full = f'{prefix}.{key}' if prefix else key
            if overwrite or full not in self._entries:
                self[full] = value
        return self

    def get(self, key, kind=str, default=_MISSING):
        """Typed extraction of ``key``.

        ``kind`` is a :class:`ValueKind`, or one of ``str``, ``int``,
        ``float``, ``bool`` for scalar leaves.  Absent keys return ``default``
        if one is given and raise :class:`MissingKeyError` otherwise.
        """
        if not key:
            raise ConfigError('empty key')
        if key not in self._entries:
            if default is _MISSING:
                raise MissingKeyError(key)
            return default
        text = self._entries[key]
        if kind is str:
            return text
        try:
            if kind is bool:
                return _parse_bool(text)
            if kind in (int, float):
                return parse_scalar(text, kind)
            return kind.parse(text)
        except ParseError as err:
            raise err.with_key(key) from None

    def report(self):
        """Canonical ini text; ``ConfigTree.from_ini(cfg.report()) == cfg``."""
        lines = [f'{k} = {v}' for k, v in self._entries.items() if '.' not in k]
        groups = {}
        for key, value in self._entries.items():
            if '.' in key:
                head, tail = key.split('.', 1)
                groups.setdefault(head, []).append((tail, value))
        for head, entries in groups.items():
            if lines:
                lines.append('')
            lines.append(f'[{head}]')
            lines.extend(f'{k} = {v}' for k, v in entries)
        return '\n'.join(lines) + ('\n' if lines else '')

    @classmethod
    def from_ini(cls, text):
        """Parse ini text: ``key = value`` lines, ``[group.path]`` headers, ``#`` comments."""
        cfg = cls()
        prefix = ''
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith('#'):
                continue
            try:
                if line.startswith('['):
                    if not line.endswith(']'):
                        raise ConfigError("unterminated section header")
                    prefix = line[1:-1].strip()
                    if prefix:
                        _check_key(prefix)
                    continue
                if '=' not in line:
                    raise ConfigError(f"expected 'key = value', got '{line}'")
                key, value = line.split('=', 1)
                key = key.strip()
                _check_key(key)
                cfg[f'{prefix}.{key}' if prefix else key] = value.strip()
            except ConfigError as err:
                raise ParseError(f'line {lineno}: {err}') from None
        return cfg

    @classmethod
    def from_file(cls, path):
        with open(path) as f:
            return cls.from_ini(f.read())


def _parse_bool(text):
    t = text.strip().lower()
    if t in ('1', 'true', 'yes', 'on'):
        return True
    if t in ('0', 'false', 'no', 'off'):
        return False
    raise ParseError(f"'{text}' is not a boolean", 0)


def config_from_ini(text):
    return ConfigTree.from_ini(text)


def config_report(cfg):
    return cfg.report()


def config_get(cfg, key, kind=str, default=_MISSING):
    return cfg.get(key, kind, default)
