"""String conversion for scalars, vectors and matrices.

Vectors are written as ``[1 2 3]`` and matrices as ``[1 2; 3 4]``; a bare
literal denotes a scalar (or a container with a single entry).  All parse
functions take optional size requests where ``0`` means "detect
automatically".  A positive request smaller than the parsed size truncates,
a larger one raises :class:`SizeError`.
"""

import re

import numpy as np

from xtkit.common.exceptions import ParseError, SizeError

_REAL = re.compile(r'[+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|inf|infinity|nan)$', re.IGNORECASE)
_INT = re.compile(r'[+-]?\d+$')
_TOKEN = re.compile(r'[^\s;]+')


def parse_scalar(text, element=float, _offset=0):
    """Parse a single real (``element=float``) or integer (``element=int``) literal.

    Integer parsing accepts real literals with an integral value (``"8."``)
    and rejects fractional ones (``"1.5"``).
    """
    tok = text.strip()
    pos = _offset + (len(text) - len(text.lstrip()))
    if element is int:
        if _INT.match(tok):
            return int(tok)
        if _REAL.match(tok):
            value = float(tok)
            if np.isfinite(value) and value.is_integer():
                return int(value)
            raise ParseError(f"'{tok}' is not an integer", pos)
        raise ParseError(f"malformed integer literal '{tok}'", pos)
    if element is float:
        if not _REAL.match(tok):
            raise ParseError(f"malformed real literal '{tok}'", pos)
        return float(tok)
    raise TypeError(f'unsupported element type {element!r}')


def _split_brackets(text):
    stripped = text.strip()
    start = text.index(stripped[0]) if stripped else 0
    if not stripped.startswith('['):
        return None, start
    if not stripped.endswith(']'):
        raise ParseError("missing closing ']'", start + len(stripped))
    inner = stripped[1:-1]
    for bracket in '[]':
        pos = inner.find(bracket)
        if pos >= 0:
            raise ParseError(f"unexpected '{bracket}'", start + 1 + pos)
    return inner, start + 1


def _parse_rows(text, element):
    if not text.strip():
        raise ParseError('empty value', 0)
    inner, offset = _split_brackets(text)
    if inner is None:
        return [[parse_scalar(text, element)]]
    segments = inner.split(';')
    if len(segments) > 1 and not segments[-1].strip():
        segments = segments[:-1]
    rows = []
    pos = offset
    for seg in segments:
        rows.append([parse_scalar(m.group(), element, pos + m.start()) for m in _TOKEN.finditer(seg)])
        pos += len(seg) + 1
    if len(rows) == 1 and not rows[0]:
        return []
    for row, seg in zip(rows, segments):
        if len(row) != len(rows[0]):
            raise ParseError(f'ragged matrix: row of length {len(row)} after row of length {len(rows[0])}',
                             offset + inner.find(seg))
    return rows


def _truncate(values, size, what):
    if size < 0:
        raise ValueError(f'negative {what} request: {size}')
    if size == 0:
        return values
    if len(values) < size:
        raise SizeError(f'requested {size} {what} but only {len(values)} given')
    return values[:size]


def parse_vector(text, size=0, element=float):
    """Parse ``text`` into a list of length ``size`` (``0``: all entries).

    >>> parse_vector('[0 0 0 0]', 2)
    [0.0, 0.0]
    """
    rows = _parse_rows(text, element)
    if len(rows) > 1:
        raise ParseError(f'expected a vector but got a matrix with {len(rows)} rows', 0)
    values = rows[0] if rows else []
    return _truncate(values, size, 'entries')


def parse_matrix(text, rows=0, cols=0, element=float):
    """Parse ``text`` into a list of ``rows`` lists of length ``cols``."""
    parsed = _parse_rows(text, element)
    parsed = _truncate(parsed, rows, 'rows')
    return [_truncate(row, cols, 'columns') for row in parsed]


def parse_value(text, element=float):
    """Parse with automatic shape detection: scalar, list or list of lists."""
    stripped = text.strip()
    if not stripped.startswith('['):
        return parse_scalar(text, element)
    if ';' in stripped:
        return parse_matrix(text, element=element)
    return parse_vector(text, element=element)


def _format_scalar(value):
    if isinstance(value, (bool, np.bool_)):
        return '1' if value else '0'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    r = repr(float(value))
    return r[:-2] if r.endswith('.0') else r


def format_value(value):
    """Inverse of the parse functions; floats use the shortest round-trip form.

    >>> format_value([[1., 2.], [3., 4.]])
    '[1 2; 3 4]'
    """
    if isinstance(value, str):
        return value
    if isinstance(value, np.ndarray):
        if value.ndim == 0:
            return _format_scalar(value.item())
        value = value.tolist()
    if isinstance(value, (list, tuple)):
        if value and all(isinstance(v, (list, tuple, np.ndarray)) for v in value):
            return '[' + '; '.join(' '.join(_format_scalar(x) for x in row) for row in value) + ']'
        return '[' + ' '.join(_format_scalar(x) for x in value) + ']'
    return _format_scalar(value)
