"""Approximate floating point comparison.

Four styles are supported::

    absolute:         |a - b| <= eps_abs
    relative_weak:    |a - b| <= eps_rel * max(|a|, |b|)
    relative_strong:  |a - b| <= eps_rel * min(|a|, |b|)
    numpy:            |a - b| <= eps_abs + eps_rel * |b|

``numpy`` is the default and mirrors :func:`numpy.isclose`, including its
asymmetry in ``a`` and ``b``.  The ordered relations are derived from ``eq``:
``gt(a, b)`` holds iff ``a > b`` and not ``eq(a, b)``, ``ge`` iff ``a > b``
or ``eq(a, b)``.  Any NaN argument makes ``eq`` and all ordered relations
false.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

STYLES = ('absolute', 'relative_weak', 'relative_strong', 'numpy')

_MACHINE_EPS = float(np.finfo(float).eps)
DEFAULT_EPS = {
    'absolute': (8 * _MACHINE_EPS, 0.),
    'relative_weak': (0., 8 * _MACHINE_EPS),
    'relative_strong': (0., 8 * _MACHINE_EPS),
    'numpy': (1e-8, 1e-5),
}


@dataclass(frozen=True)
class CompareStyle:
    style: str = 'numpy'
    eps_abs: float = None
    eps_rel: float = None

    def __post_init__(self):
        if self.style not in STYLES:
            raise ValueError(f'unknown compare style {self.style!r}, choose from {STYLES}')
        default_abs, default_rel = DEFAULT_EPS[self.style]
        if self.eps_abs is None:
            object.__setattr__(self, 'eps_abs', default_abs)
        if self.eps_rel is None:
            object.__setattr__(self, 'eps_rel', default_rel)
        if not (self.eps_abs >= 0 and self.eps_rel >= 0):
            raise ValueError('tolerances have to be nonnegative')

    def eq(self, a, b):
        a = float(a)
        b = float(b)
        if a == b:
            return True
        diff = abs(a - b)
        if self.style == 'numpy':
            return diff <= self.eps_abs + self.eps_rel * abs(b)
        if self.style == 'absolute':
            return diff <= self.eps_abs
        if self.style == 'relative_weak':
            return diff <= self.eps_rel * max(abs(a), abs(b))
        return diff <= self.eps_rel * min(abs(a), abs(b))


DEFAULT_STYLE = CompareStyle()


@dataclass(frozen=True)
class Relation:
    """All six relations between two reals under one compare style."""

    eq: bool
    ne: bool
    gt: bool
    lt: bool
    ge: bool
    le: bool


def float_compare(a, b, style=None):
    style = style or DEFAULT_STYLE
    if math.isnan(a) or math.isnan(b):
        return Relation(eq=False, ne=True, gt=False, lt=False, ge=False, le=False)
    equal = style.eq(a, b)
    return Relation(eq=equal, ne=not equal,
                    gt=a > b and not equal, lt=a < b and not equal,
                    ge=a > b or equal, le=a < b or equal)


def _is_vector(x):
    return isinstance(x, (Sequence, np.ndarray)) and not isinstance(x, str)


def vector_float_compare(a, b, style=None):
    """``True`` iff ``a`` and ``b`` have equal length and are componentwise ``eq``."""
    a = np.ravel(np.asarray(a, dtype=float))
    b = np.ravel(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        return False
    return all(float_compare(x, y, style).eq for x, y in zip(a.tolist(), b.tolist()))


def _vectorize(relation):
    def compare(a, b, style=None):
        if _is_vector(a) or _is_vector(b):
            if not (_is_vector(a) and _is_vector(b)):
                raise TypeError('cannot compare a vector with a scalar')
            a_, b_ = np.ravel(np.asarray(a, dtype=float)), np.ravel(np.asarray(b, dtype=float))
            if a_.shape != b_.shape:
                return False
            return all(getattr(float_compare(x, y, style), relation) for x, y in zip(a_.tolist(), b_.tolist()))
        return getattr(float_compare(a, b, style), relation)
    compare.__name__ = relation
    compare.__doc__ = f'``{relation}`` relation for scalars, or componentwise for vectors.'
    return compare


eq = _vectorize('eq')
gt = _vectorize('gt')
lt = _vectorize('lt')
ge = _vectorize('ge')
le = _vectorize('le')


def ne(a, b, style=None):
    return not eq(a, b, style)
