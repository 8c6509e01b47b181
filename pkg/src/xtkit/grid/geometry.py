"""Affine reference maps of axis-parallel cells."""

import numpy as np


class CellGeometry:
    """The map ``x = offset + diag(widths) @ x_hat`` from ``[0, 1]^d`` onto a cell.

    All point arguments may be single points of shape ``(d,)`` or stacks of
    shape ``(n, d)``.
    """

    def __init__(self, offset, widths):
        self.offset = np.asarray(offset, dtype=float)
        self.widths = np.asarray(widths, dtype=float)
        if self.offset.shape != self.widths.shape or self.offset.ndim != 1:
            raise ValueError('offset and widths must be vectors of equal length')
        if np.any(self.widths <= 0):
            raise ValueError('cell widths have to be positive')

    @property
    def dim(self):
        return len(self.offset)

    def global_(self, x_hat):
        return self.offset + self.widths * np.asarray(x_hat, dtype=float)

    def local(self, x):
        return (np.asarray(x, dtype=float) - self.offset) / self.widths

    def jacobian(self):
        return np.diag(self.widths)

    def jacobian_inverse(self):
        return np.diag(1. / self.widths)

    @property
    def integration_element(self):
        return float(np.prod(self.widths))

    volume = integration_element

    @property
    def center(self):
        return self.offset + 0.5 * self.widths

    def contains(self, x, tol=0.):
        x_hat = self.local(x)
        return bool(np.all(x_hat >= -tol) and np.all(x_hat <= 1 + tol))

    def __repr__(self):
        return f'CellGeometry(offset={self.offset.tolist()}, widths={self.widths.tolist()})'
