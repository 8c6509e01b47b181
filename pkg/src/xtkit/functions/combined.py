"""Pointwise sums, differences and products of localizable functions."""

import numpy as np

from xtkit.common.exceptions import UsageError
from xtkit.functions.interfaces import LocalFunctionInterface, LocalizableFunctionInterface


class _CombinedFunction(LocalizableFunctionInterface):

    symbol = '?'

    def __init__(self, left, right):
        if not (isinstance(left, LocalizableFunctionInterface) and isinstance(right, LocalizableFunctionInterface)):
            raise TypeError('only localizable functions can be combined')
        dims = {left.dim_domain, right.dim_domain} - {None}
        if len(dims) > 1:
            raise UsageError(f'domain dimensions {left.dim_domain} and {right.dim_domain} do not match')
        self.left = left
        self.right = right
        self.dim_domain = dims.pop() if dims else None
        self.range_shape = self._range_shape()
        self.name = f'({left.name} {self.symbol} {right.name})'

    def _range_shape(self):
        if self.left.range_shape != self.right.range_shape:
            raise UsageError(f'range shapes {self.left.range_shape} and {self.right.range_shape} do not match')
        return self.left.range_shape

    @property
    def order(self):
        return max(self.left.order, self.right.order)

    def local_function(self, view, cell):
        self._check_view(view)
        return _CombinedLocalFunction(self, self.left.local_function(view, cell),
                                      self.right.local_function(view, cell))


class _CombinedLocalFunction(LocalFunctionInterface):

    def __init__(self, function, left, right):
        super().__init__(left.cell, left.geometry)
        self.function = function
        self.left = left
        self.right = right

    @property
    def order(self):
        return self.function.order

    def evaluate(self, x_hat):
        return self.function._combine(self.left.evaluate(x_hat), self.right.evaluate(x_hat))

    def jacobian(self, x_hat):
        return self.function._combine_jacobian(self.left, self.right, x_hat)


class SumFunction(_CombinedFunction):
    symbol = '+'

    @staticmethod
    def _combine(a, b):
        return a + b

    @staticmethod
    def _combine_jacobian(left, right, x_hat):
        return left.jacobian(x_hat) + right.jacobian(x_hat)


class DifferenceFunction(_CombinedFunction):
    symbol = '-'

    @staticmethod
    def _combine(a, b):
        return a - b

    @staticmethod
    def _combine_jacobian(left, right, x_hat):
        return left.jacobian(x_hat) - right.jacobian(x_hat)


class ProductFunction(_CombinedFunction):
    """``f * g`` for scalar ``f`` and arbitrary ``g``."""

    symbol = '*'

    def _range_shape(self):
        if self.left.range_shape != ():
            raise UsageError('the left factor of a product has to be scalar')
        return self.right.range_shape

    @property
    def order(self):
        return self.left.order + self.right.order

    def _combine(self, a, b):
        a = np.asarray(a)
        return a.reshape(a.shape + (1,) * len(self.range_shape)) * b

    def _combine_jacobian(self, left, right, x_hat):
        f, df = np.asarray(left.evaluate(x_hat)), left.jacobian(x_hat)
        g, dg = np.asarray(right.evaluate(x_hat)), right.jacobian(x_hat)
        k = len(self.range_shape)
        # d(fg) = f dg + g (x) df
        f_ = f.reshape(f.shape + (1,) * (k + 1))
        df_ = df.reshape(df.shape[:-1] + (1,) * k + df.shape[-1:])
        return f_ * dg + g[..., np.newaxis] * df_


def combine(op, f, g):
    """Combine ``f`` and ``g`` with ``op`` in ``{'sum', 'difference', 'product'}``."""
    classes = {'sum': SumFunction, 'difference': DifferenceFunction, 'product': ProductFunction}
    if op not in classes:
        raise ValueError(f'unknown operation {op!r}, choose from {sorted(classes)}')
    return classes[op](f, g)
