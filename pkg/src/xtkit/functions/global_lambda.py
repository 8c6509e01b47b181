import numpy as np

from xtkit.common.exceptions import CapabilityError
from xtkit.functions.interfaces import GlobalFunction, as_points


class GlobalLambdaFunction(GlobalFunction):
    """Function evaluated by calling ``fn(x)`` for each global point ``x``.

    The caller declares the local polynomial ``order``; ``gradient``, if
    given, is called like ``fn`` and returns the jacobian.
    """

    def __init__(self, fn, order, gradient=None, dim_domain=None, range_shape=(), name='lambda'):
        if order < 0:
            raise ValueError('order has to be nonnegative')
        self.fn = fn
        self.gradient = gradient
        self._order = int(order)
        self.dim_domain = dim_domain
        self.range_shape = tuple(range_shape)
        self.name = name

    @property
    def order(self):
        return self._order

    def evaluate(self, x):
        points, single = as_points(x)
        values = np.array([np.broadcast_to(np.asarray(self.fn(p), dtype=float), self.range_shape) for p in points])
        return values[0] if single else values

    def jacobian(self, x):
        if self.gradient is None:
            raise CapabilityError(f"no gradient given for '{self.name}'")
        points, single = as_points(x)
        shape = self.range_shape + (points.shape[1],)
        values = np.array([np.asarray(self.gradient(p), dtype=float).reshape(shape) for p in points])
        return values[0] if single else values
