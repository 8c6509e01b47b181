import numpy as np

from xtkit.functions.interfaces import GlobalFunction, as_points


class ConstantFunction(GlobalFunction):
    """Scalar, vector or matrix valued constant, defined in any dimension unless ``dim_domain`` is given."""

    def __init__(self, value, dim_domain=None, name='constant'):
        value = np.array(value, dtype=float)
        if value.ndim > 2:
            raise ValueError('constant values have to be scalars, vectors or matrices')
        value.flags.writeable = False
        self.value = value
        self.range_shape = value.shape
        self.dim_domain = dim_domain
        self.name = name

    @property
    def order(self):
        return 0

    def evaluate(self, x):
        points, single = as_points(x)
        if single:
            return self.value.copy()
        return np.broadcast_to(self.value, (len(points),) + self.range_shape).copy()

    def jacobian(self, x):
        points, single = as_points(x)
        shape = self.range_shape + (points.shape[1],)
        return np.zeros(shape) if single else np.zeros((len(points),) + shape)

    def __repr__(self):
        return f'ConstantFunction({self.value.tolist()})'
