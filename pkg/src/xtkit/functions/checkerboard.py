import numpy as np

from xtkit.functions.interfaces import GlobalFunction, as_points


class CheckerboardFunction(GlobalFunction):
    """Piecewise constant on an equidistant partition of the box ``[lower_left, upper_right]``.

    ``values`` lists one value per subdomain, subdomains ordered with
    direction 0 running fastest.  Subdomains are half-open
    ``[a_i, a_{i+1})`` except the last one in each direction.
    """

    def __init__(self, lower_left, upper_right, num_elements, values, name='checkerboard'):
        self.lower_left = np.array(lower_left, dtype=float)
        self.upper_right = np.array(upper_right, dtype=float)
        self.num_elements = np.array(num_elements, dtype=int)
        d = len(self.lower_left)
        if not (len(self.upper_right) == len(self.num_elements) == d and d > 0):
            raise ValueError('lower_left, upper_right and num_elements need the same positive length')
        if np.any(self.upper_right <= self.lower_left) or np.any(self.num_elements < 1):
            raise ValueError('invalid checkerboard box or partition')
        self.values = np.array(values, dtype=float).reshape(-1)
        if len(self.values) != int(np.prod(self.num_elements)):
            raise ValueError(f'expected {int(np.prod(self.num_elements))} values, got {len(self.values)}')
        self.dim_domain = d
        self.name = name
        self._widths = (self.upper_right - self.lower_left) / self.num_elements
        self._strides = np.concatenate([[1], np.cumprod(self.num_elements)[:-1]]).astype(int)

    @property
    def order(self):
        return 0

    def subdomain(self, x):
        """Flat subdomain index of each point (``(n, d)`` stack)."""
        points = np.asarray(x, dtype=float)
        if np.any(points < self.lower_left) or np.any(points > self.upper_right):
            raise ValueError('point outside of the checkerboard domain')
        idx = np.floor((points - self.lower_left) / self._widths).astype(int)
        idx = np.minimum(idx, self.num_elements - 1)
        return idx @ self._strides

    def evaluate(self, x):
        points, single = as_points(x)
        if points.shape[1] != self.dim_domain:
            raise ValueError(f'expected points of dimension {self.dim_domain}')
        values = self.values[self.subdomain(points)]
        return np.asarray(values[0]) if single else values

    def jacobian(self, x):
        points, single = as_points(x)
        return np.zeros(points.shape[1]) if single else np.zeros(points.shape)
