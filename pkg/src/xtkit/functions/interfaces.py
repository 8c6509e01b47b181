"""Local functions, local function sets and localizable functions.

For a cell ``t`` with reference map ``Phi_t`` the local function of ``f``
is ``f_t = f|_t o Phi_t``, evaluated at points ``x_hat`` of the reference
cube.  Jacobians of local functions are *localized* gradients, i.e. global
derivatives ``(grad f) o Phi_t``; the derivative with respect to the
reference coordinates is recovered by multiplying with
``geometry.jacobian()``.

Evaluation accepts single points of shape ``(d,)`` or stacks of shape
``(n, d)``.  Values have shape ``range_shape`` (``()`` for scalars) and
jacobians ``range_shape + (d,)``, both with a leading ``n`` axis for stacks.
"""

import numpy as np

from xtkit.common.exceptions import UsageError


class LocalFunctionSetInterface:
    """A set of ``size`` functions on the reference cell of ``cell``."""

    def __init__(self, cell, geometry):
        self.cell = cell
        self.geometry = geometry

    @property
    def size(self):
        raise NotImplementedError

    @property
    def order(self):
        raise NotImplementedError

    def evaluate_set(self, x_hat):
        """List of ``size`` values at ``x_hat``."""
        raise NotImplementedError

    def jacobian_set(self, x_hat):
        """List of ``size`` localized gradients at ``x_hat``."""
        raise NotImplementedError


class LocalFunctionInterface(LocalFunctionSetInterface):

    @property
    def size(self):
        return 1

    def evaluate(self, x_hat):
        raise NotImplementedError

    def jacobian(self, x_hat):
        raise NotImplementedError

    def evaluate_set(self, x_hat):
        return [self.evaluate(x_hat)]

    def jacobian_set(self, x_hat):
        return [self.jacobian(x_hat)]


class LocalizableFunctionInterface:
    """Function that provides a local function on every cell of a grid view.

    Attributes
    ----------
    dim_domain
        Domain dimension, or ``None`` if the function is defined for any.
    range_shape
        ``()`` for scalar, ``(r,)`` for vector and ``(r, c)`` for matrix valued functions.
    order
        (Surrogate) polynomial order of the local functions.
    """

    dim_domain = None
    range_shape = ()
    name = 'function'

    @property
    def order(self):
        raise NotImplementedError

    @property
    def is_scalar(self):
        return self.range_shape == ()

    def local_function(self, view, cell):
        raise NotImplementedError

    def _check_view(self, view):
        if self.dim_domain is not None and self.dim_domain != view.dim:
            raise UsageError(f"'{self.name}' has domain dimension {self.dim_domain}, the grid view {view.dim}")

    def __add__(self, other):
        from xtkit.functions.combined import SumFunction
        return SumFunction(self, other)

    def __sub__(self, other):
        from xtkit.functions.combined import DifferenceFunction
        return DifferenceFunction(self, other)

    def __mul__(self, other):
        from xtkit.functions.combined import ProductFunction
        return ProductFunction(self, other)

    def visualize(self, view, name=None, path=None):
        """Write the cell-center values to a legacy VTK file (default ``<name>.vtk``)."""
        from xtkit.functions.vtk import visualize
        name = name or self.name
        return visualize(self, view, name, path or f'{name}.vtk')


class GlobalFunction(LocalizableFunctionInterface):
    """Function given in global coordinates by :meth:`evaluate` and :meth:`jacobian`."""

    def evaluate(self, x):
        raise NotImplementedError

    def jacobian(self, x):
        raise NotImplementedError

    def local_function(self, view, cell):
        self._check_view(view)
        return GlobalLocalFunction(self, cell, view.geometry(cell))


class GlobalLocalFunction(LocalFunctionInterface):

    def __init__(self, function, cell, geometry):
        super().__init__(cell, geometry)
        self.function = function

    @property
    def order(self):
        return self.function.order

    def evaluate(self, x_hat):
        return self.function.evaluate(self.geometry.global_(x_hat))

    def jacobian(self, x_hat):
        return self.function.jacobian(self.geometry.global_(x_hat))


def as_points(x):
    """``(points, single)``: ``x`` as an ``(n, d)`` array and whether a single point was given."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return x[np.newaxis, :], True
    if x.ndim != 2:
        raise ValueError(f'expected a point or a stack of points, got an array of shape {x.shape}')
    return x, False
