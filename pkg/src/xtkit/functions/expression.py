import numpy as np

from xtkit.common.exceptions import CapabilityError, UsageError
from xtkit.functions.interfaces import GlobalFunction, as_points
from xtkit.functions.mathexpr import expr_parse, split_expression_list, variables


def _parse_list(entries, variable):
    if isinstance(entries, str):
        entries = split_expression_list(entries)
    return [expr_parse(e, variable) for e in entries]


class ExpressionFunction(GlobalFunction):
    """Scalar or vector valued function given by expressions in ``variable[i]``.

    ``expressions`` is a single expression string (scalar function), a
    bracketed list ``'[e0 e1]'`` or a Python list (vector valued).
    ``gradients`` optionally holds one row per range component, each a
    bracketed list or a Python list of expressions of the partial
    derivatives.  The ``order`` is the polynomial order used as surrogate
    for integration.
    """

    def __init__(self, variable, expressions, order, gradients=None, dim_domain=None, name='expression'):
        if order < 0:
            raise ValueError('order has to be nonnegative')
        self.variable = variable
        scalar = isinstance(expressions, str) and not expressions.strip().startswith('[')
        self._expressions = _parse_list(expressions, variable)
        self.range_shape = () if scalar else (len(self._expressions),)
        self._order = int(order)
        self.dim_domain = dim_domain
        self.name = name
        self._gradients = None
        if gradients is not None:
            if isinstance(gradients, str):
                gradients = [gradients]
            elif scalar and all(isinstance(g, str) and not g.strip().startswith('[') for g in gradients):
                gradients = [list(gradients)]
            rows = [_parse_list(row, variable) for row in gradients]
            if len(rows) != len(self._expressions):
                raise ValueError(f'{len(rows)} gradient rows given for {len(self._expressions)} expressions')
            self._gradients = rows
        used = set().union(*(variables(e) for e in self._expressions))
        self.min_dim = max(used) + 1 if used else 0
        if dim_domain is not None and self.min_dim > dim_domain:
            raise ValueError(f"expression uses {variable}[{self.min_dim - 1}] but the domain dimension is {dim_domain}")

    @property
    def order(self):
        return self._order

    def _check_view(self, view):
        super()._check_view(view)
        if self.min_dim > view.dim:
            raise UsageError(f"'{self.name}' uses {self.variable}[{self.min_dim - 1}], "
                             f"the grid view has dimension {view.dim}")

    @property
    def has_gradients(self):
        return self._gradients is not None

    def _columns(self, x):
        points, single = as_points(x)
        if points.shape[1] < self.min_dim:
            raise ValueError(f'points of dimension {points.shape[1]} given, at least {self.min_dim} required')
        return points, single, points.T

    @staticmethod
    def _eval(node, columns, n):
        with np.errstate(divide='raise', invalid='raise', over='raise'):
            return np.broadcast_to(node.evaluate(columns), (n,))

    def evaluate(self, x):
        points, single, cols = self._columns(x)
        n = len(points)
        values = np.stack([self._eval(e, cols, n) for e in self._expressions], axis=-1)
        if self.range_shape == ():
            values = values[:, 0]
        return values[0] if single else values

    def jacobian(self, x):
        if self._gradients is None:
            raise CapabilityError(f"no gradient expressions given for '{self.name}'")
        points, single, cols = self._columns(x)
        n, d = points.shape
        rows = []
        for row in self._gradients:
            if len(row) < d:
                raise ValueError(f'gradient row has {len(row)} entries, {d} required')
            rows.append(np.stack([self._eval(e, cols, n) for e in row[:d]], axis=-1))
        jac = np.stack(rows, axis=1)
        if self.range_shape == ():
            jac = jac[:, 0, :]
        return jac[0] if single else jac
