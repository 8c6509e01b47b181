"""Discontinuous piecewise polynomial spaces, L2 projection and L2 norms."""

import itertools
import math

import numpy as np

from xtkit.common.exceptions import ProjectionError, UsageError
from xtkit.functions.interfaces import LocalFunctionInterface, LocalFunctionSetInterface, LocalizableFunctionInterface
from xtkit.functions.quadrature import quadrature_rule
from xtkit.grid.walker import Codim0Functor, Walker
from xtkit.la.container import DenseMatrix, DenseVector
from xtkit.la.solver import Solver, SolverFailure

MAX_ORDER = 3


class MonomialLocalBasis(LocalFunctionSetInterface):
    """The monomials ``prod_i x_hat_i**p_i`` with ``0 <= p_i <= order`` on one cell."""

    def __init__(self, cell, geometry, order, exponents):
        super().__init__(cell, geometry)
        self._order = order
        self.exponents = exponents

    @property
    def size(self):
        return len(self.exponents)

    @property
    def order(self):
        return self._order

    def values(self, x_hat):
        """Array of shape ``(size, n)`` for a stack ``(n, d)`` of reference points."""
        x_hat = np.atleast_2d(np.asarray(x_hat, dtype=float))
        return np.prod(x_hat[np.newaxis, :, :] ** self.exponents[:, np.newaxis, :], axis=2)

    def gradients(self, x_hat):
        """Localized gradients, array of shape ``(size, n, d)``."""
        x_hat = np.atleast_2d(np.asarray(x_hat, dtype=float))
        p = self.exponents[:, np.newaxis, :]
        powers = x_hat[np.newaxis, :, :] ** p
        d = x_hat.shape[1]
        grads = np.empty((self.size, len(x_hat), d))
        for i in range(d):
            deriv = p[..., i] * x_hat[np.newaxis, :, i] ** np.maximum(p[..., i] - 1, 0)
            others = np.prod(np.delete(powers, i, axis=2), axis=2)
            grads[..., i] = deriv * others / self.geometry.widths[i]
        return grads

    def evaluate_set(self, x_hat):
        single = np.ndim(x_hat) == 1
        values = self.values(x_hat)
        return [v[0] if single else v for v in values]

    def jacobian_set(self, x_hat):
        single = np.ndim(x_hat) == 1
        grads = self.gradients(x_hat)
        return [g[0] if single else g for g in grads]


class DgSpace:
    """Discontinuous tensor-polynomial space of per-direction degree ``order``.

    DoFs are numbered cell-index-major: the ``i``-th basis function of the
    cell with index ``c`` has global index ``c * basis_size + i``.
    """

    def __init__(self, view, order):
        if not 0 <= order <= MAX_ORDER:
            raise UsageError(f'order has to be in [0, {MAX_ORDER}], got {order}')
        self.view = view
        self.order = order
        self.exponents = np.array([rev[::-1] for rev in itertools.product(range(order + 1), repeat=view.dim)],
                                  dtype=int).reshape(-1, view.dim)

    @property
    def basis_size(self):
        return len(self.exponents)

    @property
    def num_dofs(self):
        return self.view.size(0) * self.basis_size

    def local_basis(self, cell):
        return MonomialLocalBasis(cell, self.view.geometry(cell), self.order, self.exponents)

    def global_indices(self, cell):
        start = self.view.index(cell) * self.basis_size
        return range(start, start + self.basis_size)

    def __repr__(self):
        return f'DgSpace({self.view}, order={self.order})'


class DiscreteFunction(LocalizableFunctionInterface):
    """``sum_i dofs[i] * phi_i`` for the basis functions ``phi_i`` of ``space``."""

    def __init__(self, space, dofs, name='discrete function'):
        if not isinstance(dofs, DenseVector):
            dofs = DenseVector(dofs)
        if len(dofs) != space.num_dofs:
            raise ValueError(f'{len(dofs)} DoFs given, the space has {space.num_dofs}')
        self.space = space
        self.dofs = dofs
        self.dim_domain = space.view.dim
        self.name = name

    @property
    def order(self):
        return self.space.order

    def local_function(self, view, cell):
        if view.spec != self.space.view.spec or view.level != self.space.view.level:
            raise UsageError('discrete functions can only be localized on the grid view of their space')
        return _DiscreteLocalFunction(self, cell)


class _DiscreteLocalFunction(LocalFunctionInterface):

    def __init__(self, function, cell):
        space = function.space
        self.basis = space.local_basis(cell)
        super().__init__(cell, self.basis.geometry)
        indices = space.global_indices(cell)
        self.local_dofs = function.dofs._data[indices.start:indices.stop].copy()

    @property
    def order(self):
        return self.basis.order

    def evaluate(self, x_hat):
        values = self.local_dofs @ self.basis.values(x_hat)
        return values[0] if np.ndim(x_hat) == 1 else values

    def jacobian(self, x_hat):
        jac = np.tensordot(self.local_dofs, self.basis.gradients(x_hat), axes=1)
        return jac[0] if np.ndim(x_hat) == 1 else jac


def discrete_fn(space, dofs, name='discrete function'):
    return DiscreteFunction(space, dofs, name)


class _LocalL2Assembler(Codim0Functor):

    def __init__(self, function, space):
        self.function = function
        self.space = space
        self.systems = None
        k = space.order
        self.matrix_quadrature = quadrature_rule(space.view.dim, 2 * k)
        self.vector_quadrature = quadrature_rule(space.view.dim, 2 * k + function.order)

    def prepare(self):
        self.systems = [None] * self.space.view.size(0)

    def apply_local(self, entity):
        basis = self.space.local_basis(entity)
        local_function = self.function.local_function(self.space.view, entity)
        integration_element = basis.geometry.integration_element
        size = basis.size
        local_matrix = DenseMatrix(size, size)
        local_vector = DenseVector(size)
        quad = self.matrix_quadrature
        basis_values = basis.values(quad.points)
        local_matrix.backend()[...] += (basis_values * (integration_element * quad.weights)) @ basis_values.T
        quad = self.vector_quadrature
        basis_values = basis.values(quad.points)
        source_values = local_function.evaluate(quad.points)
        local_vector.backend()[...] += basis_values @ (integration_element * quad.weights * source_values)
        self.systems[self.space.view.index(entity)] = (local_matrix, local_vector)


def _check_scalar(f, space):
    if not f.is_scalar:
        raise UsageError(f"'{f.name}' is not scalar valued")
    if f.dim_domain is not None and f.dim_domain != space.view.dim:
        raise UsageError(f"'{f.name}' has domain dimension {f.dim_domain}, the space {space.view.dim}")


def assemble_local_systems(f, space, parallel=False, num_threads=None):
    """Local mass matrices and load vectors of all cells, in cell index order."""
    _check_scalar(f, space)
    assembler = _LocalL2Assembler(f, space)
    walker = Walker(space.view)
    walker.add(assembler)
    walker.walk(parallel, num_threads)
    return assembler.systems


def solve_local_systems(systems, space, solver_type=None, local_matrix_hook=None):
    """Solve all local systems and scatter the results into a global DoF vector.

    ``local_matrix_hook(cell_index, matrix)``, if given, may modify each
    local matrix before it is solved.
    """
    dofs = DenseVector(space.num_dofs)
    data = dofs.backend()
    size = space.basis_size
    for index, (local_matrix, local_vector) in enumerate(systems):
        if local_matrix_hook is not None:
            local_matrix_hook(index, local_matrix)
        local_dofs = DenseVector(size)
        try:
            solver = Solver(local_matrix)
            solver.apply(local_vector, local_dofs, solver_type or solver.types()[0])
        except SolverFailure as err:
            raise ProjectionError(f'L2 projection failed, the local matrix of cell {index} could not be '
                                  f'inverted.\nOriginal error: {err}') from err
        data[index * size:(index + 1) * size] = local_dofs._data
    return dofs


def l2_projection(f, space, solver_type=None, parallel=False, local_matrix_hook=None):
    """DoF vector of the L2 projection of the scalar function ``f`` onto ``space``.

    On each cell, the local mass matrix and load vector are integrated with
    quadratures of degree ``2k`` and ``2k + f.order`` and the local system
    is solved with the dense solver ``solver_type`` (default: the first
    available type).  Solver failures are reraised as
    :class:`~xtkit.common.exceptions.ProjectionError`.
    """
    systems = assemble_local_systems(f, space, parallel)
    return solve_local_systems(systems, space, solver_type, local_matrix_hook)


class _L2NormFunctor(Codim0Functor):

    def __init__(self, function, view, degree):
        self.function = function
        self.view = view
        self.quadrature = quadrature_rule(view.dim, degree)
        self.contributions = None
        self.result = None

    def prepare(self):
        self.contributions = np.zeros(self.view.size(0))

    def apply_local(self, entity):
        local_function = self.function.local_function(self.view, entity)
        quad = self.quadrature
        values = np.asarray(local_function.evaluate(quad.points)).reshape(len(quad), -1)
        self.contributions[self.view.index(entity)] = (local_function.geometry.integration_element
                                                       * np.sum(quad.weights * np.sum(values ** 2, axis=1)))

    def finalize(self):
        self.result = math.sqrt(math.fsum(self.contributions))


def l2_norm(f, view, degree=None, parallel=False, num_threads=None):
    """``sqrt(sum_t |t| sum_q w_q |f(Phi_t(x_q))|^2)``; ``degree`` defaults to ``2 * f.order``.

    The result does not depend on ``parallel``: cell contributions are
    summed in cell index order.
    """
    if degree is None:
        degree = 2 * f.order
    functor = _L2NormFunctor(f, view, degree)
    walker = Walker(view)
    walker.add(functor)
    walker.walk(parallel, num_threads)
    return functor.result
