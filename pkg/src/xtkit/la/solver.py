"""Runtime selectable linear solvers with sanity checks.

Solver types follow a ``family.preconditioner`` naming scheme::

    dense matrices:  lu.partialpiv, qr.householder, ldlt
    CSR matrices:    bicgstab.diagonal, bicgstab.identity, cg.diagonal, cg.identity

The first type of each list is the default.  Every solve is configured by a
:class:`~xtkit.common.config.ConfigTree` of options (see
:func:`solver_options`) and checked before and after the actual solve; any
violated check raises :class:`SolverFailure`.
"""

import enum
from dataclasses import dataclass

import numpy as np

from xtkit.common.config import ConfigTree
from xtkit.common.exceptions import XtError
from xtkit.la.container import CsrMatrix, DenseMatrix, DenseVector, MatrixInterface

DENSE_TYPES = ('lu.partialpiv', 'qr.householder', 'ldlt')
SPARSE_TYPES = ('bicgstab.diagonal', 'bicgstab.identity', 'cg.diagonal', 'cg.identity')
_EPS = np.finfo(float).eps


class FailureKind(str, enum.Enum):
    pre_check_failed = 'pre_check_failed'
    did_not_converge = 'did_not_converge'
    inf_or_nan = 'inf_or_nan'
    post_check_failed = 'post_check_failed'
    unknown_type = 'unknown_type'
    shape_mismatch = 'shape_mismatch'

    def __str__(self):
        return self.value


class SolverFailure(XtError):
    """A linear solve failed; ``kind`` tells which check was violated."""

    def __init__(self, kind, message, residual=None, iterations=None):
        self.kind = FailureKind(kind)
        self.residual = residual
        self.iterations = iterations
        details = []
        if iterations is not None:
            details.append(f'iterations: {iterations}')
        if residual is not None:
            details.append(f'residual: {residual:.3e}')
        suffix = f" ({', '.join(details)})" if details else ''
        super().__init__(f'[{self.kind}] {message}{suffix}')


@dataclass
class SolverStatistics:
    type: str
    iterations: int
    residual: float
    """Relative residual ``|Ax - b|_2 / |b|_2`` as tracked by the solver."""
    post_check_residual: float = None
    """``|Ax - b|_inf / (1 + |b|_inf)``, recomputed after the solve."""


def solver_types(matrix):
    """Available solver types for ``matrix``, in descending priority."""
    if isinstance(matrix, CsrMatrix):
        return list(SPARSE_TYPES)
    if isinstance(matrix, DenseMatrix):
        return list(DENSE_TYPES)
    raise TypeError(f'no solvers available for {type(matrix).__name__}')


def solver_options(type):
    """Default options of the solver ``type``."""
    if type not in DENSE_TYPES + SPARSE_TYPES:
        raise SolverFailure(FailureKind.unknown_type,
                            f"unknown solver type '{type}', available are: {', '.join(DENSE_TYPES + SPARSE_TYPES)}")
    opts = ConfigTree()
    opts['type'] = type
    opts['post_check_solves_system'] = '1e-5'
    opts['check_for_inf_nan'] = '1'
    if type == 'ldlt':
        opts['pre_check_symmetry'] = '1e-8'
    if type in SPARSE_TYPES:
        opts['max_iter'] = '1000'
        opts['precision'] = '1e-14'
    return opts


# --- dense direct solvers ---

def _singular(what):
    return SolverFailure(FailureKind.did_not_converge, f'matrix is singular ({what})')


def _lu_partialpiv(A, b):
    n = len(b)
    A = A.copy()
    b = b.copy()
    tol = n * _EPS * (np.max(np.abs(A)) if A.size else 0.)
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) <= tol or A[p, k] == 0:
            raise _singular(f'pivot {A[p, k]:.3e} in column {k}')
        if p != k:
            A[[k, p]] = A[[p, k]]
            b[[k, p]] = b[[p, k]]
        A[k + 1:, k] /= A[k, k]
        A[k + 1:, k + 1:] -= np.outer(A[k + 1:, k], A[k, k + 1:])
    y = b
    for i in range(n):
        y[i] -= A[i, :i] @ y[:i]
    x = np.empty(n)
    for i in reversed(range(n)):
        x[i] = (y[i] - A[i, i + 1:] @ x[i + 1:]) / A[i, i]
    return x


def _qr_householder(A, b):
    n = len(b)
    R = A.copy()
    y = b.copy()
    for k in range(n):
        x = R[k:, k]
        norm_x = np.linalg.norm(x)
        if norm_x == 0:
            continue
        v = x.copy()
        v[0] += np.copysign(norm_x, x[0])
        v /= np.linalg.norm(v)
        R[k:, k:] -= 2. * np.outer(v, v @ R[k:, k:])
        y[k:] -= 2. * v * (v @ y[k:])
    diag = np.abs(np.diag(R))
    tol = n * _EPS * (np.max(np.abs(A)) if A.size else 0.)
    if n and (np.min(diag) <= tol or np.min(diag) == 0):
        raise _singular(f'|R_kk| = {np.min(diag):.3e}')
    x = np.empty(n)
    for i in reversed(range(n)):
        x[i] = (y[i] - R[i, i + 1:] @ x[i + 1:]) / R[i, i]
    return x


def _ldlt(A, b):
    """``A = L D L^T`` without pivoting, reading only the lower triangle of ``A``."""
    n = len(b)
    L = np.eye(n)
    d = np.zeros(n)
    tol = n * _EPS * (np.max(np.abs(A)) if A.size else 0.)
    for j in range(n):
        d[j] = A[j, j] - (L[j, :j] ** 2) @ d[:j]
        if abs(d[j]) <= tol or d[j] == 0:
            raise _singular(f'D_{j}{j} = {d[j]:.3e}')
        L[j + 1:, j] = (A[j + 1:, j] - L[j + 1:, :j] @ (L[j, :j] * d[:j])) / d[j]
    z = b.copy()
    for i in range(n):
        z[i] -= L[i, :i] @ z[:i]
    z /= d
    x = np.empty(n)
    for i in reversed(range(n)):
        x[i] = z[i] - L[i + 1:, i] @ x[i + 1:]
    return x


# --- iterative solvers ---

def _operator(matrix):
    if isinstance(matrix, CsrMatrix):
        s = matrix._structure
        values, rows = matrix._data, matrix.rows
        return lambda x: np.bincount(s.row_ids, weights=values * x[s.indices], minlength=rows)
    A = matrix._data
    return lambda x: A @ x


def _preconditioner(matrix, kind):
    if kind == 'identity':
        return lambda r: r
    diag = matrix.diagonal() if isinstance(matrix, CsrMatrix) else np.diag(matrix._data).copy()
    if np.any(diag == 0):
        raise SolverFailure(FailureKind.pre_check_failed,
                            f'diagonal preconditioner requires a nonzero diagonal, entry {int(np.argmin(np.abs(diag)))} is zero')
    inv = 1. / diag
    return lambda r: inv * r


def _cg(apply_A, apply_M, b, max_iter, precision):
    x = np.zeros_like(b)
    b_norm = np.linalg.norm(b)
    if b_norm == 0:
        return x, 0, 0.
    r = b.copy()
    z = apply_M(r)
    p = z.copy()
    rz = r @ z
    residual = 1.
    for it in range(1, max_iter + 1):
        Ap = apply_A(p)
        pAp = p @ Ap
        if not pAp > 0:
            raise SolverFailure(FailureKind.did_not_converge, 'breakdown, matrix is not positive definite',
                                residual, it)
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        residual = np.linalg.norm(r) / b_norm
        if residual <= precision:
            return x, it, residual
        z = apply_M(r)
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise SolverFailure(FailureKind.did_not_converge, f'no convergence within {max_iter} iterations',
                        residual, max_iter)


def _bicgstab(apply_A, apply_M, b, max_iter, precision):
    x = np.zeros_like(b)
    b_norm = np.linalg.norm(b)
    if b_norm == 0:
        return x, 0, 0.
    r = b.copy()
    r_hat = r.copy()
    rho = alpha = omega = 1.
    v = np.zeros_like(b)
    p = np.zeros_like(b)
    residual = 1.
    for it in range(1, max_iter + 1):
        rho_new = r_hat @ r
        if abs(rho_new) < _EPS ** 2 * (r_hat @ r_hat):
            # r_hat has become (almost) orthogonal to r, restart
            r_hat = r.copy()
            rho_new = r @ r
            p[:] = 0.
            v[:] = 0.
            rho = alpha = omega = 1.
        beta = (rho_new / rho) * (alpha / omega)
        p = r + beta * (p - omega * v)
        y = apply_M(p)
        v = apply_A(y)
        denom = r_hat @ v
        if denom == 0:
            raise SolverFailure(FailureKind.did_not_converge, 'breakdown', residual, it)
        alpha = rho_new / denom
        s = r - alpha * v
        if np.linalg.norm(s) / b_norm <= precision:
            x += alpha * y
            return x, it, np.linalg.norm(s) / b_norm
        z = apply_M(s)
        t = apply_A(z)
        tt = t @ t
        omega = (t @ s) / tt if tt > 0 else 0.
        x += alpha * y + omega * z
        r = s - omega * t
        rho = rho_new
        residual = np.linalg.norm(r) / b_norm
        if residual <= precision:
            return x, it, residual
        if omega == 0:
            raise SolverFailure(FailureKind.did_not_converge, 'stagnation', residual, it)
    raise SolverFailure(FailureKind.did_not_converge, f'no convergence within {max_iter} iterations',
                        residual, max_iter)


def _vector_data(v, name):
    if isinstance(v, DenseVector):
        return v._data
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise SolverFailure(FailureKind.shape_mismatch, f'{name} has to be a vector')
    return arr


class Solver:
    """Linear solver for a fixed matrix.

    >>> A = DenseMatrix.from_array([[2., 0.], [0., 4.]])
    >>> x = DenseVector(2)
    >>> _ = Solver(A).apply(DenseVector([2., 4.]), x)
    >>> list(x)
    [1.0, 1.0]
    """

    def __init__(self, matrix):
        if not isinstance(matrix, MatrixInterface):
            raise TypeError(f'expected a matrix, got {type(matrix).__name__}')
        self.matrix = matrix

    def types(self):
        return solver_types(self.matrix)

    @staticmethod
    def options(type):
        return solver_options(type)

    def solve(self, rhs, type_or_options=None):
        solution = DenseVector(self.matrix.cols)
        self.apply(rhs, solution, type_or_options)
        return solution

    def apply(self, rhs, solution, type_or_options=None):
        """Solve ``matrix @ solution = rhs``, overwriting ``solution``.

        ``type_or_options`` is a solver type, an options tree (missing keys
        are taken from the defaults of its ``type``) or ``None`` for the
        first of :meth:`types`.  Returns :class:`SolverStatistics`.
        """
        if type_or_options is None:
            type_or_options = self.types()[0]
        if isinstance(type_or_options, ConfigTree):
            if 'type' not in type_or_options:
                raise SolverFailure(FailureKind.unknown_type, "options without 'type' given")
            opts = solver_options(type_or_options['type']).add(type_or_options)
        else:
            opts = solver_options(type_or_options)
        solver_type = opts['type']
        if solver_type not in self.types():
            raise SolverFailure(FailureKind.unknown_type,
                                f"solver type '{solver_type}' is not available for {type(self.matrix).__name__}, "
                                f"available are: {', '.join(self.types())}")

        matrix = self.matrix
        b = _vector_data(rhs, 'rhs')
        if matrix.rows != matrix.cols:
            raise SolverFailure(FailureKind.shape_mismatch, f'matrix is not square ({matrix.rows}x{matrix.cols})')
        if len(b) != matrix.rows:
            raise SolverFailure(FailureKind.shape_mismatch,
                                f'rhs of size {len(b)} does not match matrix with {matrix.rows} rows')

        check_inf_nan = opts.get('check_for_inf_nan', float) != 0
        if check_inf_nan:
            if not matrix.valid():
                raise SolverFailure(FailureKind.inf_or_nan, 'matrix contains inf or nan')
            if not np.all(np.isfinite(b)):
                raise SolverFailure(FailureKind.inf_or_nan, 'rhs contains inf or nan')

        symmetry_tol = opts.get('pre_check_symmetry', float, 0.)
        if symmetry_tol > 0:
            dense = matrix.to_numpy()
            asym = float(np.max(np.abs(dense - dense.T))) if dense.size else 0.
            scale = 1. + (float(np.max(np.abs(dense))) if dense.size else 0.)
            if asym > symmetry_tol * scale:
                raise SolverFailure(FailureKind.pre_check_failed,
                                    f"solver '{solver_type}' requires a symmetric matrix, "
                                    f'max |a_ij - a_ji| = {asym:.3e} exceeds {symmetry_tol:g} * {scale:.3e}')

        family, _, preconditioner = solver_type.partition('.')
        if solver_type in DENSE_TYPES:
            algorithm = {'lu.partialpiv': _lu_partialpiv, 'qr.householder': _qr_householder, 'ldlt': _ldlt}[solver_type]
            with np.errstate(all='ignore'):
                x = algorithm(matrix._data, b)
            iterations = 0
            b_norm = np.linalg.norm(b)
            residual = float(np.linalg.norm(matrix._data @ x - b) / b_norm) if b_norm > 0 else 0.
        else:
            solve = _cg if family == 'cg' else _bicgstab
            with np.errstate(all='ignore'):
                x, iterations, residual = solve(_operator(matrix), _preconditioner(matrix, preconditioner), b,
                                                opts.get('max_iter', int), opts.get('precision', float))

        if check_inf_nan and not np.all(np.isfinite(x)):
            raise SolverFailure(FailureKind.inf_or_nan, 'solution contains inf or nan', iterations=iterations)

        post_tol = opts.get('post_check_solves_system', float)
        b_sup = float(np.max(np.abs(b))) if len(b) else 0.
        misfit = matrix.mv(x)._data - b
        post_residual = (float(np.max(np.abs(misfit))) if len(b) else 0.) / (1. + b_sup)
        if post_tol > 0 and not post_residual <= post_tol:
            raise SolverFailure(FailureKind.post_check_failed,
                                f'solution does not solve the system: |Ax - b|_inf / (1 + |b|_inf) = '
                                f'{post_residual:.3e} > {post_tol:g}', iterations=iterations)
        if isinstance(solution, DenseVector):
            solution._replace(x)
        else:
            solution[...] = x
        return SolverStatistics(solver_type, int(iterations), float(residual), post_residual)


def solver_apply(matrix, rhs, solution, type_or_options=None):
    return Solver(matrix).apply(rhs, solution, type_or_options)
