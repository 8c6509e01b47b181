"""Copy-on-write vectors and matrices.

Every container is a handle on a shared backend.  :meth:`copy` only
attaches another handle to the same backend; the deep copy is deferred to
the first mutation through a handle whose backend is shared (see
:meth:`ContainerInterface.ensure_uniqueness`).  The number of deep copies
performed so far is available from :func:`deep_copy_count`.
"""

import math
import threading

import numpy as np

from xtkit.common.exceptions import PatternError
from xtkit.la.pattern import SparsityPattern

_stats_lock = threading.Lock()
_deep_copies = 0


def deep_copy_count():
    """Total number of deep copies performed by all containers so far."""
    return _deep_copies


def _record_deep_copy():
    global _deep_copies
    with _stats_lock:
        _deep_copies += 1


class _Backend:
    __slots__ = ('data', 'extra', 'refs', 'lock')

    def __init__(self, data, extra=None):
        self.data = data
        self.extra = extra
        self.refs = 0
        self.lock = threading.Lock()


class ContainerInterface:
    """Operations shared by all vectors and matrices.

    Subclasses store their entries in ``self._backend.data`` (a numpy array)
    and any immutable structure in ``self._backend.extra``.
    """

    def __init__(self, backend):
        self._backend = None
        self._attach(backend)

    @classmethod
    def _from_backend(cls, backend):
        obj = cls.__new__(cls)
        obj._backend = None
        obj._attach(backend)
        return obj

    def _attach(self, backend):
        with backend.lock:
            backend.refs += 1
        self._backend = backend

    def _detach(self):
        backend = self._backend
        if backend is not None:
            with backend.lock:
                backend.refs -= 1
            self._backend = None

    def __del__(self):
        self._detach()

    @property
    def share_count(self):
        """Number of handles sharing this container's backend."""
        return self._backend.refs

    def ensure_uniqueness(self):
        backend = self._backend
        with backend.lock:
            if backend.refs <= 1:
                return
            clone = _Backend(backend.data.copy(), backend.extra)
        self._detach()
        self._attach(clone)
        _record_deep_copy()

    def backend(self):
        """Mutable access to the entries; performs the deferred deep copy if needed."""
        self.ensure_uniqueness()
        return self._backend.data

    @property
    def _data(self):
        return self._backend.data

    def _replace(self, data, extra=None):
        self._detach()
        self._attach(_Backend(data, extra))

    def copy(self):
        return type(self)._from_backend(self._backend)

    def scal(self, alpha):
        self.backend()[...] *= alpha

    def _check_compatible(self, other):
        if type(other) is not type(self):
            raise TypeError(f'cannot combine {type(self).__name__} with {type(other).__name__}')
        if other._data.shape != self._data.shape:
            raise ValueError(f'shape mismatch: {self._data.shape} vs {other._data.shape}')

    def axpy(self, alpha, x):
        """``self += alpha * x``."""
        self._check_compatible(x)
        self.backend()[...] += alpha * x._data

    def __imul__(self, alpha):
        self.scal(alpha)
        return self

    def __iadd__(self, other):
        self.axpy(1., other)
        return self

    def __isub__(self, other):
        self.axpy(-1., other)
        return self

    def __add__(self, other):
        result = self.copy()
        result.axpy(1., other)
        return result

    def __sub__(self, other):
        result = self.copy()
        result.axpy(-1., other)
        return result

    def __mul__(self, alpha):
        result = self.copy()
        result.scal(alpha)
        return result

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.

    def valid(self):
        """``True`` iff no entry is inf or NaN."""
        return bool(np.all(np.isfinite(self._data)))


class DenseVector(ContainerInterface):
    """Dense vector of reals.

    ``DenseVector(3)`` gives three zeros, ``DenseVector(3, 1.)`` three ones
    and ``DenseVector([1, 2])`` wraps a copy of the given values.
    """

    def __init__(self, values=0, value=0.):
        if np.isscalar(values):
            data = np.full(int(values), float(value))
        else:
            data = np.array(values, dtype=float).reshape(-1)
        super().__init__(_Backend(data))

    @property
    def size(self):
        return len(self._data)

    def __len__(self):
        return len(self._data)

    def __iter__(self):
        return iter(self._data.tolist())

    def __repr__(self):
        return f'DenseVector({self._data.tolist()})'

    def _check_index(self, i):
        if not 0 <= i < len(self._data):
            raise IndexError(f'index {i} out of range for vector of size {len(self._data)}')

    def get_entry(self, i):
        self._check_index(i)
        return float(self._data[i])

    def set_entry(self, i, value):
        self._check_index(i)
        self.backend()[i] = value

    def add_to_entry(self, i, value):
        self._check_index(i)
        self.backend()[i] += value

    __getitem__ = get_entry
    __setitem__ = set_entry

    def to_numpy(self):
        return self._data.copy()

    def dot(self, other):
        self._check_compatible(other)
        return float(np.dot(self._data, other._data))

    def l1_norm(self):
        return float(np.sum(np.abs(self._data)))

    def l2_norm(self):
        return float(np.sqrt(np.dot(self._data, self._data)))

    def sup_norm(self):
        return float(np.max(np.abs(self._data))) if len(self._data) else 0.

    def mean(self):
        if not len(self._data):
            raise ValueError('mean of an empty vector')
        return math.fsum(self._data) / len(self._data)

    def standard_deviation(self):
        """Population standard deviation ``sqrt(mean((x - mean)**2))``."""
        mu = self.mean()
        return math.sqrt(math.fsum((self._data - mu) ** 2) / len(self._data))

    def almost_equal(self, other, style=None):
        from xtkit.common.float_cmp import vector_float_compare
        return vector_float_compare(self._data, other._data, style)


class MatrixInterface(ContainerInterface):
    """Shared matrix operations; subclasses provide the entry access."""

    @property
    def rows(self):
        raise NotImplementedError

    @property
    def cols(self):
        raise NotImplementedError

    def _check_entry(self, i, j):
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f'({i}, {j}) out of range for a {self.rows}x{self.cols} matrix')

    def _check_mv(self, x):
        size = len(x)
        if size != self.cols:
            raise ValueError(f'vector of size {size} does not match matrix with {self.cols} columns')

    def __matmul__(self, x):
        return self.mv(x)

    def sup_norm(self):
        data = self._data
        return float(np.max(np.abs(data))) if data.size else 0.

    @property
    def nnz(self):
        return self.pattern().nnz

    def unit_row(self, i):
        """Zero row ``i``, then set the diagonal entry to one."""
        self.clear_row(i)
        self.set_entry(i, i, 1.)

    def unit_col(self, j):
        self.clear_col(j)
        self.set_entry(j, j, 1.)


class DenseMatrix(MatrixInterface):
    """Row-major dense matrix, optionally remembering the pattern it was built from."""

    def __init__(self, rows, cols=None, pattern=None):
        cols = rows if cols is None else cols
        if pattern is not None and (pattern.num_rows, pattern.num_cols) != (rows, cols):
            raise ValueError('pattern does not match the matrix dimensions')
        super().__init__(_Backend(np.zeros((rows, cols)), pattern.copy() if pattern is not None else None))

    @classmethod
    def from_array(cls, array, pattern=None):
        array = np.array(array, dtype=float, ndmin=2)
        if array.ndim != 2:
            raise ValueError('expected a two-dimensional array')
        m = cls(*array.shape, pattern=pattern)
        m._backend.data[...] = array
        return m

    @property
    def rows(self):
        return self._data.shape[0]

    @property
    def cols(self):
        return self._data.shape[1]

    def __repr__(self):
        return f'DenseMatrix({self._data.tolist()})'

    def get_entry(self, i, j):
        self._check_entry(i, j)
        return float(self._data[i, j])

    def set_entry(self, i, j, value):
        self._check_entry(i, j)
        self.backend()[i, j] = value

    def add_to_entry(self, i, j, value):
        self._check_entry(i, j)
        self.backend()[i, j] += value

    def mv(self, x):
        self._check_mv(x)
        return DenseVector(self._data @ _as_array(x))

    def clear_row(self, i):
        self._check_entry(i, 0 if self.cols else -1)
        self.backend()[i, :] = 0.

    def clear_col(self, j):
        self._check_entry(0 if self.rows else -1, j)
        self.backend()[:, j] = 0.

    def pattern(self):
        extra = self._backend.extra
        return extra.copy() if extra is not None else SparsityPattern.dense(self.rows, self.cols)

    def pruned(self, eps=1e-15):
        """Copy with all entries ``|v| <= eps`` zeroed and removed from the pattern."""
        keep = np.abs(self._data) > eps
        pattern = self.pattern()
        new = SparsityPattern(self.rows, self.cols)
        new._rows = [[j for j in row if keep[i, j]] for i, row in enumerate(pattern._rows)]
        return DenseMatrix.from_array(np.where(keep, self._data, 0.), new)

    def to_numpy(self):
        return self._data.copy()


class _CsrStructure:
    __slots__ = ('pattern', 'indptr', 'indices', 'row_ids')

    def __init__(self, pattern):
        self.pattern = pattern.copy()
        lengths = [len(r) for r in pattern._rows]
        self.indptr = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
        self.indices = np.array([j for r in pattern._rows for j in r], dtype=np.int64)
        self.row_ids = np.repeat(np.arange(pattern.num_rows), lengths)


class CsrMatrix(MatrixInterface):
    """Compressed sparse row matrix with a fixed :class:`SparsityPattern`.

    Entries outside the pattern read as zero; setting or adding to them
    raises :class:`~xtkit.common.exceptions.PatternError`.
    """

    def __init__(self, rows, cols=None, pattern=None):
        cols = rows if cols is None else cols
        if pattern is None:
            pattern = SparsityPattern(rows, cols)
        if (pattern.num_rows, pattern.num_cols) != (rows, cols):
            raise ValueError('pattern does not match the matrix dimensions')
        structure = _CsrStructure(pattern)
        super().__init__(_Backend(np.zeros(len(structure.indices)), structure))

    @classmethod
    def from_dense(cls, array, pattern=None):
        """CSR copy of ``array``; the pattern defaults to its nonzero entries."""
        array = np.array(array, dtype=float, ndmin=2)
        if pattern is None:
            pattern = SparsityPattern(*array.shape)
            pattern._rows = [np.flatnonzero(row).tolist() for row in array]
        m = cls(*array.shape, pattern=pattern)
        s = m._backend.extra
        m._backend.data[...] = array[s.row_ids, s.indices]
        return m

    @property
    def _structure(self):
        return self._backend.extra

    @property
    def rows(self):
        return self._structure.pattern.num_rows

    @property
    def cols(self):
        return self._structure.pattern.num_cols

    def __repr__(self):
        return f'CsrMatrix({self.rows}x{self.cols}, nnz={len(self._data)})'

    def _check_compatible(self, other):
        super()._check_compatible(other)
        if other._structure is not self._structure and other._structure.pattern != self._structure.pattern:
            raise ValueError('sparse matrices with different patterns cannot be combined')

    def _position(self, i, j):
        s = self._structure
        start, end = s.indptr[i], s.indptr[i + 1]
        k = start + np.searchsorted(s.indices[start:end], j)
        if k < end and s.indices[k] == j:
            return k
        return None

    def get_entry(self, i, j):
        self._check_entry(i, j)
        k = self._position(i, j)
        return 0. if k is None else float(self._data[k])

    def _mutable_position(self, i, j):
        self._check_entry(i, j)
        k = self._position(i, j)
        if k is None:
            raise PatternError(f'entry ({i}, {j}) is not contained in the sparsity pattern')
        return k

    def set_entry(self, i, j, value):
        k = self._mutable_position(i, j)
        self.backend()[k] = value

    def add_to_entry(self, i, j, value):
        k = self._mutable_position(i, j)
        self.backend()[k] += value

    def mv(self, x):
        self._check_mv(x)
        s = self._structure
        y = np.bincount(s.row_ids, weights=self._data * _as_array(x)[s.indices], minlength=self.rows)
        return DenseVector(y)

    def clear_row(self, i):
        self._check_entry(i, 0 if self.cols else -1)
        s = self._structure
        self.backend()[s.indptr[i]:s.indptr[i + 1]] = 0.

    def clear_col(self, j):
        self._check_entry(0 if self.rows else -1, j)
        mask = self._structure.indices == j
        if mask.any():
            self.backend()[mask] = 0.

    def unit_row(self, i):
        self._mutable_position(i, i)
        super().unit_row(i)

    def unit_col(self, j):
        self._mutable_position(j, j)
        super().unit_col(j)

    def pattern(self):
        return self._structure.pattern.copy()

    @property
    def nnz(self):
        return len(self._data)

    def pruned(self, eps=1e-15):
        s = self._structure
        keep = np.abs(self._data) > eps
        new = SparsityPattern(self.rows, self.cols)
        new._rows = [s.indices[s.indptr[i]:s.indptr[i + 1]][keep[s.indptr[i]:s.indptr[i + 1]]].tolist()
                     for i in range(self.rows)]
        m = CsrMatrix(self.rows, self.cols, new)
        m._backend.data[...] = self._data[keep]
        return m

    def to_numpy(self):
        dense = np.zeros((self.rows, self.cols))
        s = self._structure
        dense[s.row_ids, s.indices] = self._data
        return dense

    def diagonal(self):
        return np.array([self.get_entry(i, i) for i in range(min(self.rows, self.cols))])


def _as_array(x):
    if isinstance(x, DenseVector):
        return x._data
    return np.asarray(x, dtype=float)


def assemble_lincomb(components, coefficients):
    """``sum_q coefficients[q] * components[q]`` with a single deep copy."""
    if not components:
        raise ValueError('no components given')
    if len(components) != len(coefficients):
        raise ValueError(f'{len(components)} components but {len(coefficients)} coefficients')
    result = components[0].copy()
    result *= coefficients[0]
    for qq in range(1, len(components)):
        result.axpy(coefficients[qq], components[qq])
    return result
