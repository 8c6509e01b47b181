"""Sparsity patterns: per-row sorted column indices."""

import bisect


class SparsityPattern:
    """Admissible ``(row, col)`` positions of a matrix.

    >>> p = SparsityPattern(2, 2)
    >>> p.insert(0, 1); p.insert(0, 0)
    >>> p.rows
    [[0, 1], []]
    """

    def __init__(self, num_rows, num_cols=None, rows=None):
        num_cols = num_rows if num_cols is None else num_cols
        if num_rows < 0 or num_cols < 0:
            raise ValueError('pattern dimensions have to be nonnegative')
        self.num_rows = num_rows
        self.num_cols = num_cols
        self._rows = [[] for _ in range(num_rows)]
        if rows is not None:
            if len(rows) != num_rows:
                raise ValueError(f'expected {num_rows} rows, got {len(rows)}')
            for i, cols in enumerate(rows):
                for j in cols:
                    self.insert(i, j)

    @classmethod
    def dense(cls, num_rows, num_cols=None):
        num_cols = num_rows if num_cols is None else num_cols
        p = cls(num_rows, num_cols)
        p._rows = [list(range(num_cols)) for _ in range(num_rows)]
        return p

    @classmethod
    def diagonal(cls, n):
        p = cls(n, n)
        p._rows = [[i] for i in range(n)]
        return p

    @property
    def rows(self):
        return [list(r) for r in self._rows]

    def row(self, i):
        return tuple(self._rows[i])

    def _check(self, i, j):
        if not (0 <= i < self.num_rows and 0 <= j < self.num_cols):
            raise IndexError(f'({i}, {j}) out of range for a {self.num_rows}x{self.num_cols} pattern')

    def insert(self, i, j):
        self._check(i, j)
        row = self._rows[i]
        k = bisect.bisect_left(row, j)
        if k == len(row) or row[k] != j:
            row.insert(k, j)

    def remove(self, i, j):
        row = self._rows[i]
        k = bisect.bisect_left(row, j)
        if k < len(row) and row[k] == j:
            del row[k]

    def contains(self, i, j):
        if not (0 <= i < self.num_rows):
            return False
        row = self._rows[i]
        k = bisect.bisect_left(row, j)
        return k < len(row) and row[k] == j

    def __contains__(self, ij):
        return self.contains(*ij)

    @property
    def nnz(self):
        return sum(len(r) for r in self._rows)

    def copy(self):
        p = SparsityPattern(self.num_rows, self.num_cols)
        p._rows = [list(r) for r in self._rows]
        return p

    def __eq__(self, other):
        if not isinstance(other, SparsityPattern):
            return NotImplemented
        return (self.num_rows, self.num_cols, self._rows) == (other.num_rows, other.num_cols, other._rows)

    def __repr__(self):
        return f'SparsityPattern({self.num_rows}x{self.num_cols}, nnz={self.nnz})'
