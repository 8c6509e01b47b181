import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_mv
from xtkit.common import CompareStyle, PatternError
from xtkit.la import (DENSE_TYPES, SPARSE_TYPES, CsrMatrix, DenseMatrix, DenseVector, FailureKind, Solver,
                      SolverFailure, SparsityPattern, assemble_lincomb, deep_copy_count, solver_apply,
                      solver_options, solver_types)


def laplacian(n, sparse=True):
    A = 2 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
    return CsrMatrix.from_dense(A) if sparse else DenseMatrix.from_array(A)


def random_pattern(rng, rows, cols, density):
    pattern = SparsityPattern(rows, cols)
    for i in range(rows):
        for j in range(cols):
            if rng.random() < density:
                pattern.insert(i, j)
    return pattern


# --- pattern ---

def test_pattern():
    p = SparsityPattern(3, 4)
    for j in (3, 0, 2, 0):
        p.insert(1, j)
    assert p.row(1) == (0, 2, 3)
    assert (1, 2) in p and not p.contains(0, 0)
    assert p.nnz == 3
    p.remove(1, 2)
    assert p.row(1) == (0, 3)
    assert SparsityPattern.diagonal(3).rows == [[0], [1], [2]]
    assert SparsityPattern.dense(2, 3).nnz == 6
    with pytest.raises(IndexError):
        p.insert(3, 0)
    q = p.copy()
    q.insert(0, 0)
    assert q != p


# --- vectors ---

def test_vector_examples():
    v = DenseVector([1, 2, 3])
    assert v.l2_norm() == math.sqrt(14)
    assert v.mean() == 2.
    assert v.l1_norm() == 6. and v.sup_norm() == 3.
    assert v.standard_deviation() == math.sqrt(2 / 3)
    w = DenseVector([4, 5, 6])
    v.axpy(0., w)
    assert list(v) == [1., 2., 3.]
    assert v.dot(w) == 32.
    with pytest.raises(IndexError):
        v.get_entry(3)
    with pytest.raises(ValueError):
        v.axpy(1., DenseVector(2))


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=30))
def test_vector_norms_against_loops(values):
    v = DenseVector(values)
    style = CompareStyle('numpy', 1e-9, 1e-12)
    assert style.eq(v.l2_norm(), math.sqrt(sum(x * x for x in values)))
    assert style.eq(v.l1_norm(), sum(abs(x) for x in values))
    mean = sum(values) / len(values)
    assert style.eq(v.mean(), mean)
    assert style.eq(v.standard_deviation(), math.sqrt(sum((x - mean) ** 2 for x in values) / len(values)))


def test_vector_algebra():
    v = DenseVector([1., 2.])
    w = DenseVector([3., 5.])
    assert list(v + w) == [4., 7.]
    assert list(w - v) == [2., 3.]
    assert list(2 * v) == [2., 4.]
    assert list(-v) == [-1., -2.]
    v += w
    v -= w
    v *= 3.
    assert list(v) == [3., 6.]
    assert not DenseVector([1., math.inf]).valid()


# --- copy on write ---

def test_cow_copy_then_mutate():
    v = DenseVector([1., 2., 3.])
    before = deep_copy_count()
    w = v.copy()
    assert v.share_count == w.share_count == 2
    assert deep_copy_count() == before
    _ = w.l2_norm(), w.get_entry(0), list(w)
    assert deep_copy_count() == before
    w.set_entry(0, 9.)
    assert v.get_entry(0) == 1. and w.get_entry(0) == 9.
    assert deep_copy_count() == before + 1
    w.add_to_entry(1, 1.)
    w.scal(2.)
    assert deep_copy_count() == before + 1
    assert v.share_count == w.share_count == 1


def test_cow_release():
    v = DenseVector(3)
    w = v.copy()
    del w
    before = deep_copy_count()
    v.set_entry(0, 1.)
    assert deep_copy_count() == before


@settings(max_examples=50)
@given(st.lists(st.sampled_from(['copy', 'mutate_last', 'mutate_first', 'read', 'drop']), max_size=20))
def test_cow_predicted_copies(ops):
    handles = [DenseVector([1., 2.])]
    shared = {0: 0}  # handle position -> backend label
    next_label = 1
    predicted = 0
    before = deep_copy_count()
    for op in ops:
        if op == 'copy':
            shared[len(handles)] = shared[len(handles) - 1]
            handles.append(handles[-1].copy())
        elif op in ('mutate_last', 'mutate_first'):
            pos = len(handles) - 1 if op == 'mutate_last' else 0
            label = shared[pos]
            if sum(1 for p in shared if shared[p] == label) > 1:
                predicted += 1
                shared[pos] = next_label
                next_label += 1
            handles[pos].add_to_entry(0, 1.)
        elif op == 'read':
            handles[-1].l2_norm()
        elif op == 'drop' and len(handles) > 1:
            del shared[len(handles) - 1]
            handles.pop()
    assert deep_copy_count() - before == predicted


@pytest.mark.parametrize('Q', [1, 2, 5, 10])
def test_assemble_lincomb_single_copy(Q):
    rng = np.random.default_rng(Q)
    arrays = [rng.standard_normal((4, 4)) for _ in range(Q)]
    components = [DenseMatrix.from_array(a) for a in arrays]
    coefficients = rng.standard_normal(Q).tolist()
    before = deep_copy_count()
    result = assemble_lincomb(components, coefficients)
    assert deep_copy_count() - before == 1
    expected = [[sum(coefficients[q] * arrays[q][i][j] for q in range(Q)) for j in range(4)] for i in range(4)]
    assert np.allclose(result.to_numpy(), expected, rtol=1e-12, atol=1e-14)
    assert np.array_equal(components[0].to_numpy(), arrays[0])


def test_assemble_lincomb_examples():
    result = assemble_lincomb([DenseMatrix.from_array(np.eye(2)), DenseMatrix.from_array([[0, 1], [1, 0]])],
                              [2., 3.])
    assert result.to_numpy().tolist() == [[2., 3.], [3., 2.]]
    with pytest.raises(ValueError):
        assemble_lincomb([], [])
    with pytest.raises(ValueError):
        assemble_lincomb([DenseVector(2)], [1., 2.])
    with pytest.raises(ValueError):
        assemble_lincomb([DenseVector(2), DenseVector(3)], [1., 2.])


# --- matrices ---

@pytest.mark.parametrize('Matrix', [DenseMatrix, CsrMatrix])
def test_matrix_examples(Matrix):
    identity = Matrix(3, 3, SparsityPattern.diagonal(3))
    for i in range(3):
        identity.set_entry(i, i, 1.)
    assert list(identity.mv(DenseVector([1, 2, 3]))) == [1., 2., 3.]
    A = Matrix(2, 2, SparsityPattern.dense(2))
    for (i, j), value in np.ndenumerate([[2., 1.], [1., 2.]]):
        A.set_entry(i, j, value)
    A.unit_row(1)
    assert A.to_numpy().tolist() == [[2., 1.], [0., 1.]]
    A.unit_col(0)
    assert A.to_numpy().tolist() == [[1., 1.], [0., 1.]]
    A.clear_row(0)
    assert A.to_numpy().tolist() == [[0., 0.], [0., 1.]]
    with pytest.raises(ValueError):
        A.mv(DenseVector(3))


@pytest.mark.parametrize('Matrix', [DenseMatrix, CsrMatrix])
def test_pruned(Matrix):
    A = Matrix(2, 2, SparsityPattern.dense(2))
    A.set_entry(0, 0, 1.)
    A.set_entry(0, 1, 1e-15)
    A.set_entry(1, 1, 2.)
    B = A.pruned(1e-12)
    assert B.nnz == A.nnz - 2
    assert B.to_numpy().tolist() == [[1., 0.], [0., 2.]]


def test_csr_pattern_contract():
    A = CsrMatrix(3, 3, SparsityPattern.diagonal(3))
    assert A.get_entry(0, 1) == 0.
    with pytest.raises(PatternError):
        A.set_entry(0, 1, 1.)
    with pytest.raises(PatternError):
        A.add_to_entry(2, 0, 1.)
    B = CsrMatrix(2, 2, SparsityPattern(2, 2, [[1], [0]]))
    with pytest.raises(PatternError):
        B.unit_row(0)
    A.clear_row(1)
    assert A.pattern() == SparsityPattern.diagonal(3)


def test_matrix_cow():
    A = laplacian(5)
    before = deep_copy_count()
    B = A.copy()
    B.set_entry(0, 0, 7.)
    assert A.get_entry(0, 0) == 2.
    assert deep_copy_count() - before == 1


@settings(max_examples=100)
@given(st.integers(1, 20), st.integers(1, 20), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_csr_mv_oracle(rows, cols, density, seed):
    rng = np.random.default_rng(seed)
    pattern = random_pattern(rng, rows, cols, density)
    A = CsrMatrix(rows, cols, pattern)
    for i, row in enumerate(pattern.rows):
        for j in row:
            A.set_entry(i, j, rng.standard_normal())
    x = rng.standard_normal(cols)
    expected = naive_mv(A.to_numpy().tolist(), x.tolist())
    style = CompareStyle('numpy', 1e-12, 1e-12)
    assert A.mv(DenseVector(x)).almost_equal(DenseVector(expected), style)
    dense = DenseMatrix.from_array(A.to_numpy(), pattern)
    assert dense.mv(DenseVector(x)).almost_equal(DenseVector(expected), style)


@settings(max_examples=30)
@given(st.integers(1, 10), st.floats(0, 1), st.floats(1e-8, 1), st.integers(0, 2**32 - 1))
def test_pruned_properties(n, density, eps, seed):
    rng = np.random.default_rng(seed)
    pattern = random_pattern(rng, n, n, density)
    A = CsrMatrix(n, n, pattern)
    for i, row in enumerate(pattern.rows):
        for j in row:
            A.set_entry(i, j, rng.choice([0., 1e-9, rng.standard_normal()]))
    B = A.pruned(eps)
    assert B.nnz <= A.nnz
    kept = np.abs(A.to_numpy()) > eps
    assert np.array_equal(B.to_numpy()[kept], A.to_numpy()[kept])


@given(st.integers(2, 6), st.integers(0, 5), st.integers(0, 2**32 - 1))
def test_unit_row_properties(n, i, seed):
    i %= n
    rng = np.random.default_rng(seed)
    A = DenseMatrix.from_array(rng.standard_normal((n, n)))
    B = A.copy()
    A.unit_row(i)
    once = A.to_numpy()
    A.unit_row(i)
    assert np.array_equal(A.to_numpy(), once)
    B.clear_row(i)
    B.unit_row(i)
    assert np.array_equal(B.to_numpy(), once)


# --- solvers ---

def test_solver_types_and_options():
    assert solver_types(DenseMatrix(2)) == ['lu.partialpiv', 'qr.householder', 'ldlt']
    assert solver_types(CsrMatrix(2)) == ['bicgstab.diagonal', 'bicgstab.identity', 'cg.diagonal', 'cg.identity']
    opts = solver_options('ldlt')
    assert opts.get('pre_check_symmetry', float) == 1e-8
    opts = solver_options('bicgstab.diagonal')
    assert opts.get('max_iter', int) == 1000 and opts.get('precision', float) == 1e-14
    for t in DENSE_TYPES + SPARSE_TYPES:
        opts = solver_options(t)
        assert opts['type'] == t
        assert opts.get('post_check_solves_system', float) == 1e-5
        assert opts.get('check_for_inf_nan', int) == 1
    with pytest.raises(SolverFailure) as excinfo:
        solver_options('cg.unknown')
    assert excinfo.value.kind == FailureKind.unknown_type


def test_solver_examples():
    A = DenseMatrix.from_array([[2., 0.], [0., 4.]])
    x = DenseVector(2)
    solver_apply(A, DenseVector([2., 4.]), x, 'lu.partialpiv')
    assert list(x) == [1., 1.]
    assert list(Solver(A).solve(DenseVector([2., 4.]))) == [1., 1.]
    with pytest.raises(SolverFailure) as excinfo:
        solver_apply(DenseMatrix.from_array([[1., 2.], [0., 1.]]), DenseVector([1., 1.]), x, 'ldlt')
    assert excinfo.value.kind == FailureKind.pre_check_failed


def post_check(A, x, b, tol=1e-5):
    r = np.array(naive_mv(A.to_numpy().tolist(), list(x))) - np.array(list(b))
    return np.max(np.abs(r)) <= tol * (1 + np.max(np.abs(list(b))))


@pytest.mark.parametrize('solver_type', SPARSE_TYPES)
def test_iterative_laplacian(solver_type):
    n = 50
    A = laplacian(n)
    b = DenseVector(n, 1.)
    x = DenseVector(n)
    stats = Solver(A).apply(b, x, solver_type)
    assert stats.iterations <= 1000
    assert stats.residual <= 1e-14
    assert post_check(A, x, b)
    expected = [(i + 1) * (n - i) / 2 for i in range(n)]
    assert np.allclose(list(x), expected, rtol=1e-10)


def test_iterative_zero_rhs():
    x = DenseVector(5, 3.)
    stats = Solver(laplacian(5)).apply(DenseVector(5), x, 'cg.identity')
    assert list(x) == [0.] * 5 and stats.iterations == 0


def test_solver_failures():
    A = laplacian(20)
    opts = solver_options('cg.identity')
    opts['max_iter'] = '2'
    with pytest.raises(SolverFailure) as excinfo:
        Solver(A).apply(DenseVector(20, 1.), DenseVector(20), opts)
    assert excinfo.value.kind == FailureKind.did_not_converge
    assert excinfo.value.residual is not None
    with pytest.raises(SolverFailure) as excinfo:
        Solver(DenseMatrix.from_array([[1., 1.], [1., 1.]])).apply(DenseVector([1., 2.]), DenseVector(2))
    assert excinfo.value.kind in (FailureKind.did_not_converge, FailureKind.post_check_failed)
    with pytest.raises(SolverFailure) as excinfo:
        Solver(DenseMatrix.from_array([[1., math.nan], [0., 1.]])).apply(DenseVector(2), DenseVector(2))
    assert excinfo.value.kind == FailureKind.inf_or_nan
    with pytest.raises(SolverFailure) as excinfo:
        Solver(A).apply(DenseVector(20), DenseVector(20), 'lu.partialpiv')
    assert excinfo.value.kind == FailureKind.unknown_type
    with pytest.raises(SolverFailure) as excinfo:
        Solver(A).apply(DenseVector(3), DenseVector(20))
    assert excinfo.value.kind == FailureKind.shape_mismatch


def test_qr_post_check_failure():
    opts = solver_options('qr.householder')
    A = DenseMatrix.from_array([[1., 1.], [1., 1.]])
    with pytest.raises(SolverFailure) as excinfo:
        Solver(A).apply(DenseVector([1., 2.]), DenseVector(2), opts)
    assert excinfo.value.kind in (FailureKind.did_not_converge, FailureKind.post_check_failed)


@settings(max_examples=50)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_dense_solvers_agree_on_spd(n, seed):
    rng = np.random.default_rng(seed)
    B = rng.standard_normal((n, n))
    A = DenseMatrix.from_array(B @ B.T + n * np.eye(n))
    b = DenseVector(rng.standard_normal(n))
    solutions = []
    for t in DENSE_TYPES:
        x = DenseVector(n)
        Solver(A).apply(b, x, t)
        assert post_check(A, x, b)
        solutions.append(x.to_numpy())
    for x in solutions[1:]:
        assert np.max(np.abs(x - solutions[0])) <= 1e-8 * (1 + np.max(np.abs(solutions[0])))
    sparse = CsrMatrix.from_dense(A.to_numpy())
    for t in SPARSE_TYPES:
        x = DenseVector(n)
        Solver(sparse).apply(b, x, t)
        assert post_check(sparse, x, b)
