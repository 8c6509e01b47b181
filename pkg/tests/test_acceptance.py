"""Acceptance criteria, one test each.

Every check records a ``PASS``/``FAIL`` line which is printed in the pytest
terminal summary (and directly when this file is run as a script).
"""

import itertools
import math
import os
import random
import threading
import time

import numpy as np
import pytest

from oracles import central_differences, containing_cell, interior_face_count, periodic_classes
from xtkit.common import (CompareStyle, ConfigTree, Timings, float_compare, format_value, parse_matrix,
                          parse_vector)
from xtkit.functions import (CheckerboardFunction, ConstantFunction, DgSpace, DiscreteFunction, ExpressionFunction,
                             GlobalLambdaFunction, l2_norm, l2_projection, visualize)
from xtkit.grid import (AllDirichletBoundaryInfo, AllNeumannBoundaryInfo, ApplyOn, Codim0Functor, Codim1Functor,
                        CubeGridSpec, GridProvider, TensorEntity, Walker)
from xtkit.la import (SPARSE_TYPES, CsrMatrix, DenseMatrix, DenseVector, FailureKind, Solver, SolverFailure,
                      assemble_lincomb, deep_copy_count)

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')
RESULTS = {}


def record(number, title, ok, detail=''):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}" + (f' ({detail})' if detail else '')
    RESULTS[number] = line
    print(line)
    assert ok, line


def unit_view(num_elements, periodic=None):
    dim = len(num_elements)
    view = GridProvider(CubeGridSpec(dim, [0.] * dim, [1.] * dim, list(num_elements))).leaf_view()
    return view.periodic(periodic) if periodic is not None and any(periodic) else view


# 1
def direct_eq(style, a, b, eps_abs, eps_rel):
    d = abs(a - b)
    if style == 'absolute':
        return d <= eps_abs
    if style == 'relative_weak':
        return d <= eps_rel * max(abs(a), abs(b))
    if style == 'relative_strong':
        return d <= eps_rel * min(abs(a), abs(b))
    return d <= eps_abs + eps_rel * abs(b)


def test_float_compare_conformance():
    rng = random.Random(1)
    cases = []
    for _ in range(10_000):
        scale = 10 ** rng.uniform(-10, 10)
        a = rng.uniform(-1, 1) * scale
        b = a + rng.uniform(-1, 1) * scale * 10 ** rng.uniform(-12, 0) if rng.random() < 0.8 else rng.uniform(-1, 1) * scale
        cases.append((a, b, 10 ** rng.uniform(-12, 0) * scale, 10 ** rng.uniform(-12, 0)))
    mismatches = 0
    start = time.perf_counter()
    for style in ('absolute', 'relative_weak', 'relative_strong', 'numpy'):
        for a, b, eps_abs, eps_rel in cases:
            r = float_compare(a, b, CompareStyle(style, eps_abs, eps_rel))
            mismatches += r.eq != direct_eq(style, a, b, eps_abs, eps_rel)
    elapsed = time.perf_counter() - start
    asym = CompareStyle('numpy', 0., 0.1)
    asymmetric = not float_compare(1.0, 0.9, asym).eq and float_compare(0.9, 1.0, asym).eq
    record(1, 'float-compare conformance', mismatches == 0 and asymmetric and elapsed < 1.,
           f'{mismatches} mismatches in 4x10000 cases, asymmetry {asymmetric}, {elapsed:.2f} s for all styles')


# 2
def test_grammar_round_trip():
    rng = np.random.default_rng(2)
    failures = 0
    for i in range(1000):
        if i % 2:
            v = (rng.standard_normal(rng.integers(0, 8)) * 10.0 ** rng.integers(-20, 20)).tolist()
            failures += parse_vector(format_value(v)) != v
        else:
            m = (rng.standard_normal((rng.integers(1, 5), rng.integers(1, 5))) * 10.0 ** rng.integers(-20, 20)).tolist()
            failures += parse_matrix(format_value(m)) != m
    literals = (parse_matrix('[1. 2.; 3. 4.]') == [[1., 2.], [3., 4.]]
                and parse_vector('[0 0 0 0]', 2) == [0., 0.])
    record(2, 'grammar round trip', failures == 0 and literals, f'{failures} of 1000 round trips failed')


# 3
def test_periodic_index_oracle():
    start = time.perf_counter()
    failures = []
    for dim in (1, 2, 3):
        for num_elements in itertools.product(range(1, 5), repeat=dim):
            for mask in itertools.product([False, True], repeat=dim):
                view = unit_view(num_elements, mask)
                for codim in range(dim + 1):
                    classes = periodic_classes(num_elements, mask, codim)
                    ids = [{view.index(TensorEntity(S, c)) for S, c in members} for members in classes]
                    ok = (view.size(codim) == len(classes) and all(len(i) == 1 for i in ids)
                          and set().union(*ids) == set(range(view.size(codim))))
                    if not ok:
                        failures.append((num_elements, mask, codim))
    elapsed = time.perf_counter() - start
    vertices = unit_view([4, 4], [True, True]).size(2)
    record(3, 'periodic index oracle', not failures and vertices == 16 and elapsed < 5.,
           f'{len(failures)} mismatches, 4x4 periodic vertices {vertices}, {elapsed:.2f} s')


# 4
class Summer(Codim0Functor):

    def __init__(self):
        self.lock = threading.Lock()

    def prepare(self):
        self.count, self.total = 0, 0

    def apply_local(self, entity):
        with self.lock:
            self.count += 1
            self.total += hash(entity.coords) % 1000


class FaceCounter(Codim1Functor):

    def __init__(self):
        self.lock = threading.Lock()

    def prepare(self):
        self.count, self.total = 0, 0

    def apply_local(self, intersection, inside, outside):
        with self.lock:
            self.count += 1
            self.total += intersection.direction + 10 * intersection.side + 100 * sum(inside.coords)


def walk(view, filter, parallel, threads=None):
    cells, faces = Summer(), FaceCounter()
    walker = Walker(view)
    walker.add(cells)
    walker.add(faces, filter)
    walker.walk(parallel, threads)
    return cells.count, cells.total, faces.count, faces.total


def test_walker_equivalence():
    rng = random.Random(4)
    filters = [ApplyOn.AllIntersections(), ApplyOn.InnerIntersections(), ApplyOn.InnerIntersectionsPrimally(),
               ApplyOn.BoundaryIntersections(), ApplyOn.DirichletIntersections(AllDirichletBoundaryInfo()),
               ApplyOn.NeumannIntersections(AllNeumannBoundaryInfo())]
    mismatches = 0
    for _ in range(100):
        dim = rng.randint(1, 3)
        num_elements = [rng.randint(1, 6) for _ in range(dim)]
        mask = [rng.random() < 0.4 for _ in range(dim)]
        view = unit_view(num_elements, mask)
        filter = rng.choice(filters)
        mismatches += walk(view, filter, False) != walk(view, filter, True, rng.randint(2, 6))
    primal = walk(unit_view([8, 8]), ApplyOn.InnerIntersectionsPrimally(), True)[2]
    record(4, 'walker equivalence', mismatches == 0 and primal == 112 == interior_face_count([8, 8]),
           f'{mismatches} of 100 configurations differ, primal faces on 8x8: {primal}')


# 5
def test_cow_contract():
    ok = True
    v = DenseVector([1., 2., 3.])
    before = deep_copy_count()
    w = v.copy()
    w.set_entry(0, 9.)
    w.add_to_entry(1, 1.)
    ok &= deep_copy_count() - before == 1 and v.get_entry(0) == 1.
    u = v.copy()
    x = u.copy()
    before = deep_copy_count()
    u.scal(2.)
    x.scal(2.)
    v.scal(2.)
    ok &= deep_copy_count() - before == 2
    rng = np.random.default_rng(5)
    counts = []
    for Q in (1, 2, 3, 5, 8, 13):
        components = [DenseMatrix.from_array(rng.standard_normal((3, 3))) for _ in range(Q)]
        coefficients = rng.standard_normal(Q).tolist()
        before = deep_copy_count()
        result = assemble_lincomb(components, coefficients)
        counts.append(deep_copy_count() - before)
        expected = sum(c * m.to_numpy() for c, m in zip(coefficients, components))
        ok &= np.allclose(result.to_numpy(), expected, rtol=1e-12, atol=1e-14)
    ok &= counts == [1] * len(counts)
    record(5, 'copy-on-write contract', bool(ok), f'assemble_lincomb deep copies for Q in 1..13: {counts}')


# 6
def test_solver_checks():
    try:
        Solver(DenseMatrix.from_array([[1., 2.], [0., 1.]])).apply(DenseVector([1., 1.]), DenseVector(2), 'ldlt')
        ldlt_kind = None
    except SolverFailure as err:
        ldlt_kind = err.kind
    n = 50
    A = 2 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
    sparse = CsrMatrix.from_dense(A)
    b = DenseVector(n, 1.)
    details = []
    ok = ldlt_kind == FailureKind.pre_check_failed
    for solver_type in SPARSE_TYPES:
        x = DenseVector(n)
        stats = Solver(sparse).apply(b, x, solver_type)
        r = A @ x.to_numpy() - 1.
        ok &= stats.iterations <= 1000 and stats.residual <= 1e-14
        ok &= np.max(np.abs(r)) <= 1e-5 * 2
        details.append(f'{solver_type}: {stats.iterations} its')
    rng = np.random.default_rng(6)
    for solver_type in ('lu.partialpiv', 'qr.householder', 'ldlt'):
        for _ in range(20):
            B = rng.standard_normal((6, 6))
            M = B @ B.T + np.eye(6)
            rhs = rng.standard_normal(6)
            x = DenseVector(6)
            Solver(DenseMatrix.from_array(M)).apply(DenseVector(rhs), x, solver_type)
            ok &= np.max(np.abs(M @ x.to_numpy() - rhs)) <= 1e-5 * (1 + np.max(np.abs(rhs)))
    record(6, 'solver checks', bool(ok), f'ldlt on nonsymmetric: {ldlt_kind}; ' + ', '.join(details))


# 7
def test_projection_exactness():
    start = time.perf_counter()
    view = unit_view([4, 4])
    worst = 0.
    for k in (0, 1, 2):
        space = DgSpace(view, k)
        for p, q in itertools.product(range(k + 1), repeat=2):
            f = ExpressionFunction('x', f'x[0]^{p}*x[1]^{q}', p + q)
            f_h = DiscreteFunction(space, l2_projection(f, space))
            worst = max(worst, l2_norm(f - f_h, view, 2 * (p + q + k)))
    elapsed = time.perf_counter() - start
    record(7, 'projection exactness', worst <= 1e-10 and elapsed < 10.,
           f'max error {worst:.2e}, {elapsed:.2f} s')


# 8
def test_convergence_rate():
    f = ExpressionFunction('x', 'sin(pi*x[0])', 5)
    errors = []
    for n in (8, 16):
        view = unit_view([n])
        space = DgSpace(view, 1)
        errors.append(l2_norm(f - DiscreteFunction(space, l2_projection(f, space)), view, 12))
    ratio = errors[0] / errors[1]
    record(8, 'convergence rate', 3.2 <= ratio <= 4.8, f'error ratio 8 -> 16 cells: {ratio:.4f}')


# 9
def test_gradient_checks():
    view = GridProvider(CubeGridSpec(2, [-1., 0.], [1., 2.], [4, 3])).leaf_view()
    rng = np.random.default_rng(9)
    scalar = ExpressionFunction('x', 'x[0]^2*sin(x[1]) + sqrt(2 + x[0])', 4,
                                '[2*x[0]*sin(x[1]) + 0.5/sqrt(2 + x[0]) x[0]^2*cos(x[1])]')
    vector = ExpressionFunction('x', '[x[0] sin(x[1])]', 3, ['[1 0]', '[0 cos(x[1])]'])
    lam = GlobalLambdaFunction(lambda x: np.exp(x[0] * x[1]), 4,
                               lambda x: [x[1] * np.exp(x[0] * x[1]), x[0] * np.exp(x[0] * x[1])])
    space = DgSpace(view, 3)
    functions = {
        'constant': ConstantFunction([1., -2.]),
        'checkerboard': CheckerboardFunction([-1., 0.], [1., 2.], [2, 2], [1., 2., 3., 4.]),
        'expression (scalar)': scalar,
        'expression (vector)': vector,
        'lambda': lam,
        'sum': scalar + lam,
        'difference': scalar - lam,
        'product': scalar * vector,
        'discrete': DiscreteFunction(space, rng.standard_normal(space.num_dofs)),
    }
    failed = []
    for name, f in functions.items():
        checked = 0
        while checked < 50:
            x = rng.uniform(view.lower_left, view.upper_right)
            coords = containing_cell(view.lower_left, view.upper_right, view.num_elements, x)
            cell = view.cell(coords)
            local = f.local_function(view, cell)
            x_hat = local.geometry.local(x)
            if np.any(x_hat < 1e-3) or np.any(x_hat > 1 - 1e-3):
                continue
            fd = central_differences(lambda y: local.evaluate(local.geometry.local(y)), x, 1e-6)
            jac = local.jacobian(x_hat)
            if not np.all(np.abs(jac - fd) <= 1e-5 * (1 + np.abs(jac))):
                failed.append(name)
                break
            checked += 1
    record(9, 'gradient checks', not failed, f'{len(functions)} implementations x 50 points, failed: {failed or "none"}')


# 10
class FakeClock:

    def __init__(self):
        self.now = (0, 0., 0.)

    def advance(self, wall_ns, user_s):
        self.now = (self.now[0] + wall_ns, self.now[1] + user_s, self.now[2])

    def __call__(self):
        return self.now


def test_csv_vtk_golden(tmp_path):
    clock = FakeClock()
    t = Timings(threads=1, clock=clock)
    t.start('project')
    t.start('project.assemble')
    clock.advance(2_500_000, 0.00125)
    t.stop('project.assemble')
    t.start('project.solve')
    clock.advance(4_900_000, 0.00235)
    t.stop('project.solve')
    clock.advance(100_000, 0.)
    t.stop('project')
    with open(os.path.join(FIXTURES, 'timings_project.csv')) as f:
        csv_ok = t.output_all_measures() == f.read()
    path = visualize(ConstantFunction(1.), unit_view([2, 2]), 'constant', tmp_path / 'constant.vtk')
    with open(os.path.join(FIXTURES, 'constant_2x2.vtk'), 'rb') as expected, open(path, 'rb') as actual:
        vtk_ok = actual.read() == expected.read()
    record(10, 'CSV/VTK byte-level', csv_ok and vtk_ok, f'timings.csv {csv_ok}, VTK {vtk_ok}')


if __name__ == '__main__':
    raise SystemExit(pytest.main([__file__, '-q']))
