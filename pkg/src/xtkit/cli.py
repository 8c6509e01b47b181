"""Command line frontend: ``xtkit {grid-info,project,solve-mass} --config FILE``.

All commands are driven by a single ini file with the sections ``grid``,
``function``, ``space``, ``solver`` and ``visualize``.  Exit codes are 0 on
success, 1 on usage errors, 2 on configuration errors and 3 on numerical
failures.
"""

import argparse
import os
import sys

import numpy as np

from xtkit.common.config import ConfigTree, ValueKind
from xtkit.common.exceptions import ConfigError, ParseError, ProjectionError, UsageError
from xtkit.common.timings import timings
from xtkit.functions.dg import DgSpace, DiscreteFunction, assemble_local_systems, l2_norm, solve_local_systems
from xtkit.functions.factory import FunctionsFactory
from xtkit.functions.vtk import visualize
from xtkit.grid.provider import GridProviderFactory
from xtkit.grid.walker import Codim0Lambda, Walker, _default_threads
from xtkit.la.container import CsrMatrix, DenseVector
from xtkit.la.pattern import SparsityPattern
from xtkit.la.solver import SPARSE_TYPES, Solver, SolverFailure

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog='xtkit', description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)
    for name, help_text in (('grid-info', 'print entity counts of the configured grid'),
                            ('project', 'L2-project the configured function and report the error'),
                            ('solve-mass', 'solve the global mass system with a sparse solver')):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument('--config', required=True, help='ini file')
        sub.add_argument('--output-dir', default='.', help='directory for VTK and CSV output')
        sub.add_argument('--parallel', action='store_true', help='use parallel grid walks')
        sub.add_argument('--set', action='append', default=[], metavar='KEY=VALUE', dest='overrides',
                         help='override a configuration entry (repeatable)')
    return parser


def load_config(path, overrides=()):
    try:
        cfg = ConfigTree.from_file(path)
    except OSError as err:
        raise ConfigError(f'cannot read {path}: {err.strerror}') from None
    for item in overrides:
        key, sep, value = item.partition('=')
        if not sep:
            raise UsageError(f"override '{item}' is not of the form key=value")
        cfg[key.strip()] = value.strip()
    return cfg


def _periodic_dirs(cfg, dim):
    if 'grid.periodic' not in cfg:
        return None
    text = cfg['grid.periodic'].strip()
    if text.startswith('['):
        dirs = cfg.get('grid.periodic', ValueKind.vector(dim, int))
    else:
        dirs = [cfg.get('grid.periodic', bool)] * dim
    return tuple(bool(d) for d in dirs)


def make_grid(cfg):
    if 'grid.type' not in cfg:
        raise ConfigError("missing key 'grid.type'")
    dim = cfg.get('grid.dim', int)
    grid_cfg = cfg.sub('grid')
    provider = GridProviderFactory.create(grid_cfg['type'], grid_cfg, dim)
    return provider, _periodic_dirs(cfg, dim)


def make_view(cfg):
    provider, periodic = make_grid(cfg)
    view = provider.leaf_view()
    if periodic is not None and any(periodic):
        view = view.periodic(periodic)
    return view


def make_function(cfg, dim):
    if not cfg.has_sub('function'):
        raise ConfigError("missing section 'function'")
    function_cfg = cfg.sub('function')
    if 'type' not in function_cfg:
        raise ConfigError("missing key 'function.type'")
    return FunctionsFactory.create(function_cfg['type'], function_cfg, dim)


def grid_info(cfg, args, out):
    provider, periodic = make_grid(cfg)
    print(f'dimension: {provider.dim}', file=out)
    for level in range(provider.max_level + 1):
        view = provider.level_view(level)
        counts = [view.size(c) for c in range(view.dim + 1)]
        if provider.max_level > 0:
            print(f'level {level}:', file=out)
        print(f'cells: {counts[0]}', file=out)
        if view.dim > 1:
            print(f'faces: {counts[1]}', file=out)
        print(f'vertices: {counts[-1]}', file=out)
        if periodic is not None:
            pview = view.periodic(periodic) if any(periodic) else view
            if view.dim > 1:
                print(f'faces (periodic): {pview.size(1)}', file=out)
            print(f'vertices (periodic): {pview.size(view.dim)}', file=out)
    return EXIT_OK


def project(cfg, args, out):
    view = make_view(cfg)
    f = make_function(cfg, view.dim)
    space = DgSpace(view, cfg.get('space.order', int, 1))
    solver_type = cfg.get('solver.type', str, None)
    registry = timings()
    registry.reset()
    registry.threads = _default_threads() if args.parallel else 1
    try:
        with registry.scoped('project'):
            with registry.scoped('project.assemble'):
                systems = assemble_local_systems(f, space, args.parallel)
            with registry.scoped('project.solve'):
                dofs = solve_local_systems(systems, space, solver_type)
    finally:
        os.makedirs(args.output_dir, exist_ok=True)
        with open(os.path.join(args.output_dir, 'timings.csv'), 'w') as csv:
            registry.output_all_measures(csv)
    f_h = DiscreteFunction(space, dofs, 'projection')
    difference = f - f_h
    error = l2_norm(difference, view, 2 * max(space.order, f.order) + 2, args.parallel)
    print(f'cells: {view.size(0)}', file=out)
    print(f'dofs: {space.num_dofs}', file=out)
    print(f'l2 error: {error!r}', file=out)
    if cfg.get('visualize.enabled', bool, False):
        for name, g in (('source', f), ('projection', f_h), ('difference', difference)):
            path = visualize(g, view, name, os.path.join(args.output_dir, f'{name}.vtk'))
            print(f'wrote {path}', file=out)
    return EXIT_OK


def assemble_mass_system(f, space, parallel=False):
    """Global block diagonal mass matrix (CSR) and load vector of ``f``."""
    size = space.basis_size
    pattern = SparsityPattern(space.num_dofs)
    for c in range(space.view.size(0)):
        for i in range(c * size, (c + 1) * size):
            for j in range(c * size, (c + 1) * size):
                pattern.insert(i, j)
    matrix = CsrMatrix(space.num_dofs, space.num_dofs, pattern)
    rhs = DenseVector(space.num_dofs)
    systems = assemble_local_systems(f, space, parallel)

    def scatter(cell):
        local_matrix, local_vector = systems[space.view.index(cell)]
        indices = space.global_indices(cell)
        for a, i in enumerate(indices):
            rhs.set_entry(i, local_vector[a])
            for b, j in enumerate(indices):
                matrix.set_entry(i, j, local_matrix.get_entry(a, b))

    walker = Walker(space.view)
    walker.add(Codim0Lambda(scatter))
    walker.walk()
    return matrix, rhs


def solve_mass(cfg, args, out):
    view = make_view(cfg)
    f = make_function(cfg, view.dim)
    space = DgSpace(view, cfg.get('space.order', int, 0))
    solver_type = cfg.get('solver.type', str, SPARSE_TYPES[0])
    matrix, rhs = assemble_mass_system(f, space, args.parallel)
    solution = DenseVector(space.num_dofs)
    stats = Solver(matrix).apply(rhs, solution, solver_type)
    residual = matrix.mv(solution) - rhs
    relative = residual.l2_norm() / max(rhs.l2_norm(), np.finfo(float).tiny)
    print(f'solver: {stats.type}', file=out)
    print(f'iterations: {stats.iterations}', file=out)
    print(f'relative residual: {relative!r}', file=out)
    print(f'solution mean: {solution.mean()!r}', file=out)
    return EXIT_OK


COMMANDS = {'grid-info': grid_info, 'project': project, 'solve-mass': solve_mass}


def main(argv=None, out=None, err=None):
    """Run the command line interface and return the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config, args.overrides)
        return COMMANDS[args.command](cfg, args, out)
    except UsageError as e:
        print(f'usage error: {e}', file=err)
        return EXIT_USAGE
    except (ConfigError, ParseError) as e:
        print(f'configuration error: {e}', file=err)
        return EXIT_CONFIG
    except SolverFailure as e:
        print(f'solver failure ({e.kind}): {e}', file=err)
        return EXIT_NUMERICAL
    except ProjectionError as e:
        print(f'projection failure: {e}', file=err)
        return EXIT_NUMERICAL


def run():
    sys.exit(main())
