import io
import os
import subprocess
import sys

import pytest

from xtkit.cli import main

GRID = """[grid]
type = xt.grid.gridprovider.cube
dim = 2
lower_left = [0 0 0 0]
upper_right = [1 1 1 1]
num_elements = [8 8 8 8]
"""

PROJECT = GRID + """
[function]
type = xt.functions.expression
variable = x
order = 1
expression = x[0]

[space]
order = 1
"""


def run(tmp_path, text, *args):
    config = tmp_path / 'config.ini'
    config.write_text(text)
    out, err = io.StringIO(), io.StringIO()
    code = main([args[0], '--config', str(config), '--output-dir', str(tmp_path / 'out'), *args[1:]], out, err)
    return code, out.getvalue(), err.getvalue()


def report_value(out, key):
    for line in out.splitlines():
        if line.startswith(key + ':'):
            return line.split(':', 1)[1].strip()
    raise KeyError(key)


def test_grid_info(tmp_path):
    code, out, _ = run(tmp_path, GRID, 'grid-info')
    assert code == 0
    assert 'cells: 64' in out.splitlines()
    assert report_value(out, 'vertices') == '81'
    code, out, _ = run(tmp_path, GRID, 'grid-info', '--set', 'grid.num_elements=[4 4]', '--set', 'grid.periodic=[1 1]')
    assert code == 0
    assert 'vertices (periodic): 16' in out.splitlines()


def test_grid_info_refinements(tmp_path):
    code, out, _ = run(tmp_path, GRID, 'grid-info', '--set', 'grid.num_refinements=1')
    assert code == 0
    assert 'cells: 256' in out.splitlines()


def test_config_errors(tmp_path):
    code, _, err = run(tmp_path, GRID.replace('type = xt.grid.gridprovider.cube\n', ''), 'grid-info')
    assert code == 2 and 'grid.type' in err
    code, _, err = run(tmp_path, GRID, 'grid-info', '--set', 'grid.num_elements=[8]')
    assert code == 2 and 'num_elements' in err
    code, _, err = run(tmp_path, GRID, 'project')
    assert code == 2 and 'function' in err
    code, _, _ = run(tmp_path, 'not an ini file', 'grid-info')
    assert code == 2
    out, err = io.StringIO(), io.StringIO()
    assert main(['grid-info', '--config', str(tmp_path / 'missing.ini')], out, err) == 2


def test_usage_errors(tmp_path):
    err = io.StringIO()
    assert main(['bogus'], io.StringIO(), err) == 1
    assert main(['project'], io.StringIO(), err) == 1
    code, _, _ = run(tmp_path, GRID, 'grid-info', '--set', 'no_equals_sign')
    assert code == 1


def test_project_polynomial(tmp_path):
    code, out, _ = run(tmp_path, PROJECT, 'project')
    assert code == 0
    assert float(report_value(out, 'l2 error')) <= 1e-10
    csv = (tmp_path / 'out' / 'timings.csv').read_text()
    assert csv.startswith('threads,ranks,')
    header = csv.splitlines()[0].split(',')
    assert 'project_avg_wall' in header and 'project.assemble_avg_wall' in header
    assert 'project.solve_max_sys' in header
    assert not (tmp_path / 'out' / 'projection.vtk').exists()


def test_project_convergence(tmp_path):
    text = PROJECT.replace('expression = x[0]', 'expression = sin(pi*x[0])').replace('order = 1\nexpr', 'order = 5\nexpr')
    errors = []
    for n in (8, 16):
        code, out, _ = run(tmp_path, text, 'project', '--set', f'grid.num_elements=[{n} {n}]')
        assert code == 0
        errors.append(float(report_value(out, 'l2 error')))
    assert 3.2 <= errors[0] / errors[1] <= 4.8


def test_project_parallel_and_visualization(tmp_path):
    text = PROJECT.replace('expression = x[0]', 'expression = exp(x[0])*x[1]').replace('order = 1\nexpr', 'order = 4\nexpr')
    _, serial, _ = run(tmp_path, text, 'project')
    code, parallel, _ = run(tmp_path, text, 'project', '--parallel', '--set', 'visualize.enabled=true')
    assert code == 0
    assert abs(float(report_value(serial, 'l2 error')) - float(report_value(parallel, 'l2 error'))) <= 1e-13
    for name in ('source', 'projection', 'difference'):
        lines = (tmp_path / 'out' / f'{name}.vtk').read_text().splitlines()
        assert lines[0] == '# vtk DataFile Version 3.0' and f'SCALARS {name} double 1' in lines


def test_project_failure(tmp_path):
    code, _, err = run(tmp_path, PROJECT, 'project', '--set', 'solver.type=cg.diagonal')
    assert code == 3 and 'unknown_type' in err


def test_solve_mass(tmp_path):
    text = PROJECT.replace('expression = x[0]', 'expression = 1').replace('[space]\norder = 1', '[space]\norder = 0')
    code, out, _ = run(tmp_path, text, 'solve-mass', '--set', 'solver.type=cg.diagonal')
    assert code == 0
    assert report_value(out, 'solver') == 'cg.diagonal'
    assert int(report_value(out, 'iterations')) <= 64
    assert float(report_value(out, 'solution mean')) == pytest.approx(1., abs=1e-12)
    code, out, _ = run(tmp_path, PROJECT, 'solve-mass', '--set', 'solver.type=bicgstab.diagonal',
                       '--set', 'grid.num_elements=[4 4]')
    assert code == 0
    assert float(report_value(out, 'relative residual')) <= 1e-5
    code, out, _ = run(tmp_path, PROJECT, 'solve-mass')
    assert code == 0 and report_value(out, 'solver') == 'bicgstab.diagonal'


def test_solve_mass_unknown_type(tmp_path):
    code, _, err = run(tmp_path, PROJECT, 'solve-mass', '--set', 'solver.type=cg.unknown')
    assert code == 3 and 'unknown_type' in err


def test_module_entry_point(tmp_path):
    config = tmp_path / 'config.ini'
    config.write_text(GRID)
    result = subprocess.run([sys.executable, '-m', 'xtkit', 'grid-info', '--config', str(config)],
                            capture_output=True, text=True, env={**os.environ})
    assert result.returncode == 0 and 'cells: 64' in result.stdout
    result = subprocess.run([sys.executable, '-m', 'xtkit', 'unknown'], capture_output=True, text=True)
    assert result.returncode == 1
