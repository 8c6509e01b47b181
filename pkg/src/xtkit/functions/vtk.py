"""Legacy VTK (ASCII, rectilinear grid) output of cell data."""

import numpy as np

from xtkit.common.exceptions import UsageError
from xtkit.common.strings import format_value


def vtk_text(view, values, name):
    if view.dim > 3:
        raise UsageError('VTK output supports at most three dimensions')
    if not name or any(c.isspace() for c in name):
        raise ValueError(f'invalid VTK data name {name!r}')
    values = list(values)
    if len(values) != view.size(0):
        raise ValueError(f'{len(values)} cell values given for {view.size(0)} cells')
    counts = [n + 1 for n in view.num_elements] + [1] * (3 - view.dim)
    lines = ['# vtk DataFile Version 3.0', name, 'ASCII', 'DATASET RECTILINEAR_GRID',
             'DIMENSIONS ' + ' '.join(str(c) for c in counts)]
    for axis, label in enumerate('XYZ'):
        coords = [view.node(axis, c) for c in range(counts[axis])] if axis < view.dim else [0.]
        lines.append(f'{label}_COORDINATES {len(coords)} double')
        lines.append(' '.join(format_value(c) for c in coords))
    lines += [f'CELL_DATA {len(values)}', f'SCALARS {name} double 1', 'LOOKUP_TABLE default']
    lines += [format_value(float(v)) for v in values]
    return '\n'.join(lines) + '\n'


def cell_center_values(f, view):
    center = np.full(view.dim, 0.5)
    return [float(f.local_function(view, cell).evaluate(center)) for cell in view.cells()]


def visualize(f, view, name, path):
    """Write the values of the scalar function ``f`` at all cell centers of ``view`` to ``path``."""
    if not f.is_scalar:
        raise UsageError(f"only scalar functions can be visualized, '{f.name}' has range {f.range_shape}")
    text = vtk_text(view, cell_center_values(f, view), name)
    with open(path, 'w') as file:
        file.write(text)
    return path
