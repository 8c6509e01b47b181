"""Entities, intersections and (periodic) views of a structured tensor grid.

An entity of a ``d``-dimensional tensor grid is encoded by the set ``S`` of
directions it is collapsed in and integer coordinates ``c``: in direction
``i in S`` the entity sits at the node ``c_i`` (``0 <= c_i <= N_i``), in
all other directions it spans the cell interval ``c_i`` (``0 <= c_i <
N_i``).  Its codimension is ``|S|``; cells have ``S = ()`` and vertices
``S = (0, ..., d-1)``.

Entities of one codimension are enumerated group by group, the groups
ordered like :func:`itertools.combinations` of the directions, and
lexicographically within a group with direction 0 running fastest.  The
position in this enumeration is the entity's index.

A periodic view identifies the nodes ``0`` and ``N_i`` in each periodic
direction ``i``.  Its canonical entities are those with ``c_i < N_i`` for
all periodic ``i in S``, which leaves the cells untouched.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from xtkit.common.exceptions import UsageError
from xtkit.grid.geometry import CellGeometry

LOW, HIGH = 0, 1


@dataclass(frozen=True)
class TensorEntity:
    collapse: tuple
    coords: tuple
    level: int = 0

    @property
    def codim(self):
        return len(self.collapse)


@dataclass(frozen=True)
class Intersection:
    """Oriented face of ``inside`` in ``direction`` on ``side`` (``LOW``/``HIGH``)."""

    inside: TensorEntity
    direction: int
    side: int
    outside: TensorEntity = None
    periodic: bool = False
    unit_outer_normal: tuple = field(default=(), compare=False)
    center: tuple = field(default=(), compare=False)
    volume: float = field(default=0., compare=False)

    def boundary(self):
        return self.outside is None and not self.periodic

    def neighbor(self):
        return self.outside is not None

    @property
    def index_in_inside(self):
        return 2 * self.direction + self.side


def _flat_index(coords, extents):
    index, stride = 0, 1
    for c, n in zip(coords, extents):
        index += c * stride
        stride *= n
    return index


def _unflatten(index, extents):
    coords = []
    for n in extents:
        index, c = divmod(index, n)
        coords.append(c)
    return tuple(coords)


def _lex_coords(extents):
    for rev in itertools.product(*(range(n) for n in reversed(extents))):
        yield rev[::-1]


class GridView:
    """Read-only view of one refinement level of a cube grid.

    Parameters
    ----------
    spec
        The :class:`~xtkit.grid.provider.CubeGridSpec` of the grid.
    level
        Refinement level; the view has ``num_elements[i] * 2**level`` cells
        in direction ``i``.
    periodic_dirs
        Per-direction booleans; all ``False`` gives a plain view.
    """

    def __init__(self, spec, level=0, periodic_dirs=None):
        if not 0 <= level <= spec.num_refinements:
            raise UsageError(f'level {level} not in [0, {spec.num_refinements}]')
        self.spec = spec
        self.level = level
        self.dim = spec.dim
        self.num_elements = tuple(n * 2**level for n in spec.num_elements)
        self.lower_left = np.array(spec.lower_left, dtype=float)
        self.upper_right = np.array(spec.upper_right, dtype=float)
        self.widths = (self.upper_right - self.lower_left) / np.array(self.num_elements)
        if periodic_dirs is None:
            periodic_dirs = (False,) * self.dim
        periodic_dirs = tuple(bool(p) for p in periodic_dirs)
        if len(periodic_dirs) != self.dim:
            raise UsageError(f'expected {self.dim} periodicity flags, got {len(periodic_dirs)}')
        self.periodic_dirs = periodic_dirs
        self._groups = []
        for codim in range(self.dim + 1):
            groups, offset = [], 0
            for S in itertools.combinations(range(self.dim), codim):
                extents = self._extents(S)
                groups.append((S, extents, offset))
                offset += int(np.prod(extents))
            self._groups.append((groups, offset))
        self._group_by_set = {S: (ext, off) for groups, _ in self._groups for S, ext, off in groups}

    def __repr__(self):
        kind = 'PeriodicGridView' if self.is_periodic else 'GridView'
        return f'{kind}(level={self.level}, num_elements={self.num_elements}, periodic={self.periodic_dirs})'

    @property
    def is_periodic(self):
        return any(self.periodic_dirs)

    def _extents(self, S):
        return tuple(n + (1 if (i in S and not self.periodic_dirs[i]) else 0)
                     for i, n in enumerate(self.num_elements))

    # --- views ---
    def periodic(self, periodic_dirs=None):
        """Periodic view on the same level; all directions periodic by default."""
        if self.is_periodic:
            raise UsageError('periodic views can only be created from plain views')
        if periodic_dirs is None:
            periodic_dirs = (True,) * self.dim
        return GridView(self.spec, self.level, periodic_dirs)

    def plain(self):
        return self if not self.is_periodic else GridView(self.spec, self.level)

    # --- index sets ---
    def _check_codim(self, codim):
        if not 0 <= codim <= self.dim:
            raise UsageError(f'codim {codim} not in [0, {self.dim}]')

    def size(self, codim):
        self._check_codim(codim)
        return self._groups[codim][1]

    def entities(self, codim=0):
        """Iterate the (canonical) entities of ``codim`` in index order."""
        self._check_codim(codim)
        for S, extents, _ in self._groups[codim][0]:
            for coords in _lex_coords(extents):
                yield TensorEntity(S, coords, self.level)

    def cells(self):
        return self.entities(0)

    def canonical(self, entity):
        """The representative of ``entity``'s periodic equivalence class."""
        self._validate(entity)
        if not self.is_periodic:
            return entity
        coords = tuple(0 if (i in entity.collapse and self.periodic_dirs[i] and c == self.num_elements[i]) else c
                       for i, c in enumerate(entity.coords))
        return entity if coords == entity.coords else TensorEntity(entity.collapse, coords, entity.level)

    def _validate(self, entity):
        if entity.level != self.level or len(entity.coords) != self.dim:
            raise UsageError(f'{entity} does not belong to {self}')
        for i, (c, n) in enumerate(zip(entity.coords, self.num_elements)):
            upper = n if i in entity.collapse else n - 1
            if not 0 <= c <= upper:
                raise UsageError(f'{entity} does not belong to {self}')

    def index(self, entity):
        entity = self.canonical(entity)
        extents, offset = self._group_by_set[entity.collapse]
        return offset + _flat_index(entity.coords, extents)

    def entity(self, codim, index):
        """Inverse of :meth:`index`."""
        self._check_codim(codim)
        if not 0 <= index < self.size(codim):
            raise UsageError(f'index {index} out of range for codim {codim}')
        for S, extents, offset in self._groups[codim][0]:
            count = int(np.prod(extents))
            if index < offset + count:
                return TensorEntity(S, _unflatten(index - offset, extents), self.level)

    def cell(self, coords):
        cell = TensorEntity((), tuple(int(c) for c in coords), self.level)
        self._validate(cell)
        return cell

    # --- geometry ---
    def node(self, direction, c):
        """Physical coordinate of node ``c`` in ``direction``."""
        if c == self.num_elements[direction]:
            return float(self.upper_right[direction])
        return float(self.lower_left[direction] + c * self.widths[direction])

    def geometry(self, cell):
        """The :class:`CellGeometry` of a codim 0 entity."""
        if cell.codim != 0:
            raise UsageError('geometry() is only available for cells')
        lower = [self.node(i, c) for i, c in enumerate(cell.coords)]
        upper = [self.node(i, c + 1) for i, c in enumerate(cell.coords)]
        return CellGeometry(lower, np.subtract(upper, lower))

    def center(self, entity):
        return tuple(self.node(i, c) if i in entity.collapse
                     else 0.5 * (self.node(i, c) + self.node(i, c + 1))
                     for i, c in enumerate(entity.coords))

    def volume(self, entity):
        return float(np.prod([self.node(i, c + 1) - self.node(i, c)
                              for i, c in enumerate(entity.coords) if i not in entity.collapse]))

    # --- intersections ---
    def intersections(self, cell):
        """All ``2 * dim`` intersections of ``cell``, ordered by ``index_in_inside``."""
        if cell.codim != 0:
            raise UsageError('intersections() requires a cell')
        result = []
        for d in range(self.dim):
            for side in (LOW, HIGH):
                result.append(self.intersection(cell, d, side))
        return result

    def intersection(self, cell, direction, side):
        n = self.num_elements[direction]
        c = cell.coords[direction]
        neighbor = c - 1 if side == LOW else c + 1
        periodic = False
        if not 0 <= neighbor < n:
            if self.periodic_dirs[direction]:
                neighbor %= n
                periodic = True
                outside = TensorEntity((), cell.coords[:direction] + (neighbor,) + cell.coords[direction + 1:],
                                       cell.level)
            else:
                outside = None
        else:
            outside = TensorEntity((), cell.coords[:direction] + (neighbor,) + cell.coords[direction + 1:],
                                   cell.level)
        normal = [0.] * self.dim
        normal[direction] = -1. if side == LOW else 1.
        face = self.face(cell, direction, side)
        return Intersection(cell, direction, side, outside, periodic, tuple(normal),
                            self.center(face), self.volume(face))

    def face(self, cell, direction, side):
        """The codim 1 entity (in plain numbering) underlying an intersection."""
        coords = list(cell.coords)
        coords[direction] += side
        return TensorEntity((direction,), tuple(coords), cell.level)


def periodic_view(base, periodic_dirs=None):
    return base.periodic(periodic_dirs)
