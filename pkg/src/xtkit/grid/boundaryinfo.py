"""Classification of boundary intersections."""

from dataclasses import dataclass

import numpy as np

from xtkit.common.config import ConfigTree, ValueKind
from xtkit.common.exceptions import ConfigError, FactoryError
from xtkit.common.float_cmp import CompareStyle, vector_float_compare


@dataclass(frozen=True)
class BoundaryType:
    """Boundary types compare equal iff their ids are equal."""

    id: str

    def __str__(self):
        return self.id


DirichletBoundary = BoundaryType('dirichlet boundary')
NeumannBoundary = BoundaryType('neumann boundary')
RobinBoundary = BoundaryType('robin boundary')
NoBoundary = BoundaryType('no boundary')

_BY_NAME = {'dirichlet': DirichletBoundary, 'neumann': NeumannBoundary, 'robin': RobinBoundary}


class BoundaryInfo:

    def type(self, intersection):
        if not intersection.boundary():
            return NoBoundary
        return self._boundary_type(intersection)

    def _boundary_type(self, intersection):
        raise NotImplementedError


class AllDirichletBoundaryInfo(BoundaryInfo):
    type_id = 'xt.grid.boundaryinfo.alldirichlet'

    def _boundary_type(self, intersection):
        return DirichletBoundary


class AllNeumannBoundaryInfo(BoundaryInfo):
    type_id = 'xt.grid.boundaryinfo.allneumann'

    def _boundary_type(self, intersection):
        return NeumannBoundary


class NormalBasedBoundaryInfo(BoundaryInfo):
    """Select the boundary type by the outward unit normal of an intersection.

    ``rules`` is a sequence of ``(BoundaryType, normal)`` pairs, tried in
    order; rule normals are normalized and compared componentwise to the
    unit outer normal with an absolute tolerance.  Unmatched boundary
    intersections get ``default``.
    """

    type_id = 'xt.grid.boundaryinfo.normalbased'

    def __init__(self, default=DirichletBoundary, rules=(), tolerance=1e-10):
        self.default = default
        self.tolerance = tolerance
        self._style = CompareStyle('absolute', eps_abs=tolerance)
        self.rules = []
        for boundary_type, normal in rules:
            normal = np.asarray(normal, dtype=float)
            norm = np.linalg.norm(normal)
            if norm == 0:
                raise ConfigError(f'zero normal given for {boundary_type}')
            self.rules.append((boundary_type, normal / norm))

    def _boundary_type(self, intersection):
        n = intersection.unit_outer_normal
        for boundary_type, normal in self.rules:
            if vector_float_compare(normal, n, self._style):
                return boundary_type
        return self.default


def _normal_based_from_config(cfg, dim):
    default_name = cfg.get('default', str, 'dirichlet')
    if default_name not in _BY_NAME:
        raise ConfigError(f"invalid default boundary '{default_name}', use one of {list(_BY_NAME)}")
    rules = []
    for name, boundary_type in _BY_NAME.items():
        k = 0
        while f'{name}.{k}' in cfg:
            kind = ValueKind.vector(dim) if dim else ValueKind.vector()
            rules.append((boundary_type, cfg.get(f'{name}.{k}', kind)))
            k += 1
        stray = [key for key in cfg if key.startswith(name + '.') and key[len(name) + 1:].isdigit()
                 and int(key[len(name) + 1:]) >= k]
        if stray:
            raise ConfigError(f"keys '{name}.k' have to be consecutive from 0, found {stray}")
    return NormalBasedBoundaryInfo(_BY_NAME[default_name], rules, cfg.get('tolerance', float, 1e-10))


class BoundaryInfoFactory:

    _creators = {
        AllDirichletBoundaryInfo.type_id: lambda cfg, dim: AllDirichletBoundaryInfo(),
        AllNeumannBoundaryInfo.type_id: lambda cfg, dim: AllNeumannBoundaryInfo(),
        NormalBasedBoundaryInfo.type_id: _normal_based_from_config,
    }

    @classmethod
    def available(cls):
        return list(cls._creators)

    @classmethod
    def default_config(cls, type_id=AllDirichletBoundaryInfo.type_id):
        if type_id not in cls._creators:
            raise FactoryError(type_id, cls.available(), 'boundary info')
        cfg = ConfigTree(type=type_id)
        if type_id == NormalBasedBoundaryInfo.type_id:
            cfg['default'] = 'dirichlet'
        return cfg

    @classmethod
    def create(cls, cfg, dim=None):
        """Create a boundary info from ``cfg['type']``.

        ``dim`` truncates rule normals to the grid dimension.
        """
        type_id = cfg.get('type')
        if type_id not in cls._creators:
            raise FactoryError(type_id, cls.available(), 'boundary info')
        return cls._creators[type_id](cfg, dim)


def boundary_info_factory_create(cfg, dim=None):
    return BoundaryInfoFactory.create(cfg, dim)


def boundary_type(info, intersection):
    return info.type(intersection)
