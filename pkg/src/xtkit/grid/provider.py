"""Cube grid construction from configuration trees."""

import enum
from dataclasses import dataclass

from xtkit.common.config import ConfigTree, ValueKind
from xtkit.common.exceptions import ConfigError, FactoryError
from xtkit.grid.view import GridView

CUBE_ID = 'xt.grid.gridprovider.cube'


class Layers(enum.Enum):
    leaf = 'leaf'
    level = 'level'


@dataclass(frozen=True)
class CubeGridSpec:
    dim: int
    lower_left: tuple
    upper_right: tuple
    num_elements: tuple
    num_refinements: int = 0

    def __post_init__(self):
        if not 1 <= self.dim <= 3:
            raise ConfigError(f'dim has to be in [1, 3], got {self.dim}')
        for name in ('lower_left', 'upper_right', 'num_elements'):
            value = tuple(getattr(self, name))
            if len(value) != self.dim:
                raise ConfigError(f'{name} has {len(value)} entries, expected {self.dim}')
            object.__setattr__(self, name, value)
        for i, (lo, hi) in enumerate(zip(self.lower_left, self.upper_right)):
            if not hi > lo:
                raise ConfigError(f'upper_right[{i}] = {hi} has to be larger than lower_left[{i}] = {lo}')
        if any(int(n) != n or n < 1 for n in self.num_elements):
            raise ConfigError(f'num_elements has to be positive, got {list(self.num_elements)}')
        if self.num_refinements < 0:
            raise ConfigError(f'num_refinements has to be nonnegative, got {self.num_refinements}')


class GridProvider:
    """Holds a cube grid and hands out views of its levels."""

    def __init__(self, spec):
        self.spec = spec

    @property
    def dim(self):
        return self.spec.dim

    @property
    def max_level(self):
        return self.spec.num_refinements

    def level_view(self, level):
        return GridView(self.spec, level)

    def leaf_view(self):
        return GridView(self.spec, self.max_level)

    def layer(self, layer=Layers.leaf, level=0):
        layer = Layers(layer)
        if layer is Layers.leaf:
            return self.leaf_view()
        return self.level_view(level)

    def __repr__(self):
        return f'GridProvider({self.spec})'


def cube_gridprovider_default_config():
    cfg = ConfigTree()
    cfg['type'] = CUBE_ID
    cfg['lower_left'] = '[0 0 0 0]'
    cfg['upper_right'] = '[1 1 1 1]'
    cfg['num_elements'] = '[8 8 8 8]'
    cfg['num_refinements'] = '0'
    cfg['overlap'] = '[1 1 1 1]'
    return cfg


def make_cube_grid(cfg, dim):
    """Create a :class:`GridProvider` from ``cfg``; ``overlap`` is ignored."""
    if not isinstance(dim, int) or not 1 <= dim <= 3:
        raise ConfigError(f'dim has to be in [1, 3], got {dim!r}')
    spec = CubeGridSpec(dim,
                        cfg.get('lower_left', ValueKind.vector(dim)),
                        cfg.get('upper_right', ValueKind.vector(dim)),
                        cfg.get('num_elements', ValueKind.vector(dim, int)),
                        cfg.get('num_refinements', int, 0))
    return GridProvider(spec)


class GridProviderFactory:

    _creators = {CUBE_ID: (make_cube_grid, cube_gridprovider_default_config)}

    @classmethod
    def available(cls):
        return list(cls._creators)

    @classmethod
    def default_config(cls, type_id):
        if type_id not in cls._creators:
            raise FactoryError(type_id, cls.available(), 'grid provider')
        return cls._creators[type_id][1]()

    @classmethod
    def create(cls, type_id, cfg=None, dim=2):
        if type_id not in cls._creators:
            raise FactoryError(type_id, cls.available(), 'grid provider')
        if cfg is None:
            cfg = cls.default_config(type_id)
        return cls._creators[type_id][0](cfg, dim)


def grid_provider_factory_create(type_id, cfg, dim):
    return GridProviderFactory.create(type_id, cfg, dim)
