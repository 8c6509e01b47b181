from xtkit.grid.boundaryinfo import (AllDirichletBoundaryInfo, AllNeumannBoundaryInfo, BoundaryInfoFactory,
                                     BoundaryType, DirichletBoundary, NeumannBoundary, NoBoundary,
                                     NormalBasedBoundaryInfo, RobinBoundary, boundary_info_factory_create,
                                     boundary_type)
from xtkit.grid.geometry import CellGeometry
from xtkit.grid.provider import (CubeGridSpec, GridProvider, GridProviderFactory, Layers,
                                 cube_gridprovider_default_config, grid_provider_factory_create, make_cube_grid)
from xtkit.grid.search import EntityInlevelSearch, entity_search
from xtkit.grid.view import HIGH, LOW, GridView, Intersection, TensorEntity, periodic_view
from xtkit.grid.walker import (ApplyOn, Codim0And1Functor, Codim0Functor, Codim0Lambda, Codim1Functor,
                               Codim1Lambda, Walker)
