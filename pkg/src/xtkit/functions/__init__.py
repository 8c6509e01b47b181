from xtkit.functions.checkerboard import CheckerboardFunction
from xtkit.functions.combined import DifferenceFunction, ProductFunction, SumFunction, combine
from xtkit.functions.constant import ConstantFunction
from xtkit.functions.dg import (DgSpace, DiscreteFunction, MonomialLocalBasis, assemble_local_systems, discrete_fn,
                                l2_norm, l2_projection, solve_local_systems)
from xtkit.functions.expression import ExpressionFunction
from xtkit.functions.factory import FunctionsFactory, functions_factory_create
from xtkit.functions.global_lambda import GlobalLambdaFunction
from xtkit.functions.interfaces import (GlobalFunction, LocalFunctionInterface, LocalFunctionSetInterface,
                                        LocalizableFunctionInterface)
from xtkit.functions.mathexpr import ExpressionError, expr_eval, expr_parse
from xtkit.functions.quadrature import Quadrature, quadrature_rule
from xtkit.functions.vtk import visualize
from xtkit.grid.geometry import CellGeometry

constant_fn = ConstantFunction
checkerboard_fn = CheckerboardFunction
expression_fn = ExpressionFunction
lambda_fn = GlobalLambdaFunction
