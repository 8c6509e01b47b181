from xtkit.la.container import (ContainerInterface, CsrMatrix, DenseMatrix, DenseVector, MatrixInterface,
                                assemble_lincomb, deep_copy_count)
from xtkit.la.pattern import SparsityPattern
from xtkit.la.solver import (DENSE_TYPES, SPARSE_TYPES, FailureKind, Solver, SolverFailure, SolverStatistics,
                             solver_apply, solver_options, solver_types)
