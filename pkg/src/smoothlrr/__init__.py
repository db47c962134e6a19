"""IRLS solvers for smoothed Schatten-p / l2,q low-rank representation and
inductive robust PCA, with synthetic benchmarks and segmentation scoring."""

import sys

from .errors import ConvergenceWarning
from .evaluation import (
    affinity_from_z,
    clustering_accuracy,
    segmentation_error,
    spectral_cluster,
)
from .irpca import (
    IrpcaConfig,
    apply_projection,
    irpca_objective,
    irpca_step,
    solve_irpca,
    update_irpca_weights,
)
from .linalg import (
    SymEigDecomposition,
    solve_sylvester,
    spectral_norm,
    sym_eig,
    sym_matrix_power,
)
from .lrr import (
    SolverConfig,
    WeightState,
    irls_step,
    lrr_gradient,
    solve_smoothed_lrr,
    stationarity_residual,
    update_weights,
)
from .norms import (
    LogPenalty,
    PowerPenalty,
    l12_norm,
    l2q_norm,
    lrr_objective,
    schatten_p,
    smoothed_group_lasso,
    smoothed_l2q,
    smoothed_lp_vector,
    smoothed_schatten,
    weight_group_lasso,
    weight_lp_vector,
)
from .synth import SubspaceDataset, gen_row_corrupted, gen_subspaces, random_rotation
from .trace import IterationRecord, SolveTrace

__version__ = "0.1.0"

__all__ = [
    name for name, obj in globals().items()
    if not name.startswith("_") and not isinstance(obj, type(sys))
]
