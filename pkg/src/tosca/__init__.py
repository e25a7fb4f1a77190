"""Transfer-operator spectral clustering for directed and undirected graphs."""

from .baselines import SymmetrizedMatrix, ddbs_cluster, herm_cluster, symmetrize
from .clustering import (
    Clustering,
    KMeansConfig,
    cluster_graph,
    coherence_score,
    kmeans,
)
from .datadriven import (
    EmpiricalGrams,
    EstimatedOperators,
    WalkSample,
    empirical_grams,
    estimated_operators,
    read_walks,
    sample_pairs,
    sample_trajectory,
    write_walks,
)
from .galerkin import Basis, ReducedOperator, indicator_basis, project, reduced_eigenfunctions
from .generators import DSBMParams, SweepRow, dsbm_sample, two_block_sweep
from .graph import (
    DegreeInfo,
    Graph,
    TransitionMatrix,
    add_self_loops,
    degree_info,
    from_edge_list,
    lazy_chain,
    read_edge_list,
    read_matrix_market,
    reorder_by_cluster,
    transition_matrix,
    write_edge_list,
    write_matrix_market,
)
from .metrics import adjusted_rand_index, contingency_table, misclassified_fraction
from .operators import (
    Density,
    OperatorMatrix,
    backward_forward,
    covariance_matrices,
    forward_backward,
    image_density,
    koopman,
    perron_frobenius,
    reweighted,
    stationary_density,
    uniform_density,
)
from .spectral import (
    KoopmanSpectrum,
    SpectrumResult,
    embed_coordinates,
    fb_spectrum,
    koopman_spectrum,
    spectral_gap,
)

__version__ = "0.1.0"
