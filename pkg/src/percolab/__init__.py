"""Edge percolation on d-regular pseudo-random graphs.

Build host graphs, sample G_p / G_m subgraphs, census their components and
compare against the analytic predictions in :mod:`percolab.theory`.
"""

from .census import (
    ComponentCensus,
    ComponentRecord,
    census,
    count_trees_tk,
    giant_ratio,
    isolated_tree_spectrum,
)
from .generators import GeneratorSpec, gen_complete, gen_fixture, gen_paley, gen_random_regular, generate
from .graph import Graph, build_graph, edge_between, read_graph, write_graph
from .harness import ExperimentConfig, ExperimentReport, run_experiment, sweep_alpha
from .percolation import (
    PercolationSample,
    alpha_to_m,
    alpha_to_p,
    derive_seed,
    percolate,
    percolate_m,
    percolate_m_prefix,
    percolate_p,
)
from .spectral import MixingReport, SpectralEstimate, estimate_lambda, mixing_check
from .theory import TheoryProfile, profile, solve_alpha_bar

__version__ = "0.1.0"
