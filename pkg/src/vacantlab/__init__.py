"""Random walks on random regular graphs: vacant set and vacant net."""

from .graphgen import (DegreeSequence, GraphStats, HalfEdgeGraph, SamplingError, estimate_lambda2,
                       graph_stats, is_simple, nice_depth, nice_vertices, read_edge_list,
                       sample_regular_configuration, sample_simple_regular,
                       sample_with_degree_sequence, write_edge_list)
from .harness import (AggregateReport, ExperimentConfig, cover_time_study, run_experiment,
                      threshold_scan, validate)
from .structure import (ComponentSummary, Criticality, CriticalityConfig, MomentVector, Phase,
                        RedDegreeHistogram, classify, components, molloy_reed_L, q_statistic,
                        r_statistic, red_moments, scaling_window_probe, vacant_net_subgraph,
                        vacant_set_subgraph)
from .theory import (PredictionRecord, Target, WalkModel, alpha, cover_time, edge_process_Nk,
                     expected_size, mixing_time_bound, pairs_process, survival, threshold,
                     threshold_from_rates, unvisit_rate)
from .walks import (VisitTracker, WalkKind, WalkState, cover_times, extend_pairing_for_vacant_set,
                    init_walk, run_to, step, walk_generate)

__version__ = "0.1.0"
