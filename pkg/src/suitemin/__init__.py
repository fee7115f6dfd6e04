"""Multi-goal test-suite minimisation for simulation-based testing.

Signal anti-pattern metrics, the effectiveness-matrix objective model,
binary/continuous domination, the DoLesS selector (goal sampling plus
inverted box-constrained least squares), an NSGA-II baseline and the
TET/MS + Scott-Knott evaluation used to compare them.
"""

from suitemin.boxlsq import BoxLsqResult, SolverError, solve_box_tikhonov, solve_box_tikhonov_many
from suitemin.data_io import (
    Dataset,
    DatasetParseError,
    DatasetValidationError,
    SimulationCase,
    SynthConfig,
    effectiveness_matrix,
    load_dataset,
    save_dataset,
    synth_dataset,
)
from suitemin.doless import (
    DolessConfig,
    DolessResult,
    EmptySelectionError,
    doless_run,
    pareto_front,
    sample_goal_population,
    solve_selection,
    threshold,
)
from suitemin.domination import binary_dominates, cdom_prefers, domination_score, select_best
from suitemin.kernels import BACKEND
from suitemin.nsga2 import NSGA2Config, PairwiseResult, crowding_distance, goal_subsets, nondominated_sort, nsga2, pairwise_nsga2
from suitemin.objectives import GOAL_WEIGHTS, GOALS, EffectivenessMatrix, Selection, build_matrix, suite_objectives
from suitemin.signals import (
    SignalTrace,
    discontinuity_score,
    infinity_score,
    instability_score,
    minmax_score,
    normalize_per_test,
)
from suitemin.stats import cliffs_delta, evaluate_front, mutation_score, normalized_tet, scott_knott

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoxLsqResult",
    "Dataset",
    "DatasetParseError",
    "DatasetValidationError",
    "DolessConfig",
    "DolessResult",
    "EffectivenessMatrix",
    "EmptySelectionError",
    "GOALS",
    "GOAL_WEIGHTS",
    "NSGA2Config",
    "PairwiseResult",
    "Selection",
    "SignalTrace",
    "SimulationCase",
    "SolverError",
    "SynthConfig",
    "binary_dominates",
    "build_matrix",
    "cdom_prefers",
    "cliffs_delta",
    "crowding_distance",
    "discontinuity_score",
    "doless_run",
    "domination_score",
    "effectiveness_matrix",
    "evaluate_front",
    "goal_subsets",
    "infinity_score",
    "instability_score",
    "load_dataset",
    "minmax_score",
    "mutation_score",
    "nondominated_sort",
    "normalize_per_test",
    "normalized_tet",
    "nsga2",
    "pairwise_nsga2",
    "pareto_front",
    "sample_goal_population",
    "save_dataset",
    "scott_knott",
    "select_best",
    "solve_box_tikhonov",
    "solve_box_tikhonov_many",
    "solve_selection",
    "suite_objectives",
    "synth_dataset",
    "threshold",
]
