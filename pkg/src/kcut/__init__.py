"""Minimum k-cut solver built on random edge contraction."""

__version__ = "0.1.0"

from .multigraph import (  # noqa: E402
    DisconnectedGraphError,
    GraphError,
    KCut,
    TwoCut,
    WeightedMultigraph,
    atoms,
    contract_edge,
    from_edge_list,
    generated_cut,
    weight_of_cut,
)
from .contraction import (  # noqa: E402
    AnalysisParams,
    ProcessTrace,
    Rng,
    contraction_process,
    estimate_survival,
    final_random_k_cut,
    run_contraction,
    sample_edge,
)
from .recursive import (  # noqa: E402
    CutFamily,
    Schedule,
    SolverConfig,
    build_schedule,
    enumerate_near_min_cuts,
    recursive_contract,
    solve_min_k_cut,
)
from .oracle import (  # noqa: E402
    CutStats,
    check_extremal_predicates,
    classify_two_cuts,
    enumerate_k_partitions,
    exact_lambda_k,
    medium_cut_census,
)
from .sunflower import (  # noqa: E402
    SetFamily,
    Sunflower,
    erdos_rado_threshold,
    find_many_sunflowers,
    find_sunflower,
    find_sunflower_nonempty_core,
)
from .analysis import (  # noqa: E402
    F_inequality_check,
    check_expected_r_bound,
    f_bound,
    f_properties_check,
    g_ode_solution,
    karger_stein_bound,
    survival_lower_bound,
)
