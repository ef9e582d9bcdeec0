"""Server-side choice of processor counts for submitted jobs.

Each job's defensible processor counts come from its running-time and
utility models and the provider's price surface; the batch allocation is a
versioned-item knapsack solved by pseudo-polynomial DP.
"""
from .kvip import (
    Allocation,
    ApInstance,
    KvipInstance,
    Selection,
    ap_to_kvip,
    kvip_bruteforce,
    kvip_decision,
    kvip_optimize,
    prune_dominated,
    reduce_kvip_to_ap,
    solve_ap,
)
from .mediator import (
    ClusterState,
    PricingController,
    RoundTrace,
    Scenario,
    adjust_price,
    run_scenario,
    step,
)
from .models import (
    INF,
    Constant,
    ConstantK,
    DomainError,
    EvenSplit,
    Grid,
    ImpulseTrain,
    Job,
    LinearKTN,
    PiecewiseConstant,
    PowerLaw,
    StepToInfinity,
    Table,
    ThresholdUtility,
    eval_coi,
    eval_running_time,
    job_cost,
    prefers,
    saturation_point,
    utility_integral,
)
from .optimal import (
    Ex4Params,
    OptimalSet,
    analytic_optimal_set,
    ex4_plateau,
    optimal_n,
    optimal_set,
    threshold_utility,
)

__version__ = "0.1.0"
