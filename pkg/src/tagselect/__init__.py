"""tagselect: sentiment-balanced top-k tag selection.

Given a rule base linking item attribute values to sentiment-labeled tags,
pick the k tags for a user-item pair that satisfy the user's positive/
negative quota and a minimum-relevance bound while maximizing one of two
coverage objectives (sentiment-blind or both-sides).  Ships exhaustive,
branch-and-bound, and greedy solvers plus a benchmark harness.
"""

from .coverage import (
    DCGraph,
    EdgeLabel,
    build_dc_graph,
    cov_dc,
    cov_ic,
    edge_label,
    theta_dc,
)
from .errors import (
    AttributeOutOfRange,
    EmptyInstance,
    Infeasible,
    InfeasiblePolarity,
    InstanceTooLarge,
    NoData,
    RulesFileError,
    TagSelectError,
)
from .model import (
    Instance,
    Params,
    Rule,
    Selection,
    Sentiment,
    Tag,
    build_instance,
    make_params,
    split_budget,
    vectorize,
)
from .relevance import RelBenchmark, rel_max, rel_total, stepwise_rel_max
from .solvers import (
    Algorithm,
    SolveReport,
    bnb_dc,
    bnb_ic,
    exact_dc,
    exact_ic,
    greedy_dc,
    greedy_ic,
)

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "AttributeOutOfRange",
    "DCGraph",
    "EdgeLabel",
    "EmptyInstance",
    "Infeasible",
    "InfeasiblePolarity",
    "Instance",
    "InstanceTooLarge",
    "NoData",
    "Params",
    "RelBenchmark",
    "Rule",
    "RulesFileError",
    "Selection",
    "Sentiment",
    "SolveReport",
    "Tag",
    "TagSelectError",
    "bnb_dc",
    "bnb_ic",
    "build_dc_graph",
    "build_instance",
    "cov_dc",
    "cov_ic",
    "edge_label",
    "exact_dc",
    "exact_ic",
    "greedy_dc",
    "greedy_ic",
    "make_params",
    "rel_max",
    "rel_total",
    "split_budget",
    "stepwise_rel_max",
    "theta_dc",
    "vectorize",
]
