"""Prioritized pairwise test-suite generation for software product lines."""

from .baselines import PpgsParams, ppgs, sampled_greedy, weighted_greedy
from .cmsa import (
    CmsaParams,
    CmsaResult,
    adapt,
    order_suite,
    probabilistic_solution,
    run_cmsa,
)
from .model import (
    FeatureModel,
    enumerate_valid_products,
    is_valid_product,
    parse_model,
    serialize,
)
from .pairs import (
    ConfigurationSet,
    Pair,
    PrioritizedProduct,
    configurations_of,
    coverage,
    derive_configurations,
    make_pair,
    products_to_levels,
    read_prioritized_products,
)
from .sampling import best_product, random_valid_product
from .setcover import CoverInstance, CoverSolution, solve_min_cover

__version__ = "0.1.0"

__all__ = [
    "CmsaParams",
    "CmsaResult",
    "ConfigurationSet",
    "CoverInstance",
    "CoverSolution",
    "FeatureModel",
    "Pair",
    "PpgsParams",
    "PrioritizedProduct",
    "adapt",
    "best_product",
    "configurations_of",
    "coverage",
    "derive_configurations",
    "enumerate_valid_products",
    "is_valid_product",
    "make_pair",
    "order_suite",
    "parse_model",
    "ppgs",
    "probabilistic_solution",
    "products_to_levels",
    "random_valid_product",
    "read_prioritized_products",
    "run_cmsa",
    "sampled_greedy",
    "serialize",
    "solve_min_cover",
    "weighted_greedy",
]
