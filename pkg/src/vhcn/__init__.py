"""Capacity planning and QoE feasibility for very high capacity networks."""

from .contention import (
    ContentionScenario,
    per_connected_user_rate,
    per_user_bitrate,
    project_demand,
    required_link_capacity,
)
from .edge_cache import CacheNode, cache_efficiency, cache_speedup, upstream_bandwidth, upstream_reduction
from .errors import (
    ComputationError,
    EmptyCatalogError,
    NoBoundaryError,
    ParameterError,
    ScenarioParseError,
    ScenarioValidationError,
    VhcnError,
)
from .pon_dim import (
    ActiveUserDistribution,
    PonScenario,
    PonStandard,
    b_percentile,
    binomial_cdf,
    connected_users,
    default_standards,
    monte_carlo_b_percentile,
    percentile_active,
    prob_full_speed,
    table1,
)
from .qoe_model import (
    NetworkPath,
    critical_rtt,
    distance_metric,
    effective_throughput,
    mathis_throughput,
    required_plr,
    required_rtt,
)
from .service_plane import (
    LimitingFactor,
    Region,
    RegionVerdict,
    ServiceRequirement,
    boundary_curve,
    catalog_report,
    classify_service,
)
from .units import UNBOUNDED

__version__ = "0.1.0"
