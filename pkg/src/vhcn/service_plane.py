"""Bandwidth/latency service plane: classify services against a path."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import EmptyCatalogError, VhcnError, check
from .qoe_model import (
    DEFAULT_MATHIS_C,
    DEFAULT_MSS,
    NetworkPath,
    critical_rtt,
    effective_throughput,
    is_rate_limited,
)


class Region(enum.Enum):
    BIT_RATE_LIMITED = "bit-rate limited"
    LATENCY_LIMITED = "latency limited"


class LimitingFactor(enum.Enum):
    NONE = "none"
    BANDWIDTH_SHORTFALL = "bandwidth shortfall"
    LATENCY_EXCEEDED = "latency exceeded"
    BOTH = "both"


@dataclass(frozen=True)
class ServiceRequirement:
    name: str
    min_bandwidth: float  # bit/s
    max_latency: float  # s

    def __post_init__(self):
        check(self.min_bandwidth > 0, "min_bandwidth", self.min_bandwidth, "a positive rate in bit/s")
        check(self.max_latency > 0, "max_latency", self.max_latency, "a positive time in seconds")


@dataclass(frozen=True)
class RegionVerdict:
    region: Region
    feasible: bool
    achieved_throughput: float
    limiting_factor: LimitingFactor


def classify_service(svc: ServiceRequirement, path: NetworkPath) -> RegionVerdict:
    achieved = effective_throughput(path)
    region = Region.BIT_RATE_LIMITED if is_rate_limited(path) else Region.LATENCY_LIMITED
    short = achieved < svc.min_bandwidth
    late = path.rtt > svc.max_latency
    if short and late:
        factor = LimitingFactor.BOTH
    elif short:
        factor = LimitingFactor.BANDWIDTH_SHORTFALL
    elif late:
        factor = LimitingFactor.LATENCY_EXCEEDED
    else:
        factor = LimitingFactor.NONE
    return RegionVerdict(region, factor is LimitingFactor.NONE, achieved, factor)


def boundary_curve(plr: float, mss: float = DEFAULT_MSS, mathis_c: float = DEFAULT_MATHIS_C,
                   bandwidth_range: tuple[float, float] = (10e6, 1e9),
                   points: int = 50) -> list[tuple[float, float]]:
    """Log-spaced samples ``(bandwidth, critical_rtt)`` of the region boundary."""
    check(0 < plr < 1, "plr", plr, "a fraction in (0, 1)")
    lo, hi = bandwidth_range
    check(0 < lo < hi, "bandwidth_range", bandwidth_range, "positive and ascending")
    check(points >= 2, "points", points, "at least 2")
    log_lo, log_hi = math.log(lo), math.log(hi)
    curve = []
    for i in range(points):
        if i == 0:
            b = lo
        elif i == points - 1:
            b = hi
        else:
            b = math.exp(log_lo + (log_hi - log_lo) * i / (points - 1))
        curve.append((b, critical_rtt(b, plr, mss, mathis_c)))
    return curve


class CatalogEntryError(VhcnError):
    def __init__(self, service_name, cause):
        self.service_name = service_name
        self.cause = cause
        super().__init__(f"service {service_name!r}: {cause}")


def _classify_named(svc, path):
    try:
        return classify_service(svc, path)
    except VhcnError as exc:
        raise CatalogEntryError(svc.name, exc) from exc


def catalog_report(catalog, path: NetworkPath, workers: int = 1):
    """Classify every service in ``catalog``; output order follows the input."""
    catalog = list(catalog)
    if not catalog:
        raise EmptyCatalogError("service catalog is empty")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(lambda s: _classify_named(s, path), catalog))
    else:
        verdicts = [_classify_named(s, path) for s in catalog]
    return list(zip(catalog, verdicts))
