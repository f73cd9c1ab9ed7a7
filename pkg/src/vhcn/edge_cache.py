"""Bandwidth ledger of a transparent edge cache."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError, check
from .units import UNBOUNDED


class ZeroOutputError(ParameterError):
    pass


@dataclass(frozen=True)
class CacheNode:
    b_out: float  # total rate towards clients
    b_cache: float  # rate served from the cache
    b_load: float = 0.0  # rate spent refilling the cache

    def __post_init__(self):
        for name in ("b_out", "b_cache", "b_load"):
            v = getattr(self, name)
            check(v >= 0 and math.isfinite(v), name, v, "a non-negative finite rate in bit/s")
        check(self.b_cache <= self.b_out, "b_cache", self.b_cache, f"<= b_out ({self.b_out})")


def cache_efficiency(node: CacheNode) -> float:
    """Share of the client-side rate served by the cache."""
    check(node.b_out > 0, "b_out", node.b_out, "> 0 to define cache efficiency", exc=ZeroOutputError)
    return node.b_cache / node.b_out


def cache_speedup(e_c: float) -> float:
    """1 / E_c, or ``UNBOUNDED`` for an absent cache."""
    check(0 <= e_c <= 1, "e_c", e_c, "a fraction in [0, 1]")
    if e_c == 0:
        return UNBOUNDED
    return 1.0 / e_c


def upstream_bandwidth(node: CacheNode) -> float:
    """Rate drawn from upstream: client traffic not served locally plus refill."""
    return node.b_out - node.b_cache + node.b_load


def upstream_reduction(node: CacheNode) -> float:
    """B_out / B_in: how many times the cache shrinks the upstream load."""
    b_in = upstream_bandwidth(node)
    if b_in == 0:
        return UNBOUNDED
    return node.b_out / b_in
