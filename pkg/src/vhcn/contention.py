"""Peak-hour sharing of a contended link among simultaneously active users.

Overheads are ignored and active users are assumed to share the link fairly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import check


@dataclass(frozen=True)
class ContentionScenario:
    link_capacity: float  # bit/s
    connected_users: int
    simultaneity: float  # fraction of connected users active at peak

    def __post_init__(self):
        check(self.link_capacity > 0 and math.isfinite(self.link_capacity),
              "link_capacity", self.link_capacity, "a positive rate in bit/s")
        check(self.connected_users >= 1, "connected_users", self.connected_users, ">= 1")
        check(0 < self.simultaneity <= 1, "simultaneity", self.simultaneity, "a fraction in (0, 1]")

    @classmethod
    def from_counts(cls, link_capacity, connected_users, simultaneous_users):
        check(1 <= simultaneous_users <= connected_users, "simultaneous_users", simultaneous_users,
              f"an integer count in [1, connected_users={connected_users}]")
        return cls(link_capacity, connected_users, simultaneous_users / connected_users)

    @property
    def simultaneous_users(self) -> float:
        """Continuous active-user count s_c * N (may be fractional)."""
        return self.simultaneity * self.connected_users

    @property
    def active_user_count(self) -> int:
        """Active users rounded up, for conservative sizing."""
        n = self.simultaneous_users
        # guard against 0.1 * 1000 = 100.00000000000001 style noise
        return max(1, math.ceil(round(n, 9)))


def per_user_bitrate(sc: ContentionScenario, integer_users: bool = False) -> float:
    """Bit-rate available to each active user at peak, BR_a / (s_c * N)."""
    active = sc.active_user_count if integer_users else sc.simultaneous_users
    return sc.link_capacity / active


def per_connected_user_rate(sc: ContentionScenario) -> float:
    """Peak-hour rate averaged over every connected line, BR_a / N."""
    return per_user_bitrate(sc) * sc.simultaneity


def required_link_capacity(per_user_target: float, connected_users: int, simultaneity: float) -> float:
    check(per_user_target > 0, "per_user_target", per_user_target, "a positive rate in bit/s")
    check(connected_users >= 1, "connected_users", connected_users, ">= 1")
    check(0 < simultaneity <= 1, "simultaneity", simultaneity, "a fraction in (0, 1]")
    return per_user_target * simultaneity * connected_users


def project_demand(base: float, annual_growth: float, years: float) -> float:
    """Compound ``base`` by ``annual_growth`` once per year for ``years`` years."""
    check(base > 0, "base", base, "a positive rate in bit/s")
    check(annual_growth >= 0, "annual_growth", annual_growth, ">= 0")
    check(years >= 0, "years", years, ">= 0")
    return base * (1.0 + annual_growth) ** years
