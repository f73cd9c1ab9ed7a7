"""Oversubscription dimensioning of PON downstream capacity.

The number of simultaneously active users on a tree of ``n`` occupied ports
is modelled as Binomial(n, activity) with independent users. The capacity
``C`` is shared equally among the active users and each share is capped at
``b_max``. From that distribution we read the rate guaranteed with a given
availability (B_99 for 0.99) and the probability of running at the cap.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from configparser import ConfigParser
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources

import numpy as np

from .errors import ParameterError, check

DEFAULT_SPLITTING_FACTOR = 64
DEFAULT_ACTIVITY = 0.15
DEFAULT_B_MAX = 1e9
DEFAULT_AVAILABILITY = 0.99
DEFAULT_FILLINGS = (1.0, 0.6, 0.25, 0.08)

MC_CHUNK = 1 << 16


def _floor(x: float) -> int:
    # 0.29 * 100 == 28.999999999999996 must still floor to 29
    return math.floor(round(x, 9))


@dataclass(frozen=True)
class PonStandard:
    name: str
    downstream_capacity: float  # bit/s

    def __post_init__(self):
        check(self.downstream_capacity > 0, "downstream_capacity", self.downstream_capacity,
              "a positive rate in bit/s")


@dataclass(frozen=True)
class PonScenario:
    splitting_factor: int = DEFAULT_SPLITTING_FACTOR
    filling_factor: float = 1.0
    activity_factor: float = DEFAULT_ACTIVITY
    b_max: float = DEFAULT_B_MAX
    availability: float = DEFAULT_AVAILABILITY

    def __post_init__(self):
        check(self.splitting_factor >= 1, "splitting_factor", self.splitting_factor, ">= 1")
        check(0 < self.filling_factor <= 1, "filling_factor", self.filling_factor, "a fraction in (0, 1]")
        check(0 < self.activity_factor <= 1, "activity_factor", self.activity_factor, "a fraction in (0, 1]")
        check(self.b_max > 0, "b_max", self.b_max, "a positive rate in bit/s")
        check(0 < self.availability < 1, "availability", self.availability, "a fraction in (0, 1)")

    def with_filling(self, filling_factor: float) -> "PonScenario":
        return PonScenario(self.splitting_factor, filling_factor, self.activity_factor,
                           self.b_max, self.availability)

    @property
    def users(self) -> int:
        return connected_users(self.splitting_factor, self.filling_factor)


@dataclass(frozen=True)
class ActiveUserDistribution:
    """Binomial(trials, success_prob) with exact pmf/cdf tables."""

    trials: int
    success_prob: float

    def __post_init__(self):
        check(self.trials >= 0 and int(self.trials) == self.trials, "trials", self.trials,
              "a non-negative integer")
        check(0 <= self.success_prob <= 1, "success_prob", self.success_prob, "a fraction in [0, 1]")

    @cached_property
    def _pmf(self) -> tuple[float, ...]:
        n, p = int(self.trials), self.success_prob
        q = 1.0 - p
        if n <= 500:
            return tuple(math.comb(n, k) * (p ** k * q ** (n - k)) for k in range(n + 1))
        # log space avoids comb() overflowing a double for large n
        lp = math.log(p) if p > 0 else -math.inf
        lq = math.log(q) if q > 0 else -math.inf
        lgn = math.lgamma(n + 1)
        out = []
        for k in range(n + 1):
            a = k * lp if k else 0.0
            b = (n - k) * lq if n - k else 0.0
            out.append(math.exp(lgn - math.lgamma(k + 1) - math.lgamma(n - k + 1) + a + b))
        return tuple(out)

    @cached_property
    def _cdf(self) -> tuple[float, ...]:
        acc = []
        terms = []
        for v in self._pmf:
            terms.append(v)
            acc.append(min(1.0, math.fsum(terms)))
        acc[-1] = 1.0
        return tuple(acc)

    def _check_k(self, k):
        check(0 <= k <= self.trials, "k", k, f"an integer in [0, {self.trials}]")

    def pmf(self, k: int) -> float:
        self._check_k(k)
        return self._pmf[k]

    def cdf(self, k: int) -> float:
        self._check_k(k)
        return self._cdf[k]


def connected_users(splitting_factor: int, filling_factor: float) -> int:
    """Occupied ports on a tree: floor(split * filling), at least one."""
    check(splitting_factor >= 1, "splitting_factor", splitting_factor, ">= 1")
    check(0 < filling_factor <= 1, "filling_factor", filling_factor, "a fraction in (0, 1]")
    return max(1, _floor(splitting_factor * filling_factor))


def binomial_cdf(dist: ActiveUserDistribution, k: int) -> float:
    return dist.cdf(k)


def percentile_active(dist: ActiveUserDistribution, availability: float) -> int:
    """Smallest active-user count k with P(K <= k) >= availability."""
    check(0 < availability < 1, "availability", availability, "a fraction in (0, 1)")
    for k in range(dist.trials + 1):
        if dist.cdf(k) >= availability:
            return k
    return dist.trials


def _distribution(scn: PonScenario) -> ActiveUserDistribution:
    return ActiveUserDistribution(scn.users, scn.activity_factor)


def _shared_rate(capacity, active, b_max):
    return min(capacity / max(active, 1), b_max)


def b_percentile(std: PonStandard, scn: PonScenario) -> float:
    """Per-user rate exceeded with probability ``scn.availability``."""
    k = percentile_active(_distribution(scn), scn.availability)
    return _shared_rate(std.downstream_capacity, k, scn.b_max)


def full_speed_threshold(std: PonStandard, scn: PonScenario) -> int:
    """Largest active-user count at which an equal share still reaches ``b_max``."""
    return min(max(_floor(std.downstream_capacity / scn.b_max), 0), scn.users)


def prob_full_speed(std: PonStandard, scn: PonScenario) -> float:
    """Probability that users are served at the ``b_max`` cap."""
    return _distribution(scn).cdf(full_speed_threshold(std, scn))


@dataclass(frozen=True)
class Table1Cell:
    standard: PonStandard
    filling_factor: float
    users: int
    active_at_percentile: int
    b_percentile: float
    prob_full_speed: float


def table1(standards, fillings=DEFAULT_FILLINGS, scn: PonScenario | None = None) -> list[list[Table1Cell]]:
    """Rows follow ``standards``, columns follow ``fillings``, both in input order."""
    standards, fillings = list(standards), list(fillings)
    if not standards:
        raise ParameterError("standards", standards, "a non-empty list")
    if not fillings:
        raise ParameterError("fillings", fillings, "a non-empty list")
    scn = scn or PonScenario()
    grid = []
    for std in standards:
        row = []
        for f in fillings:
            s = scn.with_filling(f)
            row.append(Table1Cell(
                standard=std,
                filling_factor=f,
                users=s.users,
                active_at_percentile=percentile_active(_distribution(s), s.availability),
                b_percentile=b_percentile(std, s),
                prob_full_speed=prob_full_speed(std, s),
            ))
        grid.append(row)
    return grid


def default_standards() -> list[PonStandard]:
    """GPON / XG-PON / TWDM-PON capacities shipped in ``data/standards.ini``."""
    parser = ConfigParser()
    parser.read_string(resources.files("vhcn").joinpath("data/standards.ini").read_text("utf-8"))
    from .units import parse_rate
    return [PonStandard(sec.split(None, 1)[1], parse_rate(parser[sec]["capacity"]))
            for sec in parser.sections() if sec.startswith("standard ")]


# --- Monte Carlo oracle -------------------------------------------------------

@dataclass(frozen=True)
class MonteCarloResult:
    samples: int
    seed: int
    b_percentile: float
    prob_full_speed: float
    active_counts: np.ndarray = field(repr=False, compare=False)

    @property
    def beta_standard_error(self) -> float:
        b = self.prob_full_speed
        return math.sqrt(b * (1 - b) / self.samples)


def _draw_chunk(seed, index, size, n, p):
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    return rng.binomial(n, p, size=size)


def simulate_active_users(n: int, p: float, samples: int, seed: int, workers: int = 1) -> np.ndarray:
    """Draw ``samples`` Binomial(n, p) counts.

    The stream is cut into fixed-size chunks, each seeded from ``(seed, chunk)``,
    so the result does not depend on ``workers``.
    """
    sizes = [MC_CHUNK] * (samples // MC_CHUNK)
    if samples % MC_CHUNK:
        sizes.append(samples % MC_CHUNK)
    jobs = [(seed, i, s, n, p) for i, s in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda a: _draw_chunk(*a), jobs))
    else:
        parts = [_draw_chunk(*a) for a in jobs]
    return np.concatenate(parts)


def empirical_quantile_exceeded(values: np.ndarray, availability: float) -> float:
    """Largest v such that at least ``availability`` of ``values`` are >= v."""
    s = len(values)
    needed = math.ceil(round(availability * s, 9))
    ordered = np.sort(values)
    return float(ordered[s - needed])


def monte_carlo(std: PonStandard, scn: PonScenario, samples: int = 1_000_000, seed: int = 0,
                workers: int = 1) -> MonteCarloResult:
    check(samples >= 10_000, "samples", samples, ">= 10000")
    check(int(seed) == seed and seed >= 0, "seed", seed, "a non-negative integer")
    counts = simulate_active_users(scn.users, scn.activity_factor, samples, int(seed), workers)
    rates = np.minimum(std.downstream_capacity / np.maximum(counts, 1), scn.b_max)
    return MonteCarloResult(
        samples=samples,
        seed=int(seed),
        b_percentile=empirical_quantile_exceeded(rates, scn.availability),
        prob_full_speed=float(np.count_nonzero(rates >= scn.b_max)) / samples,
        active_counts=counts,
    )


def monte_carlo_b_percentile(std: PonStandard, scn: PonScenario, samples: int = 1_000_000,
                             seed: int = 0, workers: int = 1) -> float:
    return monte_carlo(std, scn, samples, seed, workers).b_percentile


def on_knife_edge(scn: PonScenario, samples: int, sigmas: float = 5.0) -> bool:
    """Whether sampling noise can move the empirical percentile off the exact one.

    True when the availability target sits within ``sigmas`` standard errors
    of the CDF just below or at the analytic percentile count.
    """
    dist = _distribution(scn)
    p = scn.availability
    k = percentile_active(dist, p)
    sd = math.sqrt(p * (1 - p) / samples)
    near = [dist.cdf(k)]
    if k > 0:
        near.append(dist.cdf(k - 1))
    return any(abs(c - p) <= sigmas * sd for c in near)
