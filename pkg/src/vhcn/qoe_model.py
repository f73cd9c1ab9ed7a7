"""Application-layer TCP throughput from latency and loss.

Congestion-avoidance throughput follows the Mathis law
``c * MSS / (RTT * sqrt(PLR))``; the delivered throughput is that value
capped by the channel bit-rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoBoundaryError, check
from .units import UNBOUNDED

DEFAULT_MSS = 1450  # bytes
DEFAULT_MATHIS_C = 1.0


def _check_rtt(rtt):
    check(rtt > 0 and math.isfinite(rtt), "rtt", rtt, "a positive finite time in seconds")


def _check_plr(plr):
    check(0 <= plr < 1, "plr", plr, "a fraction in [0, 1)")


def _check_mss(mss):
    check(mss > 0 and math.isfinite(mss), "mss", mss, "a positive size in bytes")


def _check_c(mathis_c):
    check(mathis_c > 0 and math.isfinite(mathis_c), "mathis_c", mathis_c, "a positive constant")


def _check_rate(name, value):
    check(value > 0 and math.isfinite(value), name, value, "a positive finite rate in bit/s")


@dataclass(frozen=True)
class NetworkPath:
    bit_rate: float
    rtt: float
    plr: float
    mss: float = DEFAULT_MSS
    mathis_c: float = DEFAULT_MATHIS_C

    def __post_init__(self):
        _check_rate("bit_rate", self.bit_rate)
        _check_rtt(self.rtt)
        _check_plr(self.plr)
        _check_mss(self.mss)
        _check_c(self.mathis_c)


def distance_metric(rtt: float, plr: float) -> float:
    """RTT * sqrt(PLR), in seconds."""
    _check_rtt(rtt)
    _check_plr(plr)
    return rtt * math.sqrt(plr)


def _ca_numerator(mss, mathis_c):
    return mathis_c * mss * 8.0


def mathis_throughput(path: NetworkPath) -> float:
    """Congestion-avoidance ceiling in bit/s; ``UNBOUNDED`` on a loss-free path."""
    if path.plr == 0:
        return UNBOUNDED
    return _ca_numerator(path.mss, path.mathis_c) / (path.rtt * math.sqrt(path.plr))


def effective_throughput(path: NetworkPath) -> float:
    return min(mathis_throughput(path), path.bit_rate)


def is_rate_limited(path: NetworkPath) -> bool:
    """True when the channel bit-rate, not latency/loss, sets the throughput.

    A tie goes to the bit-rate side.
    """
    return mathis_throughput(path) >= path.bit_rate


def critical_rtt(bit_rate: float, plr: float, mss: float = DEFAULT_MSS,
                 mathis_c: float = DEFAULT_MATHIS_C) -> float:
    """RTT at which the Mathis ceiling equals ``bit_rate``.

    Shorter RTTs leave the path bit-rate limited, longer ones latency limited.
    Raises NoBoundaryError for ``plr == 0``, where no such RTT exists.
    """
    _check_rate("bit_rate", bit_rate)
    _check_plr(plr)
    _check_mss(mss)
    _check_c(mathis_c)
    if plr == 0:
        raise NoBoundaryError("plr", plr, "plr > 0 (a loss-free path is bit-rate limited at every RTT)")
    return _ca_numerator(mss, mathis_c) / (bit_rate * math.sqrt(plr))


def required_rtt(target: float, plr: float, mss: float = DEFAULT_MSS,
                 mathis_c: float = DEFAULT_MATHIS_C) -> float:
    """Largest RTT whose Mathis ceiling still reaches ``target``."""
    _check_rate("target", target)
    check(0 < plr < 1, "plr", plr, "a fraction in (0, 1)")
    _check_mss(mss)
    _check_c(mathis_c)
    return _ca_numerator(mss, mathis_c) / (target * math.sqrt(plr))


def required_plr(target: float, rtt: float, mss: float = DEFAULT_MSS,
                 mathis_c: float = DEFAULT_MATHIS_C) -> float:
    """Largest loss rate whose Mathis ceiling still reaches ``target``.

    Clamped into [0, 1): when even near-total loss would meet the target the
    largest float below 1 is returned.
    """
    _check_rate("target", target)
    _check_rtt(rtt)
    _check_mss(mss)
    _check_c(mathis_c)
    plr = (_ca_numerator(mss, mathis_c) / (target * rtt)) ** 2
    return min(plr, math.nextafter(1.0, 0.0))
