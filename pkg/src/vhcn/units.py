"""Parsing and display of rates, times and probabilities.

Everything is held internally in bit/s, seconds and plain fractions.
"""

from __future__ import annotations

import math
import re

UNBOUNDED = math.inf

_RATE_SCALE = {
    "": 1.0,
    "bit": 1.0,
    "bps": 1.0,
    "k": 1e3,
    "kbit": 1e3,
    "kbps": 1e3,
    "m": 1e6,
    "mbit": 1e6,
    "mbps": 1e6,
    "g": 1e9,
    "gbit": 1e9,
    "gbps": 1e9,
    "t": 1e12,
    "tbit": 1e12,
    "tbps": 1e12,
}

_TIME_SCALE = {
    "": 1.0,
    "s": 1.0,
    "ms": 1e-3,
    "us": 1e-6,
    "µs": 1e-6,
    "ns": 1e-9,
}

_NUMBER = r"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
_QUANTITY = re.compile(_NUMBER + r"\s*([a-zA-Zµ%/]*)\s*$")


def _split(text: str) -> tuple[float, str]:
    m = _QUANTITY.match(str(text).strip())
    if not m:
        raise ValueError(f"cannot parse quantity {text!r}")
    return float(m.group(1)), m.group(2)


def parse_rate(text) -> float:
    """Parse ``'1Gbit'``, ``'100 Mbit/s'``, ``'2.5G'``, ``'50Mbps'`` or a bare bit/s number."""
    if isinstance(text, (int, float)):
        return float(text)
    value, unit = _split(text)
    key = unit.lower()
    if key.endswith("/s"):
        key = key[:-2]
    if key not in _RATE_SCALE:
        raise ValueError(f"unknown rate unit {unit!r} in {text!r}")
    return value * _RATE_SCALE[key]


def parse_time(text) -> float:
    """Parse ``'1ms'``, ``'500us'``, ``'0.5 s'`` or a bare number of seconds."""
    if isinstance(text, (int, float)):
        return float(text)
    value, unit = _split(text)
    key = unit.lower()
    if key not in _TIME_SCALE:
        raise ValueError(f"unknown time unit {unit!r} in {text!r}")
    return value * _TIME_SCALE[key]


def parse_fraction(text) -> float:
    """Parse ``'0.15'`` or ``'15%'``."""
    if isinstance(text, (int, float)):
        return float(text)
    value, unit = _split(text)
    if unit == "%":
        return value / 100.0
    if unit:
        raise ValueError(f"unexpected unit {unit!r} in fraction {text!r}")
    return value


def fmt_rate(bps: float) -> str:
    if math.isinf(bps):
        return "unbounded"
    mbps = bps / 1e6
    if abs(mbps) >= 1000:
        return f"{mbps / 1000:.1f} Gbit/s"
    return f"{mbps:.1f} Mbit/s"


def fmt_mbps(bps: float) -> str:
    if math.isinf(bps):
        return "unbounded"
    return f"{bps / 1e6:,.1f}"


def fmt_percent(p: float) -> str:
    return f"{100.0 * p:.1f}%"


def fmt_ms(seconds: float) -> str:
    if math.isinf(seconds):
        return "unbounded"
    return f"{seconds * 1e3:.3g} ms"


def fmt_ratio(x: float) -> str:
    if math.isinf(x):
        return "unbounded"
    return f"{x:.3g}"
