"""Scenario files: INI-style sections of ``key = value`` lines.

Schema (every section optional, at least one required)::

    [meta]
    title = ...                 ; free text
    format = text | csv

    [path]
    bit_rate = 1 Gbit           ; required
    rtt = 1 ms                  ; required
    plr = 0.1%                  ; required
    mss = 1450                  ; bytes, default 1450
    mathis_c = 1.0              ; default 1.0
    target = 1 Gbit             ; default: bit_rate

    [service <name>]            ; repeatable, needs [path]
    min_bandwidth = 10 Mbit
    max_latency = 100 ms

    [contention]
    link_capacity = 1 Gbit      ; required
    connected_users = 1000      ; required
    simultaneity = 10%          ; or simultaneous_users = 100
    per_user_target = 50 Mbit   ; optional, sizes the link
    annual_growth = 25%         ; optional, with years
    years = 3
    growth_base = 50 Mbit       ; default: per-user bit-rate

    [pon]
    splitting_factor = 64       ; default 64
    fillings = 100%, 60%, 25%, 8%
    activity = 15%              ; default 15%
    b_max = 1 Gbit              ; default 1 Gbit
    availability = 0.99         ; default 0.99
    mc_samples = 0              ; Monte Carlo cross-check, 0 disables
    seed = 0

    [standard <name>]           ; repeatable; default GPON/XGPON/TWDM-PON
    capacity = 2.5 Gbit

    [cache]
    b_out = 100 Mbit            ; required
    b_cache = 50 Mbit           ; required
    b_load = 0                  ; default 0

Rates take bit/kbit/Mbit/Gbit suffixes (``/s`` and ``bps`` spellings too),
times take s/ms/us, fractions take a trailing ``%``.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field

from . import pon_dim
from .contention import ContentionScenario
from .edge_cache import CacheNode
from .errors import ParameterError, ScenarioParseError, ScenarioValidationError
from .pon_dim import PonScenario, PonStandard
from .qoe_model import DEFAULT_MATHIS_C, DEFAULT_MSS, NetworkPath
from .service_plane import ServiceRequirement
from .units import parse_fraction, parse_rate, parse_time

FORMATS = ("text", "csv")


@dataclass
class PathSection:
    path: NetworkPath
    target: float


@dataclass
class ContentionSection:
    scenario: ContentionScenario
    per_user_target: float | None = None
    annual_growth: float | None = None
    years: float | None = None
    growth_base: float | None = None


@dataclass
class PonSection:
    standards: list[PonStandard]
    fillings: list[float]
    scenario: PonScenario
    mc_samples: int = 0
    seed: int = 0


@dataclass
class Scenario:
    title: str = ""
    format: str = "text"
    path: PathSection | None = None
    services: list[ServiceRequirement] = field(default_factory=list)
    contention: ContentionSection | None = None
    pon: PonSection | None = None
    cache: CacheNode | None = None
    # (section, key, value) for every default filled in by the loader
    defaults: list[tuple[str, str, str]] = field(default_factory=list)

    def sections(self) -> list[str]:
        present = []
        if self.path is not None:
            present.append("path")
        if self.services:
            present.append("services")
        if self.contention is not None:
            present.append("contention")
        if self.pon is not None:
            present.append("pon")
        if self.cache is not None:
            present.append("cache")
        return present


_ALLOWED = {
    "meta": {"title", "format"},
    "path": {"bit_rate", "rtt", "plr", "mss", "mathis_c", "target"},
    "service": {"min_bandwidth", "max_latency"},
    "contention": {"link_capacity", "connected_users", "simultaneity", "simultaneous_users",
                   "per_user_target", "annual_growth", "years", "growth_base"},
    "pon": {"splitting_factor", "fillings", "activity", "b_max", "availability", "mc_samples", "seed"},
    "standard": {"capacity"},
    "cache": {"b_out", "b_cache", "b_load"},
}

_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")
_KEY_RE = re.compile(r"^\s*([^=:#;\s][^=:]*?)\s*[=:]")


def _line_index(text):
    """Map (section, key) to 1-based line numbers for error reporting."""
    index = {}
    section = None
    for no, line in enumerate(text.splitlines(), 1):
        m = _SECTION_RE.match(line)
        if m:
            section = m.group(1).strip()
            index[(section, None)] = no
            continue
        m = _KEY_RE.match(line)
        if m and section is not None and not line[:1].isspace():
            index.setdefault((section, m.group(1).strip().lower()), no)
    return index


class _Reader:
    def __init__(self, parser, index, defaults):
        self.parser = parser
        self.index = index
        self.defaults = defaults

    def get(self, section, key, convert, default=None, required=False, default_note=None):
        sec = self.parser[section]
        if key not in sec:
            if required:
                raise ScenarioParseError(f"missing required key in [{section}]",
                                         line=self.index.get((section, None)), field=key)
            if default is not None or default_note is not None:
                self.defaults.append((section, key, default_note if default_note is not None else str(default)))
            return default
        raw = sec[key]
        try:
            return convert(raw)
        except ValueError as exc:
            raise ScenarioParseError(str(exc), line=self.index.get((section, key)), field=key) from None


def _int(text):
    v = float(text)
    if v != int(v):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(v)


def _fraction_list(text):
    items = [t for t in (s.strip() for s in text.split(",")) if t]
    if not items:
        raise ValueError("expected a comma-separated list of fractions")
    return [parse_fraction(t) for t in items]


def _validated(section, build):
    try:
        return build()
    except ParameterError as exc:
        raise ScenarioValidationError(section, str(exc)) from None


def load_scenario(text: str) -> Scenario:
    """Parse and validate scenario text, filling in documented defaults."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ScenarioParseError("entry outside any [section]", line=exc.lineno) from None
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as exc:
        raise ScenarioParseError(str(exc), line=exc.lineno) from None
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ScenarioParseError("malformed line, expected 'key = value'", line=line) from None

    index = _line_index(text)
    scn = Scenario()
    rd = _Reader(parser, index, scn.defaults)

    for name in parser.sections():
        kind = name.split(None, 1)[0]
        if kind not in _ALLOWED or (kind in ("service", "standard")) != (" " in name.strip()):
            raise ScenarioParseError(f"unknown section [{name}]", line=index.get((name, None)))
        for key in parser[name]:
            if key not in _ALLOWED[kind]:
                raise ScenarioParseError(f"unknown key in [{name}]", line=index.get((name, key)), field=key)

    if parser.has_section("meta"):
        scn.title = parser["meta"].get("title", "")
        fmt = parser["meta"].get("format", "text").strip().lower()
        if fmt not in FORMATS:
            raise ScenarioParseError(f"format must be one of {FORMATS}", line=index.get(("meta", "format")),
                                     field="format")
        scn.format = fmt

    if parser.has_section("path"):
        s = "path"
        br = rd.get(s, "bit_rate", parse_rate, required=True)
        rtt = rd.get(s, "rtt", parse_time, required=True)
        plr = rd.get(s, "plr", parse_fraction, required=True)
        mss = rd.get(s, "mss", float, default=DEFAULT_MSS)
        c = rd.get(s, "mathis_c", float, default=DEFAULT_MATHIS_C)
        target = rd.get(s, "target", parse_rate, default_note="bit_rate")
        path = _validated(s, lambda: NetworkPath(br, rtt, plr, mss, c))
        if target is None:
            target = br
        elif not target > 0:
            raise ScenarioValidationError(s, f"target={target!r} is invalid: expected a positive rate in bit/s")
        scn.path = PathSection(path, target)

    for name in parser.sections():
        if name.startswith("service "):
            label = name.split(None, 1)[1].strip()
            bw = rd.get(name, "min_bandwidth", parse_rate, required=True)
            lat = rd.get(name, "max_latency", parse_time, required=True)
            scn.services.append(_validated(name, lambda: ServiceRequirement(label, bw, lat)))
    if scn.services and scn.path is None:
        raise ScenarioValidationError("services", "service entries need a [path] section to evaluate against")

    if parser.has_section("contention"):
        s = "contention"
        cap = rd.get(s, "link_capacity", parse_rate, required=True)
        users = rd.get(s, "connected_users", _int, required=True)
        sim = rd.get(s, "simultaneity", parse_fraction)
        active = rd.get(s, "simultaneous_users", _int)
        if (sim is None) == (active is None):
            raise ScenarioValidationError(s, "give exactly one of simultaneity or simultaneous_users")
        if sim is not None:
            cs = _validated(s, lambda: ContentionScenario(cap, users, sim))
        else:
            cs = _validated(s, lambda: ContentionScenario.from_counts(cap, users, active))
        section = ContentionSection(cs)
        section.per_user_target = rd.get(s, "per_user_target", parse_rate)
        section.annual_growth = rd.get(s, "annual_growth", parse_fraction)
        section.years = rd.get(s, "years", float)
        if (section.annual_growth is None) != (section.years is None):
            raise ScenarioValidationError(s, "annual_growth and years must be given together")
        if section.annual_growth is not None:
            section.growth_base = rd.get(s, "growth_base", parse_rate, default_note="per-user bit-rate")
        scn.contention = section

    if parser.has_section("pon"):
        s = "pon"
        split = rd.get(s, "splitting_factor", _int, default=pon_dim.DEFAULT_SPLITTING_FACTOR)
        fillings = rd.get(s, "fillings", _fraction_list,
                          default=list(pon_dim.DEFAULT_FILLINGS),
                          default_note=", ".join(f"{f:.0%}" for f in pon_dim.DEFAULT_FILLINGS))
        act = rd.get(s, "activity", parse_fraction, default=pon_dim.DEFAULT_ACTIVITY,
                     default_note=f"{pon_dim.DEFAULT_ACTIVITY:.0%}")
        bmax = rd.get(s, "b_max", parse_rate, default=pon_dim.DEFAULT_B_MAX, default_note="1 Gbit/s")
        avail = rd.get(s, "availability", parse_fraction, default=pon_dim.DEFAULT_AVAILABILITY)
        mc = rd.get(s, "mc_samples", _int, default=0)
        seed = rd.get(s, "seed", _int, default=0)
        base = _validated(s, lambda: PonScenario(split, fillings[0], act, bmax, avail))
        for f in fillings:
            _validated(s, lambda: base.with_filling(f))
        if mc and mc < 10_000:
            raise ScenarioValidationError(s, f"mc_samples={mc} is invalid: expected 0 or >= 10000")
        if seed < 0:
            raise ScenarioValidationError(s, f"seed={seed} is invalid: expected a non-negative integer")
        standards = []
        for name in parser.sections():
            if name.startswith("standard "):
                label = name.split(None, 1)[1].strip()
                cap = rd.get(name, "capacity", parse_rate, required=True)
                standards.append(_validated(name, lambda: PonStandard(label, cap)))
        if not standards:
            standards = pon_dim.default_standards()
            scn.defaults.append(("pon", "standards", ", ".join(
                f"{st.name}={st.downstream_capacity / 1e9:g} Gbit/s" for st in standards)))
        scn.pon = PonSection(standards, fillings, base, mc, seed)
    elif any(n.startswith("standard ") for n in parser.sections()):
        raise ScenarioValidationError("pon", "[standard ...] entries need a [pon] section")

    if parser.has_section("cache"):
        s = "cache"
        b_out = rd.get(s, "b_out", parse_rate, required=True)
        b_cache = rd.get(s, "b_cache", parse_rate, required=True)
        b_load = rd.get(s, "b_load", parse_rate, default=0.0, default_note="0")
        scn.cache = _validated(s, lambda: CacheNode(b_out, b_cache, b_load))

    if not scn.sections():
        raise ScenarioValidationError("scenario", "at least one of [path], [contention], [pon], [cache] "
                                                  "or [service ...] is required")
    return scn


def load_catalog(text: str) -> list[ServiceRequirement]:
    """Read a file holding only ``[service <name>]`` sections."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ScenarioParseError(str(exc).splitlines()[0], line=getattr(exc, "lineno", None)) from None
    index = _line_index(text)
    rd = _Reader(parser, index, [])
    services = []
    for name in parser.sections():
        if not name.startswith("service "):
            raise ScenarioParseError(f"catalog files hold only [service ...] sections, got [{name}]",
                                     line=index.get((name, None)))
        for key in parser[name]:
            if key not in _ALLOWED["service"]:
                raise ScenarioParseError(f"unknown key in [{name}]", line=index.get((name, key)), field=key)
        label = name.split(None, 1)[1].strip()
        bw = rd.get(name, "min_bandwidth", parse_rate, required=True)
        lat = rd.get(name, "max_latency", parse_time, required=True)
        services.append(_validated(name, lambda: ServiceRequirement(label, bw, lat)))
    return services


def builtin_catalog_text() -> str:
    from importlib import resources
    return resources.files("vhcn").joinpath("data/catalog.ini").read_text("utf-8")
