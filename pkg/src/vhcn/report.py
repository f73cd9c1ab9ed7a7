"""Evaluate a scenario and render the results as text or CSV."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field

from . import contention, edge_cache, pon_dim, qoe_model, service_plane
from .errors import ComputationError, NoBoundaryError, VhcnError
from .scenario import Scenario
from .units import fmt_mbps, fmt_ms, fmt_percent, fmt_rate, fmt_ratio

UNITS = {
    "rate": "bit/s",
    "time": "s",
    "prob": "fraction",
    "loss": "fraction",
    "count": "count",
    "ratio": "ratio",
    "bytes": "byte",
    "text": "",
    "bool": "",
}


@dataclass(frozen=True)
class Record:
    item: str
    quantity: str
    value: object
    kind: str


@dataclass
class Section:
    name: str
    records: list[Record] = field(default_factory=list)
    tables: list[list[list[str]]] = field(default_factory=list)  # pre-formatted text blocks
    notes: list[str] = field(default_factory=list)

    def add(self, item, quantity, value, kind):
        self.records.append(Record(item, quantity, value, kind))


@dataclass
class Report:
    title: str
    defaults: list[tuple[str, str, str]]
    sections: list[Section]

    def section(self, name) -> Section:
        for s in self.sections:
            if s.name == name:
                return s
        raise KeyError(name)

    def value(self, section, item, quantity):
        for r in self.section(section).records:
            if r.item == item and r.quantity == quantity:
                return r.value
        raise KeyError((section, item, quantity))


def _short_rate(bps):
    for scale, unit in ((1e9, "Gbps"), (1e6, "Mbps"), (1e3, "kbps")):
        if bps >= scale:
            return f"{bps / scale:g} {unit}"
    return f"{bps:g} bps"


def _path_section(sec) -> Section:
    path, target = sec.path, sec.target
    out = Section("path")
    item = "path"
    out.add(item, "bit_rate", path.bit_rate, "rate")
    out.add(item, "rtt", path.rtt, "time")
    out.add(item, "plr", path.plr, "loss")
    out.add(item, "mss", path.mss, "bytes")
    out.add(item, "mathis_c", path.mathis_c, "ratio")
    out.add(item, "distance_metric", qoe_model.distance_metric(path.rtt, path.plr), "time")
    out.add(item, "mathis_throughput", qoe_model.mathis_throughput(path), "rate")
    achieved = qoe_model.effective_throughput(path)
    out.add(item, "effective_throughput", achieved, "rate")
    region = (service_plane.Region.BIT_RATE_LIMITED if qoe_model.is_rate_limited(path)
              else service_plane.Region.LATENCY_LIMITED)
    out.add(item, "region", region.value, "text")
    try:
        out.add(item, "critical_rtt", qoe_model.critical_rtt(path.bit_rate, path.plr, path.mss, path.mathis_c),
                "time")
    except NoBoundaryError:
        out.add(item, "critical_rtt", "none (loss-free path)", "text")
    out.add(item, "target", target, "rate")
    met = achieved >= target
    out.add(item, "target_met", met, "bool")
    out.add(item, "verdict", f"{_short_rate(target)} target {'met' if met else 'NOT met'}", "text")
    if path.plr > 0:
        out.add(item, "required_rtt", qoe_model.required_rtt(target, path.plr, path.mss, path.mathis_c), "time")
    out.add(item, "required_plr", qoe_model.required_plr(target, path.rtt, path.mss, path.mathis_c), "loss")
    return out


def _services_section(services, path) -> Section:
    out = Section("services")
    for svc, v in service_plane.catalog_report(services, path):
        out.add(svc.name, "min_bandwidth", svc.min_bandwidth, "rate")
        out.add(svc.name, "max_latency", svc.max_latency, "time")
        out.add(svc.name, "region", v.region.value, "text")
        out.add(svc.name, "achieved_throughput", v.achieved_throughput, "rate")
        out.add(svc.name, "feasible", v.feasible, "bool")
        out.add(svc.name, "limiting_factor", v.limiting_factor.value, "text")
    return out


def _contention_section(sec) -> Section:
    sc = sec.scenario
    out = Section("contention")
    item = "link"
    out.add(item, "link_capacity", sc.link_capacity, "rate")
    out.add(item, "connected_users", sc.connected_users, "count")
    out.add(item, "simultaneity", sc.simultaneity, "prob")
    out.add(item, "simultaneous_users", sc.simultaneous_users, "count")
    out.add(item, "per_user_bitrate", contention.per_user_bitrate(sc), "rate")
    out.add(item, "active_user_count", sc.active_user_count, "count")
    out.add(item, "per_user_bitrate_rounded_users", contention.per_user_bitrate(sc, integer_users=True), "rate")
    out.add(item, "per_connected_user_rate", contention.per_connected_user_rate(sc), "rate")
    if sec.per_user_target is not None:
        out.add("sizing", "per_user_target", sec.per_user_target, "rate")
        out.add("sizing", "required_link_capacity",
                contention.required_link_capacity(sec.per_user_target, sc.connected_users, sc.simultaneity),
                "rate")
    if sec.annual_growth is not None:
        base = sec.growth_base if sec.growth_base is not None else contention.per_user_bitrate(sc)
        out.add("growth", "base", base, "rate")
        out.add("growth", "annual_growth", sec.annual_growth, "prob")
        out.add("growth", "years", sec.years, "count")
        out.add("growth", "projected_demand", contention.project_demand(base, sec.annual_growth, sec.years),
                "rate")
    return out


def _pon_section(sec, seed_override=None) -> Section:
    out = Section("pon")
    scn = sec.scenario
    grid = pon_dim.table1(sec.standards, sec.fillings, scn)
    label = f"B_{scn.availability * 100:g}"
    seed = sec.seed if seed_override is None else seed_override
    header = ["standard", ""] + [f"{f * 100:g}% ({scn.with_filling(f).users} users)" for f in sec.fillings]
    table = [header]
    mc_lines = []
    for row in grid:
        std = row[0].standard
        table.append([std.name, "beta"] + [fmt_percent(c.prob_full_speed) for c in row])
        table.append(["", f"{label} Mbit/s"] + [fmt_mbps(c.b_percentile) for c in row])
        for c in row:
            item = f"{std.name}@{c.filling_factor * 100:g}%"
            out.add(item, "capacity", std.downstream_capacity, "rate")
            out.add(item, "connected_users", c.users, "count")
            out.add(item, "active_at_percentile", c.active_at_percentile, "count")
            out.add(item, "b_percentile", c.b_percentile, "rate")
            out.add(item, "prob_full_speed", c.prob_full_speed, "prob")
            if sec.mc_samples:
                s = scn.with_filling(c.filling_factor)
                mc = pon_dim.monte_carlo(std, s, sec.mc_samples, seed)
                edge = pon_dim.on_knife_edge(s, sec.mc_samples)
                out.add(item, "mc_b_percentile", mc.b_percentile, "rate")
                out.add(item, "mc_prob_full_speed", mc.prob_full_speed, "prob")
                out.add(item, "mc_knife_edge", edge, "bool")
                mc_lines.append([item, fmt_mbps(mc.b_percentile), fmt_percent(mc.prob_full_speed),
                                 "knife-edge" if edge else ""])
    out.tables.append(table)
    if mc_lines:
        out.tables.append([[f"Monte Carlo, {sec.mc_samples} samples, seed {seed}", f"{label} Mbit/s", "beta", ""]]
                          + mc_lines)
    out.notes.append(f"activity {scn.activity_factor:.0%}, split 1:{scn.splitting_factor}, "
                     f"cap {fmt_rate(scn.b_max)}, availability {scn.availability:g}; independent users")
    return out


def _cache_section(node) -> Section:
    out = Section("cache")
    item = "node"
    out.add(item, "b_out", node.b_out, "rate")
    out.add(item, "b_cache", node.b_cache, "rate")
    out.add(item, "b_load", node.b_load, "rate")
    if node.b_out > 0:
        e_c = edge_cache.cache_efficiency(node)
        out.add(item, "cache_efficiency", e_c, "prob")
        out.add(item, "cache_speedup", edge_cache.cache_speedup(e_c), "ratio")
    out.add(item, "upstream_bandwidth", edge_cache.upstream_bandwidth(node), "rate")
    out.add(item, "upstream_reduction", edge_cache.upstream_reduction(node), "ratio")
    return out


def run(scenario: Scenario, seed: int | None = None) -> Report:
    """Evaluate every present section; ``seed`` overrides the PON seed."""
    builders = []
    if scenario.path is not None:
        builders.append(("path", lambda: _path_section(scenario.path)))
    if scenario.services:
        builders.append(("services", lambda: _services_section(scenario.services, scenario.path.path)))
    if scenario.contention is not None:
        builders.append(("contention", lambda: _contention_section(scenario.contention)))
    if scenario.pon is not None:
        builders.append(("pon", lambda: _pon_section(scenario.pon, seed)))
    if scenario.cache is not None:
        builders.append(("cache", lambda: _cache_section(scenario.cache)))
    sections = []
    for name, build in builders:
        try:
            sections.append(build())
        except VhcnError as exc:
            raise ComputationError(name, exc) from exc
    return Report(scenario.title, list(scenario.defaults), sections)


# --- rendering ----------------------------------------------------------------

def _display(value, kind):
    if isinstance(value, str):
        return value
    if kind == "rate":
        return fmt_rate(value)
    if kind == "time":
        return fmt_ms(value)
    if kind == "prob":
        return fmt_percent(value)
    if kind == "loss":
        return f"{100.0 * value:.3g}%"
    if kind == "bool":
        return "yes" if value else "no"
    if kind == "count":
        return f"{value:g}"
    if kind == "bytes":
        return f"{value:g} B"
    return fmt_ratio(value)


def _align(rows):
    widths = {}
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths.get(i, 0), len(cell))
    lines = []
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return lines


def render_text(report: Report) -> str:
    lines = []
    if report.title:
        lines.append(report.title)
        lines.append("=" * len(report.title))
    if report.defaults:
        lines.append("Defaults applied:")
        for section, key, value in report.defaults:
            lines.append(f"  [{section}] {key} = {value}")
    else:
        lines.append("Defaults applied: none")
    for sec in report.sections:
        lines.append("")
        lines.append(f"[{sec.name}]")
        for i, table in enumerate(sec.tables):
            if i:
                lines.append("")
            lines.extend(_align(table))
        if not sec.tables:
            lines.extend(_align([[r.item, r.quantity, _display(r.value, r.kind)] for r in sec.records]))
        for note in sec.notes:
            lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


CSV_HEADER = ("section", "item", "quantity", "value", "unit")


def _csv_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, float):
        if math.isinf(value):
            return "unbounded"
        return repr(value)
    return str(value)


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(CSV_HEADER)
    for sec in report.sections:
        for r in sec.records:
            writer.writerow([sec.name, r.item, r.quantity, _csv_value(r.value), UNITS[r.kind]])
    return buf.getvalue()


def parse_csv(text: str) -> list[tuple[str, str, str, object, str]]:
    """Read back ``render_csv`` output; numbers become floats, booleans bools."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError("missing CSV header")
    out = []
    for section, item, quantity, value, unit in rows[1:]:
        parsed: object = value
        if value == "unbounded":
            parsed = math.inf
        elif value in ("true", "false"):
            parsed = value == "true"
        elif unit:
            parsed = float(value)
        out.append((section, item, quantity, parsed, unit))
    return out


def boundary_section(curve) -> Section:
    out = Section("boundary")
    for i, (bw, rtt) in enumerate(curve):
        out.add(f"point{i}", "bandwidth", bw, "rate")
        out.add(f"point{i}", "critical_rtt", rtt, "time")
    out.tables.append([["bandwidth", "critical RTT"]] + [[fmt_rate(b), fmt_ms(t)] for b, t in curve])
    return out
