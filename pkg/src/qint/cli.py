"""Command line front end.

Exit codes: 0 on success, 1 for validation or domain errors, 2 when the state
cap is exceeded.  Machine output uses sorted keys and renders rationals as
``p/q`` strings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import curve as curve_mod
from .coloring import dim_count, enumerate_colorings
from .errors import DomainError, QintError
from .metric import PairFunction, compare_quantum_path, render
from .quantum import bounds_report, verify_theorem_family
from .statesum import check_shift, coefficient_table, numeric_state_sum, shift_key, state_cap
from .surface import CATALOG, DualGraph, SurfaceModel, parse_graph_ref, validate_graph


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    state_cap: int
    fmt: str


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _load_surface(ref: str) -> SurfaceModel:
    if ref.startswith("catalog:"):
        return parse_graph_ref(ref)
    graph = DualGraph.from_json(_read_json(ref))
    validate_graph(graph).raise_if_invalid("dual graph")
    return SurfaceModel(graph)


def _load_curve(path: str):
    return curve_mod.load(_read_json(path))


def _parse_assignments(text: str | None, what: str) -> dict[str, int]:
    out: dict[str, int] = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        if not sep:
            raise DomainError(f"{what} entries look like edge=value, got {item!r}")
        try:
            out[key.strip()] = int(value)
        except ValueError as exc:
            raise DomainError(f"{what} value for {key} must be an integer") from exc
    return out


def _shift_text(edges, key) -> str:
    return " ".join(f"{e}={v}" for e, v in zip(edges, key))


# -- commands -------------------------------------------------------------------


def cmd_colorings(cfg: RunConfig) -> str:
    surface = _load_surface(cfg.args.graph)
    cols = enumerate_colorings(surface.graph, cfg.args.r)
    if not cfg.args.list:
        return str(len(cols))
    if cfg.fmt == "csv":
        edges = list(surface.graph.edge_ids)
        return _csv(edges, [[c.values[e] for e in edges] for c in cols])
    return _dump([dict(sorted(c.values.items())) for c in cols])


def cmd_coeffs(cfg: RunConfig) -> str:
    a = _load_curve(cfg.args.curve)
    edges = list(a.graph.edge_ids)
    table = coefficient_table(a, cfg.state_cap)
    if cfg.args.shift:
        wanted = check_shift(a, _parse_assignments(cfg.args.shift, "shift"))
        keys = [shift_key(wanted, edges)]
    else:
        keys = list(table)
    if cfg.fmt == "json":
        rows = [{"shift": dict(zip(edges, k)), **table[k].to_json()} for k in keys]
        return _dump({"edges": edges, "upToGlobalSign": True, "coefficients": rows})
    return _csv(
        ["shift", "n_pp", "n_pm", "poly", "nonzero"],
        [[_shift_text(edges, k), table[k].n_pp, table[k].n_pm, str(table[k].poly), str(table[k].nonzero).lower()]
         for k in keys],
    )


def cmd_bounds(cfg: RunConfig) -> str:
    a = _load_curve(cfg.args.curve)
    rep = bounds_report(a, cfg.state_cap)
    body = rep.to_json()
    if cfg.args.verify_family:
        fam = verify_theorem_family(a, cfg.state_cap)
        body["family"] = fam.to_json()
    if cfg.fmt == "csv":
        header = ["nLim", "total", "genus", "lower", "upper", "maxBound", "twoPow", "passed"]
        row = [body[k] for k in header]
        row = [str(v).lower() if isinstance(v, bool) else v for v in row]
        if cfg.args.verify_family:
            header += ["familyWitnesses", "familyFalsifications"]
            row += [body["family"]["distinctWitnesses"], len(body["family"]["falsifications"])]
        return _csv(header, [row])
    return _dump(body)


def cmd_curve(cfg: RunConfig) -> str:
    action = cfg.args.action
    if action == "validate":
        a = curve_mod.from_json(_read_json(cfg.args.target))
        rep = curve_mod.validate_arc_system(a)
        out = _dump(rep.to_json())
        if not rep.ok:
            raise _ReportedFailure(out)
        return out
    if action == "profile":
        a = _load_curve(cfg.args.target)
        body = curve_mod.intersection_profile(a).to_json()
        body["components"] = curve_mod.components(a)
        body["parallelComponents"] = dict(sorted(a.parallel.items()))
        return _dump(body)
    if action == "example":
        if cfg.args.target not in curve_mod.EXAMPLES:
            raise DomainError(f"unknown example {cfg.args.target!r}; choose from {sorted(curve_mod.EXAMPLES)}")
        return _dump(curve_mod.to_json(curve_mod.EXAMPLES[cfg.args.target]()))
    if action == "build":
        surface = _load_surface(cfg.args.target)
        m = _parse_assignments(cfg.args.m, "--m")
        t = _parse_assignments(cfg.args.t, "--t")
        a = curve_mod.dehn_thurston_system(surface, m, t)
        curve_mod.validate_arc_system(a).raise_if_invalid("arc system")
        return _dump(curve_mod.to_json(a))
    raise DomainError(f"unknown curve action {action!r}")


def _parse_value(v):
    if v == "inf" or v is None:
        return "inf"
    if isinstance(v, float):
        raise DomainError(f"pair values must be integers, 'p/q' strings or 'inf', got {v!r}")
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"bad pair value {v!r}") from exc


def cmd_metric(cfg: RunConfig) -> str:
    graph = _read_json(cfg.args.graph)
    nu_data = _read_json(cfg.args.nu)
    try:
        vertices = [str(v) for v in graph["vertices"]]
        edges = [(str(u), str(v)) for u, v in graph["edges"]]
        values = {}
        for p, q, v in nu_data["pairs"]:
            values[(str(p), str(q))] = _parse_value(v)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed metric input: {exc!r}") from exc
    rep = compare_quantum_path(vertices, edges, PairFunction(tuple(vertices), values))
    body = rep.to_json()
    if cfg.fmt == "csv":
        rows = [[r["p"], r["q"], r["nu"], r["dQt"], r["dPi"]] for r in body["pairs"]]
        return _csv(["p", "q", "nu", "d_qt", "d_pi"], rows)
    return _dump(body)


def cmd_verlinde(cfg: RunConfig) -> str:
    g, r = cfg.args.genus, cfg.args.r
    if g not in CATALOG:
        raise DomainError(f"catalog graphs exist for genus {sorted(CATALOG)}")
    counts = {name: dim_count(parse_graph_ref(f"catalog:{name}:{g}").graph, r) for name in CATALOG[g]}
    verdict = "MATCH" if len(set(counts.values())) == 1 else "MISMATCH"
    line = " ".join(f"{n}={c}" for n, c in counts.items()) + f" {verdict}"
    if verdict != "MATCH":
        raise _ReportedFailure(line)
    return line


def cmd_numeric_check(cfg: RunConfig) -> str:
    a = _load_curve(cfg.args.curve)
    theta = float(Fraction(cfg.args.theta))
    if not 0 < theta < Fraction(2, 3):
        raise DomainError("theta must lie in (0, 2/3)")
    edges = list(a.graph.edge_ids)
    table = coefficient_table(a, cfg.state_cap)
    rows = []
    worst = 0.0
    for k, c in table.items():
        direct = numeric_state_sum(a, dict(zip(edges, k)), theta, cfg.state_cap)
        normal = c.evaluate(theta)
        err = abs(direct - normal) / max(abs(direct), 1e-300) if abs(direct) > 1e-12 else abs(normal)
        worst = max(worst, err)
        rows.append({"shift": dict(zip(edges, k)), "direct": f"{direct.real:.15g}{direct.imag:+.15g}j",
                     "normalized": f"{normal.real:.15g}{normal.imag:+.15g}j", "relError": f"{err:.3e}"})
    ok = worst <= cfg.args.tolerance
    out = _dump({"theta": cfg.args.theta, "rows": rows, "worstRelError": f"{worst:.3e}", "passed": ok})
    if not ok:
        raise _ReportedFailure(out)
    return out


class _ReportedFailure(Exception):
    def __init__(self, output: str):
        super().__init__(output)
        self.output = output


COMMANDS = {
    "colorings": cmd_colorings,
    "coeffs": cmd_coeffs,
    "bounds": cmd_bounds,
    "curve": cmd_curve,
    "metric": cmd_metric,
    "verlinde-check": cmd_verlinde,
    "numeric-check": cmd_numeric_check,
}


def _add_format(p: argparse.ArgumentParser, flag: str, default: str) -> None:
    p.add_argument(flag, dest="fmt", choices=["json", "csv"], default=None, help=f"output format (default {default})")
    p.add_argument("--json", dest="fmt", action="store_const", const="json")
    p.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    p.set_defaults(default_fmt=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qint", description="Exact limit coefficients of curve operators.")
    parser.add_argument("--state-cap", type=int, default=None, help="maximum states per shift (env QINT_STATE_CAP)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("colorings", help="count or list admissible colorings")
    p.add_argument("--graph", required=True, help="dual graph JSON file or catalog:name[:genus]")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--list", action="store_true")
    _add_format(p, "--format", "json")

    p = sub.add_parser("coeffs", help="normalized limit coefficients of a curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--shift", help="single shift as e0=v,e1=w,... (unlisted edges are 0)")
    _add_format(p, "--out", "csv")

    p = sub.add_parser("bounds", help="quantum count and intersection bounds")
    p.add_argument("--curve", required=True)
    p.add_argument("--verify-family", action="store_true")
    _add_format(p, "--out", "json")

    p = sub.add_parser("curve", help="arc system utilities")
    p.add_argument("action", choices=["validate", "profile", "build", "example"])
    p.add_argument("target", help="arc system file; graph reference for build; example name")
    p.add_argument("--m", help="intersection numbers for build, e.g. e0=2,e1=1")
    p.add_argument("--t", help="twists for build, e.g. e0=1")
    p.set_defaults(default_fmt="json", fmt=None)

    p = sub.add_parser("metric", help="compare metrified quantum counts with the path metric")
    p.add_argument("--graph", required=True)
    p.add_argument("--nu", required=True)
    _add_format(p, "--report", "json")

    p = sub.add_parser("verlinde-check", help="coloring counts agree across catalog graphs")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(default_fmt="text", fmt=None)

    p = sub.add_parser("numeric-check", help="floating-point re-evaluation of the normalized coefficients")
    p.add_argument("--curve", required=True)
    p.add_argument("--theta", default="1/3")
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.set_defaults(default_fmt="json", fmt=None)
    return parser


def run(config: RunConfig) -> tuple[int, str, str]:
    """Execute a command; returns ``(exit code, stdout, stderr)``."""
    try:
        out = COMMANDS[config.command](config)
        return 0, out, ""
    except _ReportedFailure as exc:
        return 1, exc.output, ""
    except QintError as exc:
        return exc.exit_code, "", f"qint: {exc}"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cap = state_cap(args.state_cap)
    except QintError as exc:
        print(f"qint: {exc}", file=sys.stderr)
        return exc.exit_code
    cfg = RunConfig(args.command, args, cap, args.fmt or args.default_fmt)
    code, out, err = run(cfg)
    if out:
        print(out)
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
