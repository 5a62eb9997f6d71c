"""Command line front end: ``trop <group> <command> FILE [options]``.

Every command prints a JSON report; with ``--out DIR`` the report (and any
CSV or point dump) is also written there. Exit status is 0 when the report
passes, 1 when a check fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import amoeba, curve, hypersurface
from .errors import NotTransverseError, ParseError, TroplabError
from .formats import (
    diagnose,
    float_or_none,
    graph_to_json,
    load_json,
    parse_family,
    parse_graph,
    parse_polynomial,
    rat,
)
from .geom_core import to_fraction

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

COMMANDS = {
    "hypersurface": ("eval", "cells", "dual", "section", "convexity0"),
    "curve": ("balance", "weakbalance", "path", "section", "witnesses", "from-poly"),
    "amoeba": ("sample", "converge", "avoid", "linesection"),
}

CSV_COLUMNS = ("t", "scale", "n_points", "skipped", "gap_t2s", "gap_s2t", "runtime_ms")


@dataclass
class ExperimentConfig:
    group: str
    command: Optional[str]
    inputs: list
    window: Optional[tuple] = None
    grid: tuple = amoeba.DEFAULT_GRID
    t_values: tuple = ()
    tol: float = amoeba.DEFAULT_TOL
    margin: float = 0.25
    out: Optional[Path] = None
    scaling: str = "minplus"
    fibers: str = "both"
    convention: str = "min"
    dump_points: bool = False
    timing: bool = False
    seed: int = 0
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        ts = tuple(float(t) for t in self.t_values)
        if any(not 0 < t < 1 for t in ts) or any(b >= a for a, b in zip(ts, ts[1:])):
            raise ParseError("--t values must be strictly decreasing in (0, 1)")
        self.t_values = ts
        if self.window is not None:
            w = self.window
            if len(w) not in (2, 4) or any(w[2 * i] >= w[2 * i + 1] for i in range(len(w) // 2)):
                raise ParseError("--window must be x0,x1[,y0,y1] with x0 < x1 and y0 < y1")


# --- argument parsing ---------------------------------------------------------


def _rat_list(text):
    try:
        return tuple(to_fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational list {text!r}") from exc


def _int_list(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


def _float_list(text):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from exc


def _rational(text):
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", type=Path, help="directory for report files")
    common.add_argument("--window", type=_float_list, help="x0,x1[,y0,y1]")
    common.add_argument("--t", type=_float_list, default=(), help="comma separated, decreasing")
    common.add_argument("--grid", type=_int_list, default=amoeba.DEFAULT_GRID, help="moduli,arguments")
    common.add_argument("--tol", type=float, default=amoeba.DEFAULT_TOL)
    common.add_argument("--margin", type=float, default=0.25)
    common.add_argument("--scaling", choices=amoeba.SCALINGS, default="minplus")
    common.add_argument("--fibers", choices=("z1", "both"), default="both")
    common.add_argument("--convention", choices=("min", "max"), default="min")
    common.add_argument("--dump-points", action="store_true")
    common.add_argument("--timing", action="store_true", help="write runtimes into CSV bodies")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--point", type=_rat_list)
    common.add_argument("--direction", type=_rat_list)
    common.add_argument("--monomial", type=_int_list)
    common.add_argument("--w", type=_int_list, help="integer functional for curve path")
    common.add_argument("--normal", type=_int_list)
    common.add_argument("--offset", type=_rational)
    common.add_argument("--center", type=_rat_list)
    common.add_argument("--radius", type=_rational)
    common.add_argument("--eta", type=float)

    parser = _Parser(prog="trop", description="Tropical hypersurfaces, balanced curves and amoeba limits.")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    for group, commands in COMMANDS.items():
        gp = groups.add_parser(group)
        cmds = gp.add_subparsers(dest="command", required=True, parser_class=_Parser)
        for cmd in commands:
            cp = cmds.add_parser(cmd, parents=[common])
            cp.add_argument("input")
    vp = groups.add_parser("validate", parents=[common])
    vp.add_argument("input")
    return parser


_VALUE_FLAGS = {
    "--window", "--t", "--grid", "--point", "--direction", "--monomial",
    "--w", "--normal", "--offset", "--center", "--radius", "--eta", "--tol", "--margin",
}


def _glue_negative_values(argv):
    # argparse would read "-2,2" as an option; turn "--flag -2,2" into "--flag=-2,2"
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            val = next(it, None)
            out.append(tok if val is None else f"{tok}={val}")
        else:
            out.append(tok)
    return out


def config_from_args(argv) -> ExperimentConfig:
    ns = build_parser().parse_args(_glue_negative_values(list(argv)))
    opts = {
        k: getattr(ns, k)
        for k in ("point", "direction", "monomial", "w", "normal", "offset", "center", "radius", "eta")
    }
    return ExperimentConfig(
        group=ns.group,
        command=getattr(ns, "command", None),
        inputs=[ns.input],
        window=ns.window,
        grid=tuple(ns.grid),
        t_values=ns.t,
        tol=ns.tol,
        margin=ns.margin,
        out=ns.out,
        scaling=ns.scaling,
        fibers=ns.fibers,
        convention=ns.convention,
        dump_points=ns.dump_points,
        timing=ns.timing,
        seed=ns.seed,
        options=opts,
    )


# --- report helpers ---------------------------------------------------------------


def _need(cfg, *names):
    missing = [n for n in names if cfg.options.get(n) is None]
    if missing:
        raise ParseError("missing option(s): " + ", ".join("--" + n for n in missing))
    return [cfg.options[n] for n in names]


def _rats(v):
    return [rat(x) for x in v]


def _path_json(G, path: curve.MonotonePath):
    return {
        "w": list(path.w),
        "start": _rats(path.start),
        "steps": [{"edge": k, "orientation": o} for k, o in path.steps],
        "vertices": [_rats(G.vertices[i]) for i in path.vertices],
        "terminal_ray": list(path.ray_direction),
    }


def _hyperplane(cfg, n):
    normal, offset = _need(cfg, "normal", "offset")
    if len(normal) != n:
        raise ParseError(f"--normal must have {n} entries")
    try:
        return curve.Hyperplane(normal, offset)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _window(cfg, n):
    if cfg.window is None:
        if n == 2:
            raise ParseError("--window x0,x1,y0,y1 is required")
        return None
    if len(cfg.window) != 2 * n:
        raise ParseError(f"--window needs {2 * n} numbers for n = {n}")
    return cfg.window


def _num(x):
    return format(x, ".12g")


def _csv_text(report: amoeba.GapReport, timing: bool) -> str:
    buf = io.StringIO()
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    runtimes = ",".join(_num(r.runtime_ms) for r in report.rows)
    buf.write(f"# trop amoeba converge; generated {stamp}; runtime_ms={runtimes}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in report.rows:
        writer.writerow(
            [_num(r.t), _num(r.scale), r.n_points, r.skipped, _num(r.gap_t2s), _num(r.gap_s2t),
             _num(r.runtime_ms) if timing else "NA"]
        )
    return buf.getvalue()


# --- commands -----------------------------------------------------------------------


def _hypersurface(cfg, obj):
    T = parse_polynomial(obj, cfg.convention)
    cmd = cfg.command
    if cmd == "eval":
        (w,) = _need(cfg, "point")
        return {
            "point": _rats(w),
            "value": rat(hypersurface.evaluate(T, w)),
            "argmin": sorted(list(a) for a in hypersurface.argmin_support(T, w)),
            "contains": len(T) >= 2 and hypersurface.contains(T, w),
            "pass": True,
        }
    if cmd == "cells":
        monos = [cfg.options["monomial"]] if cfg.options.get("monomial") else list(T.exponents)
        regions = []
        for a in monos:
            reg = hypersurface.linearity_region(T, a)
            regions.append(
                {
                    "monomial": list(reg.monomial),
                    "halfspaces": [{"normal": list(nrm), "offset": rat(off)} for nrm, off in reg.halfspaces],
                    "empty": reg.empty,
                }
            )
        return {"regions": regions, "pass": True}
    if cmd == "dual":
        cells = hypersurface.dual_subdivision(T)
        return {"cells": [{"dim": c.dim, "exponents": [list(a) for a in c.exponents]} for c in cells], "pass": True}
    p, d = _need(cfg, "point", "direction")
    if cmd == "section":
        sec = hypersurface.line_section(T, p, d)
        return {"breakpoints": _rats(sec.breakpoints), "labels": [list(a) for a in sec.labels], "pass": True}
    rep = hypersurface.check_zero_convexity_along_line(T, p, d)
    return {"breakpoints": _rats(rep.breakpoints), "labels": [list(a) for a in rep.labels], "pass": rep.passed}


def _curve(cfg, obj):
    cmd = cfg.command
    if cmd == "from-poly":
        T = parse_polynomial(obj, cfg.convention)
        G = curve.curve_from_plane_tropical_polynomial(T)
        return {"graph": graph_to_json(G), "pass": curve.check_balanced(G).passed}
    G = parse_graph(obj)
    if cmd == "balance":
        rep = curve.check_balanced(G)
        return {"residuals": [list(r) for r in rep.residuals], "pass": rep.passed}
    if cmd == "weakbalance":
        rep = curve.check_weakly_balanced(G)
        return {
            "vertices": [
                {"vertex": i, "pass": ok, "witness": None if wit is None else list(wit)}
                for i, (ok, wit) in enumerate(zip(rep.vertex_passed, rep.witnesses))
            ],
            "pass": rep.passed,
        }
    if cmd == "path":
        w, p = _need(cfg, "w", "point")
        path = curve.monotone_unbounded_path(G, w, p)
        return {"path": _path_json(G, path), "pass": not curve.verify_path(G, path)}
    H = _hyperplane(cfg, G.n)
    if cmd == "section":
        sec = curve.hyperplane_transversal(G, H)
        if isinstance(sec, curve.NotTransverse):
            return {"transverse": False, "reasons": list(sec.reasons), "pass": False}
        return {
            "transverse": True,
            "crossings": [{"point": _rats(c.point), "edge": c.edge, "sign": c.sign} for c in sec.crossings],
            "pass": True,
        }
    pairs = curve.convexity_witnesses(G, H)
    ok = all(not curve.verify_path(G, wp.ascending) and not curve.verify_path(G, wp.descending) for wp in pairs)
    return {
        "witnesses": [
            {
                "point": _rats(wp.crossing.point),
                "edge": wp.crossing.edge,
                "ascending": _path_json(G, wp.ascending),
                "descending": _path_json(G, wp.descending),
            }
            for wp in pairs
        ],
        "pass": ok,
    }


def _amoeba(cfg, obj, files):
    F = parse_family(obj)
    window = _window(cfg, F.n)
    cmd = cfg.command
    kw = dict(tol=cfg.tol, scaling=cfg.scaling, fibers=cfg.fibers)
    if not cfg.t_values:
        raise ParseError("--t is required")
    if cmd == "sample":
        t = cfg.t_values[0]
        s = amoeba.sample_amoeba(F, t, window, cfg.grid, margin=cfg.margin if window else 0.0, **kw)
        if cfg.dump_points:
            files["amoeba_sample_points.json"] = json.dumps(
                {"t": t, "scaling": cfg.scaling, "points": s.points.tolist()}
            )
        return {"t": t, "scale": s.scale, "n_points": len(s), "skipped": s.skipped, "pass": True}
    if cmd == "converge":
        if window is None:
            raise ParseError("--window is required")
        rep = amoeba.convergence_table(F, cfg.t_values, window, cfg.grid, cfg.margin, **kw)
        files["amoeba_converge.csv"] = _csv_text(rep, cfg.timing)
        rows = [
            {"t": r.t, "scale": r.scale, "n_points": r.n_points, "skipped": r.skipped,
             "gap_t2s": r.gap_t2s, "gap_s2t": r.gap_s2t, "runtime_ms": r.runtime_ms}
            for r in rep.rows
        ]
        return {"rows": rows, "pass": True}
    if cmd == "avoid":
        center, radius = _need(cfg, "center", "radius")
        rep = amoeba.compact_avoidance_check(F, center, radius, cfg.t_values, window, cfg.grid, **kw)
        return {
            "t": list(rep.t_values),
            "clearance": [float_or_none(c) for c in rep.clearances],
            "positive": list(rep.positive),
            "non_decreasing": rep.non_decreasing,
            "pass": rep.eventually_positive,
        }
    (eta,) = _need(cfg, "eta")
    H = _hyperplane(cfg, F.n)
    t = cfg.t_values[0]
    gaps = amoeba.line_section_gap(F, t, H, eta, window, cfg.grid, **kw)
    return {
        "t": t,
        "points": [
            {"point": _rats(g.point), "edge": g.edge, "distance": float_or_none(g.distance), "empty_tube": g.empty_tube}
            for g in gaps
        ],
        "pass": not any(g.empty_tube for g in gaps),
    }


def run(cfg: ExperimentConfig, stdout=None) -> int:
    """Execute one command; returns the exit code."""
    stdout = stdout or sys.stdout
    files = {}
    try:
        if cfg.group == "validate":
            problems = diagnose(cfg.inputs[0])
            report = {"diagnostics": problems, "pass": not problems}
        else:
            obj = load_json(cfg.inputs[0])
            if cfg.group == "hypersurface":
                report = _hypersurface(cfg, obj)
            elif cfg.group == "curve":
                report = _curve(cfg, obj)
            else:
                report = _amoeba(cfg, obj, files)
    except ParseError as exc:
        print(json.dumps({"error": str(exc)}), file=stdout)
        return EXIT_INPUT
    except NotTransverseError as exc:
        report = {"error": str(exc), "reasons": list(exc.reasons), "pass": False}
    except TroplabError as exc:
        report = {"error": f"{type(exc).__name__}: {exc}", "pass": False}

    name = cfg.group if cfg.command is None else f"{cfg.group}_{cfg.command.replace('-', '_')}"
    text = json.dumps(report, indent=2)
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / f"{name}.json").write_text(text + "\n")
        for fname, body in files.items():
            (cfg.out / fname).write_text(body)
    print(text, file=stdout)
    return EXIT_PASS if report.get("pass") else EXIT_FAIL


def main(argv=None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except ParseError as exc:
        print(f"trop: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
