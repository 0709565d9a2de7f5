"""Command-line entry point: ``geocurrents <subcommand> ...``.

Every output document carries a provenance header (tool version, seed,
budgets).  Exit status: 0 on success, 2 on invalid input, 3 when an
enumeration did not stabilize and ``--strict`` is set, 1 when ``check`` fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .currents import Current, LiftCrossingBudget, intersection, intersection_cc
from .fuchsian import GroupPresentation, closed_geodesic, conjugacy_representatives, load_group
from .metric import PseudoDistanceContext, pseudo_distance, systole

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_NONCONVERGED = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class JobConfig:
    subcommand: str
    seed: int = 0
    fmt: str = "json"
    strict: bool = False
    budgets: dict = field(default_factory=dict)
    args: argparse.Namespace | None = None

    def __post_init__(self):
        for k, v in self.budgets.items():
            vals = v if isinstance(v, (list, tuple)) else [v]
            if any(isinstance(x, (int, float)) and not x > 0 for x in vals):
                raise InputError(f"{k} must be positive")

    def header(self) -> dict:
        return {"tool": "geocurrents", "version": __version__, "command": self.subcommand, "seed": self.seed, "budgets": self.budgets}


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _load_json_arg(text: str):
    path = Path(text)
    if path.suffix == ".json" and path.exists():
        return json.loads(path.read_text())
    return json.loads(text)


def _group(args) -> GroupPresentation:
    try:
        return load_group(args.group)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad --group: {exc}") from exc


def _current(G: GroupPresentation, text: str) -> Current:
    try:
        return Current.from_json(_load_json_arg(text), G)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad current: {exc}") from exc


def _point(text: str) -> complex:
    try:
        z = complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise InputError(f"bad point {text!r}") from exc
    if z.imag <= 0:
        raise InputError(f"point {text!r} is not in the upper half-plane")
    return z


def _budget(args) -> LiftCrossingBudget:
    return LiftCrossingBudget(args.max_word_len, args.window)


# -- subcommands: each returns (result dict, converged) -----------------------


def cmd_intersect(cfg: JobConfig):
    a = cfg.args
    G = _group(a)
    b = _budget(a)
    if a.mu or a.nu:
        if not (a.mu and a.nu):
            raise InputError("--mu and --nu go together")
        r = intersection(_current(G, a.mu), _current(G, a.nu), b)
    else:
        if not (a.c and a.c2):
            raise InputError("give --c and --c2 (words) or --mu and --nu (currents)")
        try:
            c1, c2 = closed_geodesic(G, a.c), closed_geodesic(G, a.c2)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        r = intersection_cc(c1, c2, b)
    return r.to_json(), r.converged


def cmd_pseudo_dist(cfg: JobConfig):
    a = cfg.args
    G = _group(a)
    ctx = PseudoDistanceContext(_current(G, a.current), _budget(a))
    r = pseudo_distance(ctx, _point(a.x), _point(a.y))
    return {"x": a.x, "y": a.y, **r.to_json()}, r.converged


def cmd_systole(cfg: JobConfig):
    a = cfg.args
    G = _group(a)
    ctx = PseudoDistanceContext(_current(G, a.current), _budget(a))
    rep = systole(ctx, a.length_bound, a.simple_only, a.census_max_word_len)
    return rep.to_json(), rep.converged


def cmd_decompose(cfg: JobConfig):
    from .lamination import decompose_current

    a = cfg.args
    G = _group(a)
    mu = _current(G, a.current)
    census = conjugacy_representatives(G, a.census_max_word_len, a.length_bound)
    d = decompose_current(mu, census, _budget(a))
    return {**d.to_json(), "probe_check": _probe_check(mu, a.lift_radius, a.probes, cfg.seed)}, True


def _probe_check(mu: Current, radius: int, probes: int, seed: int) -> dict:
    """Lamination checks on the lifts of the support of ``mu`` within a word ball."""
    import numpy as np

    from .hyp_geom import Geodesic, random_geodesics
    from .lamination import GeodesicConfig, verify_lamination
    from .lifts import lift_table

    lifts = []
    for c, _ in mu.atoms:
        t = lift_table(mu.group, c.matrix, radius)
        lifts += [Geodesic(float(u), float(v)) for u, v in zip(t.u, t.v)]
    if not lifts:
        return {"ok": True, "probes": 0, "lifts": 0}
    rep = verify_lamination(GeodesicConfig.of(lifts), random_geodesics(np.random.default_rng(seed), probes))
    return {"ok": rep.ok, "probes": rep.probes, "lifts": len(lifts), "lambda_size": rep.lambda_size, "violations": rep.violations}


def _t_grid(text: str) -> list[float]:
    try:
        ts = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"bad --t-grid {text!r}") from exc
    if not ts or any(t <= 1 for t in ts):
        raise InputError("--t-grid values must exceed 1")
    return ts


def cmd_degenerate(cfg: JobConfig):
    from .funfield import jordan_projection_at, parse_rep
    from .funfield.examples import hyperbolic_census

    a = cfg.args
    try:
        rep = parse_rep(a.rep)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    ts = _t_grid(a.t_grid)
    rows = []
    for row in hyperbolic_census(rep, a.max_word_len):
        M = rep.image(row.word)
        t = ts[-1]
        jt = [x / math.log(t) for x in jordan_projection_at(M, t).as_floats()]
        rows.append(
            {
                "word": row.word,
                "trace": str(row.trace),
                "jordan_ff": [str(x) for x in row.jordan_ff.entries],
                "jordan_t": jt,
                "gap_norm": str(row.gap),
                "euclid_norm": row.euclid,
                "hyp_length": row.hyp_length,
                "ratio": row.ratio,
            }
        )
    return {"rep": rep.name, "orders": list(rep.orders), "t": ts[-1], "rows": rows}, True


def cmd_check(cfg: JobConfig):
    from .checks import run_all

    res = run_all(cfg.seed, _budget(cfg.args))
    return {"passed": all(r.passed for r in res), "suites": [r.to_json() for r in res]}, True


COMMANDS = {
    "intersect": cmd_intersect,
    "pseudo-dist": cmd_pseudo_dist,
    "systole": cmd_systole,
    "decompose": cmd_decompose,
    "degenerate": cmd_degenerate,
    "check": cmd_check,
}


# -- output ------------------------------------------------------------------


def _csv(cfg: JobConfig, result: dict) -> str:
    buf = io.StringIO()
    for k, v in cfg.header().items():
        buf.write(f"# {k}: {json.dumps(v, sort_keys=True)}\n")
    rows = result.get("rows")
    if rows is None:
        rows = [{k: v for k, v in result.items() if not isinstance(v, (list, dict))}]
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        cols = list(rows[0])
        w.writerow(cols)
        for r in rows:
            w.writerow([" ".join(_fmt(x) for x in r[c]) if isinstance(r[c], list) else _fmt(r[c]) for c in cols])
    return buf.getvalue()


def render(cfg: JobConfig, result: dict) -> str:
    if cfg.fmt == "csv":
        return _csv(cfg, result)
    return json.dumps({"provenance": cfg.header(), **result}, indent=2, sort_keys=True) + "\n"


def run(cfg: JobConfig) -> tuple[int, str]:
    result, converged = COMMANDS[cfg.subcommand](cfg)
    out = render(cfg, result)
    if cfg.subcommand == "check" and not result["passed"]:
        return EXIT_FAIL, out
    if cfg.strict and not converged:
        return EXIT_NONCONVERGED, out
    return EXIT_OK, out


# -- argument parsing --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--strict", action="store_true", help="exit 3 when an enumeration did not stabilize")
    common.add_argument("--max-word-len", "--budget", dest="max_word_len", type=int, default=8)
    common.add_argument("--window", type=int, default=2, help="stabilization window (word-length increments)")

    p = _Parser(prog="geocurrents", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"geocurrents {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    s = sub.add_parser("intersect", parents=[common], help="intersection number of two curves or currents")
    s.add_argument("--group", default="punctured_torus")
    s.add_argument("--c")
    s.add_argument("--c2")
    s.add_argument("--mu", help="current as JSON text or a .json path")
    s.add_argument("--nu")

    s = sub.add_parser("pseudo-dist", parents=[common], help="pseudo-distance between two points")
    s.add_argument("--group", default="punctured_torus")
    s.add_argument("--current", required=True)
    s.add_argument("--x", required=True, help="point such as 0+1j")
    s.add_argument("--y", required=True)

    for name, hlp in (("systole", "census systole of a current"), ("decompose", "orthogonal split of a current")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--group", default="punctured_torus")
        s.add_argument("--current", required=True)
        s.add_argument("--length-bound", type=float, default=2 * math.acosh(10))
        s.add_argument("--census-max-word-len", type=int, default=12)
        if name == "systole":
            s.add_argument("--simple-only", action="store_true")
        else:
            s.add_argument("--probes", type=int, default=200, help="random probe geodesics for the lamination check")
            s.add_argument("--lift-radius", type=int, default=2, help="word-ball radius for lifting the support")

    s = sub.add_parser("degenerate", parents=[common], help="valuation Jordan projections of a triangle-group representation")
    s.add_argument("--rep", default="334", help="334 or pqr:p,q,r")
    s.add_argument("--t-grid", default="1e3,1e4,1e5,1e6")

    sub.add_parser("check", parents=[common], help="run the property suites")
    return p


def _budgets(args) -> dict:
    out = {"max_word_len": args.max_word_len, "stabilization_window": args.window}
    for k in ("length_bound", "census_max_word_len", "probes", "lift_radius"):
        if hasattr(args, k):
            out[k] = getattr(args, k)
    if hasattr(args, "t_grid"):
        out["t_grid"] = args.t_grid
    return out


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = JobConfig(args.subcommand, args.seed, args.fmt, args.strict, _budgets(args), args)
        _budget(args)
        code, out = run(cfg)
    except InputError as exc:
        print(f"geocurrents: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"geocurrents: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
