"""Command-line interface.

Exit status: 0 on success, 2 when a computed invariant fails, 1 on usage
errors.  Numeric output is JSON (or CSV where offered) with sorted keys, so
identical flags give identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import attractor, cascade, cycles, render, renorm, transversal
from .errors import TanCascadeError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVARIANT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True, default=float))


def _table_rows(table: cascade.CascadeTable) -> list:
    rows = []
    for i in range(max(len(table.alphas), len(table.betas))):
        a = table.alphas[i] if i < len(table.alphas) else None
        b = table.betas[i] if i < len(table.betas) else None
        rows.append({
            "n": i + 1,
            "alpha": float(a.t) if a else None,
            "beta": float(b.t) if b else None,
            "residual_alpha": float(a.residuals[0]) if a else None,
            "residual_beta": float(b.residuals[0]) if b else None,
        })
    return rows


def table_csv(table: cascade.CascadeTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ["n", "alpha", "beta", "residual_alpha", "residual_beta"]
    w.writerow(cols)
    for r in _table_rows(table):
        w.writerow(["" if r[c] is None else repr(r[c]) for c in cols])
    return buf.getvalue()


def table_dict(table: cascade.CascadeTable) -> dict:
    return {
        "levels": _table_rows(table),
        "t_infinity_estimate": table.t_infinity_estimate if math.isfinite(table.t_infinity_estimate) else None,
        "ratio_sequence": table.ratio_sequence,
        "interleaved": table.is_interleaved(),
        "failures": table.failures,
        "precision_bits": table.precision_bits,
    }


def _build_table(args, depth: int) -> cascade.CascadeTable:
    kw = {}
    if args.seed_bracket:
        kw["alpha1_bracket"] = tuple(args.seed_bracket)
    return cascade.cascade_table(depth, precision_bits=args.precision_bits, **kw)


def cmd_cascade(args) -> int:
    table = _build_table(args, args.depth)
    if args.csv:
        sys.stdout.write(table_csv(table))
    else:
        _dump(table_dict(table))
    ok = table.is_interleaved() and not table.failures and len(table.betas) == args.depth
    return EXIT_OK if ok else EXIT_INVARIANT


def cycle_dict(c: cycles.Cycle | None, t: float) -> dict:
    if c is None:
        return {"t": t, "period_T": None, "points": [], "multiplier": None, "classification": None}
    return {
        "t": t,
        "period_T": c.period_T,
        "points": [float(p) for p in c.real_points],
        "multiplier": float(c.multiplier),
        "classification": c.classification,
        "residual": float(c.residual),
    }


def cmd_cycle(args) -> int:
    t = args.t
    if not 0 < t <= math.pi:
        print(f"t must lie in (0, pi], got {t}", file=sys.stderr)
        return EXIT_USAGE
    c = cycles.find_attracting_cycle(t, max_period_T=args.max_period, transient=args.transient,
                                     tol=args.tol if args.tol is not None else 1e-9)
    out = cycle_dict(c, t)
    if c is not None:
        out["distinct_cycles"] = cycles.count_distinct_cycles(t, max_period_T=args.max_period)
    _dump(out)
    if c is not None and t > 1 and c.period_T % 2:
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_renorm(args) -> int:
    try:
        lev = renorm.build_level(args.t, args.level, args.precision_bits)
    except TanCascadeError as exc:
        _dump({"t": args.t, "level": args.level, "error": f"{type(exc).__name__}: {exc}"})
        return EXIT_INVARIANT
    out = {
        "t": args.t,
        "level": lev.n,
        "a_n": float(lev.a_n),
        "b_n": float(lev.b_n),
        "sum_minus_pi": float(lev.a_n + lev.b_n - math.pi),
        "intervals": [[float(a), float(b)] for a, b in lev.intervals],
        "c1": float(lev.c1),
        "c2": float(lev.c2),
        "renormalizable_next": renorm.is_renormalizable(args.t, args.level),
    }
    _dump(out)
    return EXIT_OK if abs(out["sum_minus_pi"]) < 1e-12 else EXIT_INVARIANT


def cmd_transversal(args) -> int:
    bracket = tuple(args.seed_bracket) if args.seed_bracket else None
    try:
        cert = transversal.certificate(args.n, bracket=bracket)
    except (TanCascadeError, RuntimeError) as exc:
        _dump({"n": args.n, "error": f"{type(exc).__name__}: {exc}"})
        return EXIT_INVARIANT
    cert["certified"] = transversal.certificate_ok(cert)
    _dump(cert)
    return EXIT_OK if cert["certified"] else EXIT_INVARIANT


def default_t_star(depth: int = 8) -> float:
    return cascade.cascade_table(depth).t_infinity_estimate


def cmd_attractor(args) -> int:
    t_star = args.t_star if args.t_star is not None else default_t_star()
    try:
        system = attractor.build_levels(t_star, args.depth)
    except TanCascadeError as exc:
        _dump({"t_star": t_star, "depth": args.depth, "error": f"{type(exc).__name__}: {exc}",
               "max_valid_depth": attractor.max_valid_depth(t_star)})
        return EXIT_INVARIANT
    rep = attractor.verify_system(system)
    if args.csv:
        sys.stdout.write(attractor.dump_csv(system))
    else:
        print(attractor.dump_json(system, rep))
    return EXIT_OK if rep.ok else EXIT_INVARIANT


def cmd_plane(args) -> int:
    cfg = render.RenderConfig(region=tuple(args.region), width=args.width, height=args.height,
                              transient=args.transient, max_period_T=args.max_period,
                              tol=args.tol if args.tol is not None else 1e-6,
                              workers=args.workers)
    raster = render.render_parameter_plane(cfg)
    render.write_ppm(raster, args.out)
    _dump({"out": args.out, "width": cfg.width, "height": cfg.height,
           "periods": {str(int(p)): int((raster.periods == p).sum())
                       for p in sorted(set(raster.periods.ravel().tolist()))}})
    return EXIT_OK


def cmd_diagram(args) -> int:
    markers = ()
    if args.markers:
        table = cascade.cascade_table(args.markers)
        markers = tuple(e.t for e in table.alphas + table.betas)
    cfg = render.RenderConfig(region=(args.t_min, args.t_max), width=args.width,
                              height=args.height, transient=args.transient,
                              max_iter=args.samples, markers=markers)
    raster = render.render_orbit_diagram(cfg)
    render.write_ppm(raster, args.out)
    _dump({"out": args.out, "width": cfg.width, "height": cfg.height, "markers": list(markers)})
    return EXIT_OK


def cmd_report(args) -> int:
    from . import plotting

    os.makedirs(args.out_dir, exist_ok=True)
    status = EXIT_OK
    table = _build_table(args, args.depth)
    with open(os.path.join(args.out_dir, "cascade.csv"), "w") as fh:
        fh.write(table_csv(table))
    sys.stdout.write(table_csv(table))
    if table.failures or not table.is_interleaved():
        status = EXIT_INVARIANT

    cfg = render.RenderConfig(region=(0.0, math.pi), width=800, height=600, transient=3000)
    t = render.diagram_columns(cfg)
    op, om = render.diagram_orbits(t, cfg.transient, 128)
    plotting.plot_orbit_diagram(t, op, om, table, os.path.join(args.out_dir, "orbit_diagram.png"))
    plotting.plot_multipliers(table, os.path.join(args.out_dir, "multipliers.png"))

    certs = []
    for n in range(1, min(4, table.depth) + 1):
        c = transversal.certificate(n, table.beta(n))
        c["certified"] = transversal.certificate_ok(c)
        certs.append(c)
        if not c["certified"]:
            status = EXIT_INVARIANT
    with open(os.path.join(args.out_dir, "transversal.json"), "w") as fh:
        json.dump(certs, fh, indent=2, sort_keys=True)

    if table.depth >= 3:
        t_star = table.t_infinity_estimate
        depth = min(6, max(0, attractor.max_valid_depth(t_star)))
        system = attractor.build_levels(t_star, depth)
        rep = attractor.verify_system(system)
        with open(os.path.join(args.out_dir, "attractor.csv"), "w") as fh:
            fh.write(attractor.dump_csv(system))
        plotting.plot_cantor(system, os.path.join(args.out_dir, "cantor.png"))
        if not rep.ok:
            status = EXIT_INVARIANT

    if args.plane_size > 0:
        pc = render.RenderConfig(width=args.plane_size, height=args.plane_size)
        raster = render.render_parameter_plane(pc)
        render.write_ppm(raster, os.path.join(args.out_dir, "plane.ppm"))
        plotting.plot_parameter_plane(raster, pc.region, os.path.join(args.out_dir, "plane.png"))
    return status


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tancascade", description="Cascade numerics for T_t(z) = i t tan z.")
    p.add_argument("--precision-bits", type=int, default=53,
                   help="working precision for beta solves and renormalization (default 53)")
    p.add_argument("--tol", type=float, default=None,
                   help="near-return tolerance (default 1e-9 for cycle, 1e-6 for plane)")
    p.add_argument("--seed-bracket", type=float, nargs=2, metavar=("LO", "HI"),
                   help="bracket for beta_n (transversal) or alpha_1 (cascade, report)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("cascade", help="alpha_n / beta_n table")
    s.add_argument("--depth", type=int, default=5)
    fmt = s.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true", help="CSV output")
    s.set_defaults(func=cmd_cascade)

    s = sub.add_parser("cycle", help="attracting cycle of the asymptotic value t")
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--max-period", type=int, default=1024)
    s.add_argument("--transient", type=int, default=5000)
    s.set_defaults(func=cmd_cycle)

    s = sub.add_parser("renorm", help="pre-poles and orbit constants at one level")
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--level", type=int, required=True)
    s.set_defaults(func=cmd_renorm)

    s = sub.add_parser("transversal", help="transfer-operator certificate at beta_n")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_transversal)

    s = sub.add_parser("attractor", help="Cantor system near t_infinity")
    s.add_argument("--depth", type=int, default=4)
    s.add_argument("--t-star", type=float, default=None)
    s.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_attractor)

    s = sub.add_parser("plane", help="parameter-plane period raster (PPM)")
    s.add_argument("--region", type=float, nargs=4, default=list(render.PLANE_REGION),
                   metavar=("RE0", "RE1", "IM0", "IM1"))
    s.add_argument("--width", type=int, default=400)
    s.add_argument("--height", type=int, default=400)
    s.add_argument("--transient", type=int, default=1500)
    s.add_argument("--max-period", type=int, default=64)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_plane)

    s = sub.add_parser("diagram", help="real orbit diagram (PPM)")
    s.add_argument("--t-min", type=float, default=0.0)
    s.add_argument("--t-max", type=float, default=math.pi)
    s.add_argument("--width", type=int, default=800)
    s.add_argument("--height", type=int, default=600)
    s.add_argument("--transient", type=int, default=3000)
    s.add_argument("--samples", type=int, default=256)
    s.add_argument("--markers", type=int, default=0, metavar="DEPTH",
                   help="draw alpha/beta markers up to this cascade depth")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_diagram)

    s = sub.add_parser("report", help="cascade CSV plus matplotlib figures")
    s.add_argument("--out-dir", required=True)
    s.add_argument("--depth", type=int, default=5)
    s.add_argument("--plane-size", type=int, default=0,
                   help="also render an N x N parameter plane (0 to skip)")
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision_bits <= 0:
        parser.error("--precision-bits must be positive")
    try:
        return args.func(args)
    except TanCascadeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
