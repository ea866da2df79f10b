"""Command-line front end.

Exit status 0 on success, 1 on a domain error (no closed form and no ``--mc``),
2 on a usage error. Errors print one line ``error=<code>: <message>`` on stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import io, svg
from .coords import JumpRates, STCoords, UVCoords, rates_to_uv, uv_to_rates
from .curves import curve_grid
from .envmodel import EnvPair, classify
from .invasion import DegenerateLogistic, estimate_invasion_rate, chart_weights
from .regimes import (
    CATALOG_NAMES,
    DEFAULT_BAND,
    catalog,
    classify_regime,
    default_grid,
    load_pair,
    regime_map,
    witnesses_from_map,
)
from .sim import SimConfig, detect_regime, estimate_lambda, simulate_pdmp, simulate_switched_logistic

FIGURES = {
    "1": ("1-2", "Figure 1"),
    "2": ("3-3", "Type 3-3"),
    "3a": ("1-3", "Type 1-3"),
    "3b": ("1-4", "Type 1-4"),
    "3c": ("3-4", "Type 3-4"),
    "3d": ("4-4", "Type 4-4"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_pair(p):
    p.add_argument("--pair", help="JSON file with env0/env1, or a catalog file name such as paper-1-2.json")
    p.add_argument("--env0", help="a,b,c,d,alpha,beta")
    p.add_argument("--env1", help="a,b,c,d,alpha,beta")


def _add_rates(p):
    p.add_argument("--lambda0", type=float)
    p.add_argument("--lambda1", type=float)
    p.add_argument("--u", type=float, help="alpha-weighted chart")
    p.add_argument("--v", type=float, help="alpha-weighted chart")


def _add_output(p, formats, default):
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", help="output path (default: stdout)")


def _add_sim(p, t_max=1e4):
    p.add_argument("--t-max", type=float, default=t_max)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lvswitch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="competitive type of an environment or pair")
    p.add_argument("--env", help="a,b,c,d,alpha,beta")
    _add_pair(p)

    p = sub.add_parser("rates", help="convert jump-rate charts and evaluate invasion rates")
    _add_pair(p)
    _add_rates(p)
    p.add_argument("--band", type=float, default=DEFAULT_BAND)
    p.add_argument("--mc", action="store_true", help="Monte Carlo fallback when no closed form exists")
    _add_sim(p)
    _add_output(p, ["json"], "json")

    p = sub.add_parser("curve", help="critical curve v_x or v_y")
    _add_pair(p)
    p.add_argument("--species", choices=["x", "y"], required=True)
    p.add_argument("--n", type=int, default=400)
    _add_output(p, ["csv", "json", "svg"], "csv")

    p = sub.add_parser("map", help="regime map over the (u, v) plane")
    _add_pair(p)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--v-min", type=float, default=1e-2)
    p.add_argument("--v-max", type=float, default=1e3)
    p.add_argument("--band", type=float, default=DEFAULT_BAND)
    p.add_argument("--mc", action="store_true", help="Monte Carlo fallback when no closed form exists")
    _add_sim(p)
    _add_output(p, ["csv", "json", "svg"], "csv")

    p = sub.add_parser("simulate", help="simulate the switched process")
    _add_pair(p)
    _add_rates(p)
    p.add_argument("--axis", choices=["both", "x", "y"], default="both")
    p.add_argument("--x0", type=float, default=0.5)
    p.add_argument("--y0", type=float, default=0.5)
    p.add_argument("--samples", type=int, default=10001)
    p.add_argument("--stride", type=int, default=1)
    _add_sim(p, t_max=100.0)
    _add_output(p, ["csv"], "csv")

    p = sub.add_parser("estimate", help="ergodic Monte Carlo estimate of an invasion rate")
    _add_pair(p)
    _add_rates(p)
    p.add_argument("--species", choices=["x", "y"], required=True)
    p.add_argument("--batches", type=int, default=50)
    _add_sim(p)
    _add_output(p, ["json"], "json")

    p = sub.add_parser("verify", help="search the four regimes and optionally confirm them by simulation")
    _add_pair(p)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--v-min", type=float, default=1e-2)
    p.add_argument("--v-max", type=float, default=1e3)
    p.add_argument("--replicas", type=int, default=0, help="confirm each witness with this many replicas")
    p.add_argument("--threshold", type=float, default=1e-9)
    _add_sim(p, t_max=5e3)
    _add_output(p, ["json"], "json")

    p = sub.add_parser("catalog", help="list the catalog pairs or write them as JSON files")
    p.add_argument("--write-dir", help="directory receiving paper-*.json")
    _add_output(p, ["json"], "json")

    p = sub.add_parser("figure", help="critical curves of a catalog figure")
    p.add_argument("id", choices=sorted(FIGURES))
    p.add_argument("--rho", type=float, default=9.0, help="d1 of the second environment (figure 1 only)")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--v-min", type=float, default=1e-3)
    p.add_argument("--v-max", type=float, default=1e3)
    _add_output(p, ["svg", "csv"], "svg")
    return parser


def _pair(args) -> EnvPair:
    inline = args.env0 is not None or args.env1 is not None
    if args.pair and inline:
        raise UsageError("give either --pair or --env0/--env1, not both")
    if args.pair:
        path = Path(args.pair)
        if path.exists():
            return io.read_pair(path)
        stem = path.name.removesuffix(".json").removeprefix("paper-")
        if stem in CATALOG_NAMES:
            return load_pair(stem)
        raise UsageError(f"pair file {args.pair} not found")
    if args.env0 is None or args.env1 is None:
        raise UsageError("an environment pair is required (--pair or --env0 and --env1)")
    return EnvPair(io.parse_env(args.env0), io.parse_env(args.env1))


def _rates(args, pair: EnvPair) -> JumpRates:
    by_rate = args.lambda0 is not None or args.lambda1 is not None
    by_uv = args.u is not None or args.v is not None
    if by_rate == by_uv:
        raise UsageError("give either --lambda0/--lambda1 or --u/--v")
    if by_rate:
        if args.lambda0 is None or args.lambda1 is None:
            raise UsageError("both --lambda0 and --lambda1 are required")
        return JumpRates(args.lambda0, args.lambda1)
    if args.u is None or args.v is None:
        raise UsageError("both --u and --v are required")
    return uv_to_rates(UVCoords(args.u, args.v, chart_weights(pair, "y")))


def _emit(args, text: str) -> None:
    if args.out:
        io.write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _describe_rates(pair: EnvPair, rates: JumpRates) -> dict:
    st = STCoords.from_rates(rates)
    ua = rates_to_uv(rates, *chart_weights(pair, "y"))
    ub = rates_to_uv(rates, *chart_weights(pair, "x"))
    return {
        "lambda0": rates.lambda0,
        "lambda1": rates.lambda1,
        "s": st.s,
        "t": st.t,
        "alpha_chart": {"u": ua.u, "v": ua.v},
        "beta_chart": {"u": ub.u, "v": ub.v},
    }


def cmd_classify(args):
    if args.env:
        if args.pair or args.env0 or args.env1:
            raise UsageError("give either --env or a pair")
        print(classify(io.parse_env(args.env)).value)
        return
    pair = _pair(args)
    print(f"{classify(pair.env0).value}-{classify(pair.env1).value}")


def cmd_rates(args):
    pair = _pair(args)
    rates = _rates(args, pair)
    cfg = SimConfig(t_max=args.t_max, seed=args.seed) if args.mc else None
    out = _describe_rates(pair, rates)
    est = {sp: estimate_invasion_rate(pair, sp, rates, cfg) for sp in ("x", "y")}
    for sp, e in est.items():
        out[f"Lambda_{sp}"] = {"value": e.value, "std_error": e.std_error, "provenance": e.provenance}
    band = max(args.band, *(3 * e.std_error for e in est.values()))
    out["regime"] = classify_regime(est["x"].value, est["y"].value, band).slug
    _emit(args, io.dumps(out))


def cmd_curve(args):
    pair = _pair(args)
    curve = curve_grid(pair, args.species, args.n)
    if args.format == "csv":
        text = curve.to_csv()
    elif args.format == "json":
        text = io.dumps({
            "species": curve.species,
            "chart_weights": list(curve.chart_weights),
            "points": [{"u": float(u), "kind": ev.kind, "v": ev.v} for u, ev in zip(curve.u_grid, curve.values)],
        })
    else:
        text = svg.curves_svg([(curve, "blue" if args.species == "y" else "red", f"v_{args.species}")],
                              f"critical curve v_{args.species}")
    _emit(args, text)


def cmd_map(args):
    pair = _pair(args)
    u, v = default_grid(args.n, args.n, args.v_min, args.v_max)
    cfg = SimConfig(t_max=args.t_max, seed=args.seed) if args.mc else None
    rmap = regime_map(pair, u, v, args.band, mc_config=cfg)
    if args.format == "csv":
        text = rmap.to_csv()
    elif args.format == "json":
        text = io.dumps(rmap.to_dict())
    else:
        text = svg.regime_map_svg(rmap, "regime map")
    _emit(args, text)


def cmd_simulate(args):
    pair = _pair(args)
    rates = _rates(args, pair)
    cfg = SimConfig(t_max=args.t_max, seed=args.seed, x0=args.x0, y0=args.y0, n_samples=args.samples)
    if args.axis == "both":
        traj = simulate_pdmp(pair, rates, cfg)
    else:
        traj = simulate_switched_logistic(pair, rates, args.axis, cfg)
    _emit(args, traj.to_csv(stride=args.stride))


def cmd_estimate(args):
    pair = _pair(args)
    rates = _rates(args, pair)
    stats = estimate_lambda(pair, rates, args.species, SimConfig(t_max=args.t_max, seed=args.seed, batches=args.batches))
    out = {"species": args.species, **_describe_rates(pair, rates), **stats.to_dict()}
    try:
        out["closed_form"] = estimate_invasion_rate(pair, args.species, rates).value
    except DegenerateLogistic:
        out["closed_form"] = None
    _emit(args, io.dumps(out))


def cmd_verify(args):
    pair = _pair(args)
    u, v = default_grid(args.n, args.n, args.v_min, args.v_max)
    found = witnesses_from_map(pair, regime_map(pair, u, v))
    out = found.to_dict()
    if args.replicas:
        cfg = SimConfig(t_max=args.t_max, seed=args.seed)
        for entry, w in zip(out["witnesses"], found.witnesses.values()):
            votes = detect_regime(pair, w.rates, cfg, args.replicas, args.threshold)
            entry["simulation"] = votes.to_dict()
    _emit(args, io.dumps(out))


def cmd_catalog(args):
    entries = catalog()
    if args.write_dir:
        target = Path(args.write_dir)
        target.mkdir(parents=True, exist_ok=True)
        for e in entries:
            io.write_atomic(target / f"{e.slug}.json", io.pair_to_json(e.pair))
    _emit(args, io.dumps([
        {"name": e.name, "file": f"{e.slug}.json", "types": [t.value for t in e.types], **e.pair.to_dict()}
        for e in entries
    ]))


def cmd_figure(args):
    name, title = FIGURES[args.id]
    pair = load_pair(name)
    if args.id == "1":
        e1 = pair.env1
        pair = EnvPair(pair.env0, type(e1)(e1.a, e1.b, e1.c, args.rho, e1.alpha, e1.beta))
        title = f"{title}, rho = {args.rho:g}"
    vy = curve_grid(pair, "y", args.n)
    vx = curve_grid(pair, "x", args.n)
    if args.format == "csv":
        rows = ["u,vy_kind,vy_value,vx_kind,vx_value"]
        for u, a, b in zip(vy.u_grid, vy.values, vx.values):
            fa = "" if a.v is None else format(a.v, ".17g")
            fb = "" if b.v is None else format(b.v, ".17g")
            rows.append(f"{u:.17g},{a.kind},{fa},{b.kind},{fb}")
        text = "\n".join(rows) + "\n"
    else:
        x_color = "green" if args.id == "1" and args.rho == 10 else "red"
        text = svg.curves_svg([(vy, "blue", "v_y"), (vx, x_color, "v_x")], title, args.v_min, args.v_max)
    _emit(args, text)


COMMANDS = {
    "classify": cmd_classify,
    "rates": cmd_rates,
    "curve": cmd_curve,
    "map": cmd_map,
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
    "figure": cmd_figure,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "n", 2) < 2:
            raise UsageError("--n must be >= 2")
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error=usage: {exc}", file=sys.stderr)
        return 2
    except DegenerateLogistic as exc:
        print(f"error=degenerate_logistic: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        # downstream reader closed early (e.g. `| head`); stop writing quietly
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except (ValueError, OSError) as exc:
        print(f"error=invalid_input: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
