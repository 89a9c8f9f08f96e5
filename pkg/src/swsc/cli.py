"""Command-line front end.

Exit codes: 0 success, 1 property-suite failure, 2 configuration error,
3 infeasible decoding order.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from pathlib import Path

import numpy as np

from .channels import ChannelError, DiscreteChannel, QuadratureIC, load_channel
from .mi import MiQuery, mutual_info
from .regions.basic import region_ian, region_scd, region_snd
from .regions.fm import InfeasibleRegionError
from .regions.hk import region_hk_union
from .regions.orders import InfeasibleOrderError, OrderSyntaxError, parse_orders
from .regions.rate_splitting import region_rate_splitting
from .regions.swsc import region_swsc, region_swsc_alternating, region_swsc_union
from .simulator.code import RateMatchError
from .simulator.curve import curve_rows, sweep_curve
from .simulator.link import ConfigError, SimConfig, run_ian_baseline, simulate
from .simulator.schedule import BlockSchedule
from .splits import LayerSplit, SplitError, cascade_split, for_channel, map_split
from .verify import SUITES, data_path, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INFEASIBLE = 0, 1, 2, 3
SCHEMES = ("ian", "scd", "snd", "rs", "swsc", "swsc-union", "hk")


class UsageError(Exception):
    pass


# -- helpers ---------------------------------------------------------------

def _channel_path(arg: str | None, default: str) -> Path:
    if arg is None:
        return Path(str(data_path(default)))
    return Path(arg)


def _load_channel(arg: str | None, default: str = "symmetric_8db.json"):
    path = _channel_path(arg, default)
    if not path.exists():
        raise ChannelError(f"channel file not found: {path}")
    return load_channel(path)


def _parse_split(text: str | None) -> tuple | None:
    if text is None:
        return None
    m = re.fullmatch(r"\s*(\d+)\s*-\s*(\d+)\s*", text)
    if not m or min(int(m.group(1)), int(m.group(2))) < 1:
        raise UsageError(f"--split must look like K-L with K, L >= 1, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _floats(text: str | None, what: str):
    if text is None:
        return None
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of numbers, got {text!r}") from None


def _cascade_params(k: int, given) -> list:
    if given is not None:
        if len(given) != k - 1:
            raise UsageError(f"a {k}-layer split needs {k - 1} erasure parameters, got {len(given)}")
        return given
    return [1.0 - (i + 1) / k for i in range(k - 1)]


def _split_for(channel, split_text, alpha, beta) -> LayerSplit:
    """Map split for constellation channels, erasure cascades for discrete ones."""
    kl = _parse_split(split_text)
    if isinstance(channel, QuadratureIC):
        split = map_split(channel)
        if kl is not None and kl != tuple(s.n_layers for s in split.senders):
            raise UsageError(f"--split {split_text} does not match the symbol maps' layer counts")
        return split
    if kl is None:
        return for_channel(channel)
    k, l = kl
    px, pw = channel.input_pmfs
    return LayerSplit([cascade_split(px, _cascade_params(k, alpha), "X"), cascade_split(pw, _cascade_params(l, beta), "W")])


def _write(out: str | None, rows: list, doc, text: str | None = None) -> None:
    """Write ``rows`` as CSV or ``doc`` as JSON by extension; print to stdout without ``--out``."""
    if out is None:
        sys.stdout.write(text if text is not None else json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return
    path = Path(out)
    ext = path.suffix.lower()
    if ext == ".csv":
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: repr(float(v)) if isinstance(v, (float, np.floating)) else v for k, v in r.items()})
        data = buf.getvalue()
    elif ext == ".json":
        data = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    elif ext in (".txt", ""):
        data = text if text is not None else json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        raise UsageError(f"cannot infer output format from {path.name}; use .csv or .json")
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(data)


def _region_rows(region, resolution=None) -> list:
    r1, r2, labels = region.boundary(resolution)
    return [{"R1_bits": float(a), "R2_bits": float(b), "source_label": lab} for a, b, lab in zip(r1, r2, labels)]


# -- subcommands -------------------------------------------------------------

_QUERY = re.compile(r"^\s*I?\(?\s*([^;]+?)\s*;\s*Y([12])\s*(?:\|\s*([^)]*?))?\s*\)?\s*$")


def cmd_mi(args) -> int:
    channel = _load_channel(args.channel)
    split = _split_for(channel, args.split, _floats(args.alpha, "--alpha"), _floats(args.beta, "--beta"))
    rows = []
    for q in args.query:
        m = _QUERY.match(q)
        if not m:
            raise UsageError(f"query must look like 'X;Y1|W', got {q!r}")
        target = tuple(v.strip() for v in m.group(1).split(","))
        given = tuple(v.strip() for v in (m.group(3) or "").split(",") if v.strip())
        query = MiQuery(target, given, int(m.group(2)))
        rows.append({"query": query.label(), "bits": mutual_info(channel, split, query)})
    text = "".join(f"{r['query']} = {r['bits']:.12f}\n" for r in rows)
    _write(args.out, rows, rows, text)
    return EXIT_OK


def cmd_region(args) -> int:
    scheme = args.scheme
    channel = _load_channel(args.channel, "hk_tiny.json" if scheme == "hk" else "symmetric_8db.json")
    if scheme == "hk":
        if not isinstance(channel, DiscreteChannel) or len(channel.input_sizes) != 4:
            raise UsageError("scheme hk needs a four-input channel (S, T, U, V)")
        region = region_hk_union(channel, args.grid or 5)
    elif len(getattr(channel, "input_sizes", ())) != 2:
        raise UsageError(f"scheme {scheme} needs a two-input interference channel")
    elif scheme in ("ian", "scd", "snd"):
        region = {"ian": region_ian, "scd": region_scd, "snd": region_snd}[scheme](channel)
    elif scheme == "swsc-union":
        region = region_swsc_union(channel, order_family=args.family, grid=args.grid or 21)
    else:
        split = _split_for(channel, args.split, _floats(args.alpha, "--alpha"), _floats(args.beta, "--beta"))
        if scheme == "rs":
            if not args.order:
                raise UsageError("scheme rs needs --order, e.g. 'd1=X2>W>X1;d2=X2>X1>W'")
            d1, d2 = parse_orders(args.order)
            region = region_rate_splitting(channel, split, d1, d2)
        elif args.order:
            d1, d2 = parse_orders(args.order)
            region = region_swsc(channel, split, d1, d2)
        else:
            region = region_swsc_alternating(channel, split)
    rows = _region_rows(region, args.resolution)
    doc = {"scheme": scheme, "label": region.label, "boundary": rows,
           "conjunctions": region.constraints_json()}
    _write(args.out, rows, doc, region.to_csv(args.resolution) if args.out is None else None)
    return EXIT_OK


def _sim_config(args) -> SimConfig:
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    else:
        doc = json.loads(Path(str(data_path("sim_symmetric_8db.json"))).read_text())
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        try:
            doc[key.strip()] = json.loads(value)
        except json.JSONDecodeError:
            doc[key.strip()] = value
    if args.seed is not None:
        doc["master_seed"] = args.seed
    if getattr(args, "order", None):
        doc["orders"] = args.order
    if getattr(args, "inr", None):
        inr = _floats(args.inr, "--inr")
        if len(inr) != 1 and args.command == "simulate":
            raise ConfigError("simulate takes a single --inr value")
        doc["inr_db"] = inr[0]
    try:
        return SimConfig.from_dict(doc)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def cmd_simulate(args) -> int:
    config = _sim_config(args)
    if args.scheme in ("swsc", None):
        report = simulate(config, jobs=args.jobs)
    elif args.scheme in ("ian-A", "ian-B"):
        report = run_ian_baseline(config, args.scheme[-1], jobs=args.jobs)
    else:
        raise UsageError(f"simulate --scheme must be swsc, ian-A or ian-B, got {args.scheme!r}")
    doc = {"config": config.to_dict(), "report": report.to_dict()}
    rows = [{"inr_db": config.inr_db, "rate_bits": config.rates[0], "bler_stream1": report.bler[0],
             "bler_stream2": report.bler[1], "scheme": report.scheme}]
    _write(args.out, rows, doc)
    return EXIT_OK


def cmd_curve(args) -> int:
    config = _sim_config(argparse.Namespace(**{**vars(args), "inr": None}))
    inr = _floats(args.inr, "--inr") or [6.0, 7.0, 8.0, 9.0, 10.0]
    grid = _floats(args.rates, "--rates") if args.simulate else None
    pts = sweep_curve(config, inr, grid, jobs=args.jobs)
    rows = [{**r, "bler_stream1": "", "bler_stream2": ""} for r in curve_rows(pts)]
    rows = [{k: r[k] for k in ("inr_db", "rate_bits", "bler_stream1", "bler_stream2", "scheme")} for r in rows]
    doc = {"snr_db": config.snr_db, "maps": list(config.maps),
           "points": [{"inr_db": p.inr_db, "ian": p.ian, "ian_marginal": p.ian_marginal, "swcm": p.swcm, "snd": p.snd,
                       "swcm_over_ian": p.swcm / p.ian if p.ian > 0 else None,
                       "sim_swsc": p.sim_swsc, "sim_ian": p.sim_ian} for p in pts]}
    text = "".join(f"INR {p.inr_db:g} dB: IAN {p.ian:.4f}  SWCM {p.swcm:.4f}  SND {p.snd:.4f}  "
                   f"SWCM/IAN {p.swcm / p.ian:.4f}\n" for p in pts)
    _write(args.out, rows, doc, text)
    return EXIT_OK


def cmd_schedule(args) -> int:
    k, l = _parse_split(args.split or "2-1")
    sched = BlockSchedule.for_split(k, l, args.blocks)
    rows = [{"layer": z, **{str(j + 1): c for j, c in enumerate(cells)}} for z, cells in sched.rows().items()]
    _write(args.out, rows, {"split": f"{k}-{l}", "blocks": args.blocks, "rows": sched.rows()}, sched.dump())
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_suite(args.suite, args.grid)
    for c in checks:
        print(c.line())
    if args.out:
        doc = [{"check": c.name, "residual": c.residual, "tol": c.tol, "passed": c.passed} for c in checks]
        _write(args.out, doc, doc)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


# -- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swsc", description="Rate regions and sliding-window superposition coding.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, channel=True):
        if channel:
            sp.add_argument("--channel", help="channel JSON (default: bundled symmetric 8 dB example)")
        sp.add_argument("--out", help="output path; format from extension (.csv or .json)")
        return sp

    sp = common(sub.add_parser("mi", help="mutual information queries"))
    sp.add_argument("--query", action="append", required=True, help="e.g. 'X;Y1|W' (repeatable)")
    sp.add_argument("--split", help="K-L layer split")
    sp.add_argument("--alpha", help="erasure parameters of sender 1's cascade")
    sp.add_argument("--beta", help="erasure parameters of sender 2's cascade")

    sp = common(sub.add_parser("region", help="rate region boundary"))
    sp.add_argument("--scheme", choices=SCHEMES, required=True)
    sp.add_argument("--split", help="K-L layer split")
    sp.add_argument("--alpha")
    sp.add_argument("--beta")
    sp.add_argument("--order", help="decoding orders, e.g. 'd1=m1@-1>m2@0;d2=m1@-1>m2@-1'")
    sp.add_argument("--grid", type=int, help="points per split parameter")
    sp.add_argument("--family", choices=("prop2", "thm2"), default="thm2")
    sp.add_argument("--resolution", type=int, help="extra evenly spaced boundary samples")

    for name in ("simulate", "curve"):
        sp = common(sub.add_parser(name, help="link simulation" if name == "simulate" else "symmetric-rate curves"),
                    channel=False)
        sp.add_argument("--config", help="simulation config JSON (default: bundled 8 dB example)")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE", help="config override (repeatable)")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--inr", help="INR in dB (comma-separated list for curve)")
        sp.add_argument("--jobs", type=int, default=1)
        if name == "simulate":
            sp.add_argument("--scheme", default="swsc", help="swsc, ian-A or ian-B")
            sp.add_argument("--order", help="decoding orders (default: best theoretical margin)")
        else:
            sp.add_argument("--simulate", action="store_true", help="add simulated feasible rates")
            sp.add_argument("--rates", default="0.25,0.3,0.35,0.4,0.45,0.5", help="symmetric rate grid")

    sp = common(sub.add_parser("schedule", help="block schedule table"), channel=False)
    sp.add_argument("--split", default="2-1")
    sp.add_argument("--blocks", type=int, default=6)

    sp = common(sub.add_parser("verify", help="property suites"), channel=False)
    sp.add_argument("suite", choices=SUITES)
    sp.add_argument("--grid", type=int)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"mi": cmd_mi, "region": cmd_region, "simulate": cmd_simulate, "curve": cmd_curve,
                "schedule": cmd_schedule, "verify": cmd_verify}
    try:
        return handlers[args.command](args)
    except InfeasibleOrderError as exc:
        print(f"error: infeasible order: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (UsageError, ChannelError, ConfigError, SplitError, OrderSyntaxError, RateMatchError,
            InfeasibleRegionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
