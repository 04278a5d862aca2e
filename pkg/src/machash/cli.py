"""machash command line: trace synthesis, information sweeps, mask analysis.

Exit status: 0 on success, 1 on usage errors, 2 on data errors (bad trace
files, out-of-range windows, unsatisfiable targets).
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager

from . import maskfilter
from .entropy import info_content, bucket, simulate_lookups, sweep
from .schemes import SCHEMES, BitWindow, scheme_from_name
from .trace import SynthConfig, parse_trace, synthesize, trace_stats, write_trace

DEFAULT_SEED = 12345


class UsageError(Exception):
    """Flag combination errors detected after parsing."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; this tool reserves 2 for
    # data errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _window_arg(text: str) -> BitWindow:
    try:
        return BitWindow.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _range_arg(text: str) -> range:
    """`lo..hi` (inclusive) or a single integer."""
    lo, sep, hi = text.partition("..")
    try:
        if sep:
            return range(int(lo), int(hi) + 1)
        return range(int(text), int(text) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or lo..hi, got {text!r}") from None


def _prefix_arg(text: str) -> tuple[bytes, float]:
    """`aa:bb:cc@weight` (weight optional, default 1)."""
    body, sep, weight_text = text.partition("@")
    try:
        weight = float(weight_text) if sep else 1.0
        parts = body.replace("-", ":").split(":")
        octets = bytes(int(p, 16) for p in parts)
        if len(octets) != 3:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a 3-octet prefix like aa:bb:cc@weight, got {text!r}") from None
    return octets, weight


def _int_list_arg(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as f:
            yield f


def _load_trace(path: str):
    if path == "-":
        return parse_trace(sys.stdin)
    with open(path, "r", encoding="utf-8") as f:
        return parse_trace(f)


def _read_synth_config(path: str) -> dict:
    """Key-value config: stations, frames, skew, seed, prefix (repeatable)."""
    known = {"stations", "frames", "skew", "seed", "prefix"}
    values: dict = {"prefix": []}
    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or key not in known:
                raise ValueError(f"{path} line {line_no}: expected `key = value` "
                                 f"with key in {sorted(known)}, got {line!r}")
            if key == "prefix":
                values["prefix"].append(_prefix_arg(value))
            elif key == "skew":
                values[key] = float(value)
            else:
                values[key] = int(value)
    return values


def _cmd_synth(args) -> int:
    file_values = _read_synth_config(args.config) if args.config else {"prefix": []}
    stations = args.stations if args.stations is not None else file_values.get("stations")
    frames = args.frames if args.frames is not None else file_values.get("frames")
    if stations is None or frames is None:
        raise UsageError("synth needs --stations and --frames (flags or config file)")
    kwargs = {}
    skew = args.skew if args.skew is not None else file_values.get("skew")
    if skew is not None:
        kwargs["reference_skew"] = skew
    seed = args.seed if args.seed is not None else file_values.get("seed")
    if seed is not None:
        kwargs["seed"] = seed
    prefixes = args.prefix if args.prefix else file_values["prefix"]
    if prefixes:
        kwargs["vendor_prefixes"] = tuple(prefixes)
    trace = synthesize(SynthConfig(station_count=stations, frame_count=frames, **kwargs))
    with _open_out(args.out) as out:
        write_trace(trace, out)
    return 0


def _cmd_stats(args) -> int:
    stats = trace_stats(_load_trace(args.trace), top_n=args.top)
    print(f"frames {stats.frame_count}")
    print(f"distinct {stats.distinct_count}")
    print(f"top_decile_share {stats.top_decile_share:.4f}")
    print("top addresses:")
    for addr, count in stats.top:
        print(f"  {addr} {count}")
    return 0


def _cmd_info(args) -> int:
    trace = _load_trace(args.trace)
    dist = bucket(trace, scheme_from_name(args.scheme), args.window)
    print(repr(info_content(dist)))
    return 0


def _cmd_lookup(args) -> int:
    trace = _load_trace(args.trace)
    cost = simulate_lookups(trace, scheme_from_name(args.scheme), args.window)
    print(f"avg_lookups_per_frame {cost.avg_lookups!r}")
    print(f"lookups_saved_per_frame {cost.lookups_saved!r}")
    print(f"avg_lookup_steps {cost.avg_lookup_steps!r}")
    return 0


def _cmd_sweep(args) -> int:
    trace = _load_trace(args.trace)
    report = sweep(trace, scheme_from_name(args.scheme), args.m, args.i)
    with _open_out(args.out) as out:
        report.to_csv(out)
    if args.plot:
        from .plots import plot_sweep

        plot_sweep(report, args.plot)
    return 0


def _cmd_mask(args) -> int:
    point_modes = [name for name, on in
                   (("analytic", args.analytic), ("approx", args.approx),
                    ("empirical", args.empirical)) if on]
    modes = point_modes + (["curve"] if args.curve else []) \
        + (["size-for"] if args.size_for is not None else [])
    if len(modes) != 1:
        raise UsageError("mask needs exactly one of --analytic, --approx, "
                         "--empirical, --curve, --size-for")
    mode = modes[0]

    if mode == "size-for":
        if args.k is None:
            raise UsageError("--size-for needs --k")
        sizing = maskfilter.mask_size_for(args.size_for, args.k)
        print(f"mask_size {sizing.mask_size}")
        print(f"linear_size {sizing.linear_size}")
        print(f"achieved_rate {sizing.achieved_rate:.6f}")
        return 0

    if mode == "curve":
        curve = maskfilter.rejection_curve(
            mask_sizes=args.sizes if args.sizes else maskfilter.DEFAULT_MASK_SIZES,
            wanted_counts=args.k_range,
            model=args.model,
            scheme=scheme_from_name(args.scheme),
            trials=args.trials,
            seed=args.seed,
        )
        with _open_out(args.out) as out:
            curve.to_csv(out)
        if args.plot:
            from .plots import plot_rejection_curve

            plot_rejection_curve(curve, args.plot)
        return 0

    if args.k is None or args.M is None:
        raise UsageError(f"--{mode} needs --k and --M")
    if mode == "analytic":
        print(f"{maskfilter.analytic_rejection_rate(args.k, args.M):.6f}")
    elif mode == "approx":
        print(f"{maskfilter.approx_rejection_rate(args.k, args.M):.6f}")
    else:
        length = args.M.bit_length() - 1
        if 1 << length != args.M:
            raise ValueError(f"empirical mode needs a power-of-two --M, got {args.M}")
        est = maskfilter.empirical_rejection_rate(
            scheme_from_name(args.scheme), BitWindow(0, length),
            args.k, args.trials, args.seed)
        print(f"{est.rate:.6f} +/- {est.ci_halfwidth:.6f}")
    return 0


def _cmd_schemes(args) -> int:
    for name, scheme in SCHEMES.items():
        print(f"{name} {scheme.width}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="machash",
                     description="Compare address hashing schemes and size hash-mask filters.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("synth", help="write a synthetic address trace")
    p.add_argument("--stations", type=int, help="distinct station count")
    p.add_argument("--frames", type=int, help="frame reference count")
    p.add_argument("--skew", type=float, help="Zipf popularity exponent (0 = uniform)")
    p.add_argument("--seed", type=int, help=f"RNG seed (default {DEFAULT_SEED})")
    p.add_argument("--prefix", type=_prefix_arg, action="append",
                   help="vendor prefix aa:bb:cc@weight, repeatable")
    p.add_argument("--config", help="key-value config file (flags override)")
    p.add_argument("--out", default="-", help="output trace file, - for stdout")
    p.set_defaults(handler=_cmd_synth)

    p = sub.add_parser("stats", help="summarize a trace")
    p.add_argument("--trace", required=True, help="trace file, - for stdin")
    p.add_argument("--top", type=int, default=10, help="length of the top list")
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("info", help="information content of one scheme/window")
    p.add_argument("--scheme", required=True, choices=sorted(SCHEMES))
    p.add_argument("--window", required=True, type=_window_arg, metavar="START:LEN")
    p.add_argument("--trace", required=True)
    p.set_defaults(handler=_cmd_info)

    p = sub.add_parser("lookup", help="simulated per-frame lookup cost")
    p.add_argument("--scheme", required=True, choices=sorted(SCHEMES))
    p.add_argument("--window", required=True, type=_window_arg, metavar="START:LEN")
    p.add_argument("--trace", required=True)
    p.set_defaults(handler=_cmd_lookup)

    p = sub.add_parser("sweep", help="information content over all bit windows (CSV)")
    p.add_argument("--scheme", required=True, choices=sorted(SCHEMES))
    p.add_argument("--trace", required=True)
    p.add_argument("--m", type=_range_arg, default=range(1, 9), metavar="LO..HI",
                   help="window lengths (default 1..8)")
    p.add_argument("--i", type=_range_arg, default=None, metavar="LO..HI",
                   help="start bits (default: all that fit)")
    p.add_argument("--out", default="-", help="CSV output, - for stdout")
    p.add_argument("--plot", help="also render a figure (.svg/.png)")
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("mask", help="rejection-filter analysis")
    p.add_argument("--analytic", action="store_true", help="print (1 - 1/M)^k")
    p.add_argument("--approx", action="store_true", help="print max(0, 1 - k/M)")
    p.add_argument("--empirical", action="store_true", help="Monte-Carlo rate +/- CI")
    p.add_argument("--curve", action="store_true", help="rate over a (M, k) grid (CSV)")
    p.add_argument("--size-for", dest="size_for", type=float, metavar="RATE",
                   help="smallest power-of-two mask reaching RATE")
    p.add_argument("--k", type=int, help="wanted address count")
    p.add_argument("--M", type=int, help="mask size in bits")
    p.add_argument("--model", default="analytic",
                   choices=("analytic", "approximate", "empirical"),
                   help="curve model (default analytic)")
    p.add_argument("--sizes", type=_int_list_arg, metavar="M1,M2,...",
                   help="curve mask sizes (default 2,4,...,128,512)")
    p.add_argument("--k-range", dest="k_range", type=_range_arg, default=range(1, 101),
                   metavar="LO..HI", help="curve wanted counts (default 1..100)")
    p.add_argument("--scheme", default="crc32", choices=sorted(SCHEMES),
                   help="scheme for empirical trials")
    p.add_argument("--trials", type=int, default=10_000, help="Monte-Carlo trials per point")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default="-", help="curve CSV output, - for stdout")
    p.add_argument("--plot", help="also render the curve figure (.svg/.png)")
    p.set_defaults(handler=_cmd_mask)

    p = sub.add_parser("schemes", help="list scheme names and widths")
    p.set_defaults(handler=_cmd_schemes)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())
