"""Command-line front end.

Exit codes: 0 success, 1 internal contract violation, 2 usage or parse
error, 3 network too large, 4 network not layered.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from typing import Optional, Sequence

from detrelay import achievability, channels, detnet, gaussian_gap
from detrelay.errors import DomainError, LayeringError, NetworkFormatError, SizeLimitError

EXIT_OK = 0
EXIT_CONTRACT = 1
EXIT_USAGE = 2
EXIT_SIZE = 3
EXIT_TOPOLOGY = 4

BOUNDARY_SAMPLES = 64


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    """Nine significant digits, locale independent."""
    return format(float(x), ".9g")


def _writer(out):
    return csv.writer(out, lineterminator="\n")


def _load(path: str) -> detnet.DetNetwork:
    try:
        return detnet.load_network(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _side(nodes: Sequence[str]) -> str:
    return "{" + ",".join(nodes) + "}"


def cmd_capacity(args, out) -> int:
    net = _load(args.file)
    cap, cut = detnet.min_cut_capacity(net)
    print(f"q: {net.q}", file=out)
    print(f"capacity: {cap}", file=out)
    print(f"cut: {_side(cut.omega)} | {_side(cut.omega_c)}", file=out)
    return EXIT_OK


def cmd_cuts(args, out) -> int:
    net = _load(args.file)
    cuts = sorted(detnet.enumerate_cuts(net), key=lambda c: (c.value, c.mask))
    best = cuts[0].value
    print(f"q: {net.q}", file=out)
    for c in cuts:
        flag = " *" if c.value == best else ""
        print(f"{_side(c.omega)} | {_side(c.omega_c)}  rank {c.value}{flag}", file=out)
    return EXIT_OK


def cmd_relay_gap(args, out) -> int:
    if not args.step_db > 0:
        raise UsageError("--step-db must be positive")
    if args.hi_db < args.lo_db:
        raise UsageError("--lo-db must not exceed --hi-db")
    w = _writer(out)
    w.writerow(["sr_db", "rd_db", "gap_bits"])
    gaps = []
    for sr, rd, gap in gaussian_gap.relay_gap_sweep(args.sd_db, args.lo_db, args.hi_db, args.step_db):
        if not -gaussian_gap.GAP_TOL <= gap <= 1.0 + gaussian_gap.GAP_TOL:
            print(f"relay gap {gap} outside [0, 1] at sr={sr} rd={rd}", file=sys.stderr)
            return EXIT_CONTRACT
        gaps.append(gap)
        w.writerow([fmt(sr), fmt(rd), fmt(gap)])
    print(
        f"rows={len(gaps)} max_gap={fmt(max(gaps))} mean_gap={fmt(sum(gaps) / len(gaps))}",
        file=sys.stderr,
    )
    return EXIT_OK


def _sandwich_ok(rep: gaussian_gap.DiamondReport) -> bool:
    t = gaussian_gap.GAP_TOL
    slack = rep.r_star - rep.achievable
    return (
        -t <= slack <= 1.0 + t
        and rep.r_star >= rep.upper_bound - 1.0 - t
        and -t <= rep.gap <= 2.0 + t
    )


def cmd_diamond_gap(args, out) -> int:
    if args.random is not None:
        if args.gains_db:
            raise UsageError("give either four gains or --random, not both")
        if args.random < 1:
            raise UsageError("--random must be >= 1")
        rows = gaussian_gap.random_gains_db(args.random, args.seed)
    else:
        if len(args.gains_db) != 4:
            raise UsageError("expected four gains in dB: SA1 SA2 A1D A2D (or --random N)")
        rows = [tuple(args.gains_db)]
    w = _writer(out)
    w.writerow(["sa1_db", "sa2_db", "a1d_db", "a2d_db", "swapped", "r_pdf", "r_star", "c_bar", "gap"])
    status = EXIT_OK
    for db in rows:
        ch = gaussian_gap.GaussianDiamond.from_db(*db)
        rep = gaussian_gap.diamond_gap(ch)
        if not _sandwich_ok(rep):
            print(f"gap inequalities violated for gains {db}", file=sys.stderr)
            status = EXIT_CONTRACT
        w.writerow(
            [*(fmt(x) for x in db), int(rep.swapped), fmt(rep.achievable), fmt(rep.r_star),
             fmt(rep.upper_bound), fmt(rep.gap)]
        )
    return status


def cmd_region(args, out) -> int:
    have_det = args.n1 is not None or args.n2 is not None
    have_gauss = args.snr1_db is not None or args.snr2_db is not None
    if not have_det and not have_gauss:
        raise UsageError("give --n1/--n2 and/or --snr1-db/--snr2-db")
    corners = pts = None
    if have_det:
        if args.n1 is None or args.n2 is None:
            raise UsageError("--n1 and --n2 go together")
        if args.n1 < 0 or args.n2 < 0:
            raise UsageError("level counts must be nonnegative")
        corner_fn = channels.det_mac_corners if args.kind == "mac" else channels.det_bc_corners
        corners = corner_fn(args.n1, args.n2)
    if have_gauss:
        if args.snr1_db is None or args.snr2_db is None:
            raise UsageError("--snr1-db and --snr2-db go together")
        s1 = channels.SnrDb(args.snr1_db)
        s2 = channels.SnrDb(args.snr2_db)
        boundary_fn = channels.gauss_mac_boundary if args.kind == "mac" else channels.gauss_bc_boundary
        pts = boundary_fn(s1, s2, BOUNDARY_SAMPLES)

    print(f"kind: {args.kind}", file=out)
    if corners is not None:
        print("deterministic corners:", file=out)
        for r1, r2 in corners:
            print(f"  ({r1}, {r2})", file=out)
    if pts is not None:
        print(
            f"gaussian levels: n1={channels.det_level_count(s1)} n2={channels.det_level_count(s2)}",
            file=out,
        )
        w = _writer(out)
        w.writerow(["t", "r1", "r2"])
        for k, (r1, r2) in enumerate(pts):
            w.writerow([fmt(k / (BOUNDARY_SAMPLES - 1)), fmt(r1), fmt(r2)])
    return EXIT_OK


def _k_list(text: str) -> list[int]:
    try:
        ks = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad K list {text!r}") from None
    if not ks or any(k < 1 for k in ks):
        raise argparse.ArgumentTypeError("block lengths must be positive integers")
    return ks


def cmd_simulate(args, out) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.seed < 0:
        raise UsageError("--seed must be >= 0")
    net = _load(args.file)
    sched = achievability.validate_layered(net)
    cap = achievability.capacity(net)
    w = _writer(out)
    w.writerow(["K", "trials", "best_rate", "mean_rate", "capacity"])
    for k in args.block_k:
        best, mean = achievability.estimate_rate(net, sched, k, args.trials, args.seed)
        if best > cap + 1e-12:
            print(f"empirical rate {best} exceeds min-cut capacity {cap}", file=sys.stderr)
            return EXIT_CONTRACT
        w.writerow([k, args.trials, fmt(best), fmt(mean), cap])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="detrelay",
        description="Linear deterministic relay networks and Gaussian constant-gap checks.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("capacity", help="min-cut capacity of a network file")
    s.add_argument("--file", required=True)
    s.set_defaults(func=cmd_capacity)

    s = sub.add_parser("cuts", help="list every cut with its rank")
    s.add_argument("--file", required=True)
    s.set_defaults(func=cmd_cuts)

    s = sub.add_parser("simulate", help="random linear coding on a layered network")
    s.add_argument("--file", required=True)
    s.add_argument("--block-k", type=_k_list, default=[1], help="comma-separated block lengths")
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("relay-gap", help="CSV sweep of the relay decode-forward gap")
    s.add_argument("--sd-db", type=float, default=0.0)
    s.add_argument("--lo-db", type=float, default=-20.0)
    s.add_argument("--hi-db", type=float, default=60.0)
    s.add_argument("--step-db", type=float, default=1.0)
    s.set_defaults(func=cmd_relay_gap)

    s = sub.add_parser("diamond-gap", help="diamond partial decode-forward gap")
    s.add_argument("gains_db", nargs="*", type=float, metavar="DB",
                   help="SA1 SA2 A1D A2D gains in dB (use -- before -inf)")
    s.add_argument("--random", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_diamond_gap)

    s = sub.add_parser("region", help="MAC/BC capacity regions")
    s.add_argument("--kind", choices=["mac", "bc"], required=True)
    s.add_argument("--n1", type=int)
    s.add_argument("--n2", type=int)
    s.add_argument("--snr1-db", type=float)
    s.add_argument("--snr2-db", type=float)
    s.set_defaults(func=cmd_region)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, NetworkFormatError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except LayeringError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOPOLOGY
    except BrokenPipeError:
        # reader went away (e.g. `| head`); silence the flush at interpreter exit
        if out is sys.stdout:
            devnull = os.open(os.devnull, os.O_WRONLY)
            os.dup2(devnull, sys.stdout.fileno())
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
