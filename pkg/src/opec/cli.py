"""Command line entry point: ``opec simulate`` and ``opec sweep``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys

from .config import DEFAULT_V_GRID, SweepSpec, bundled_config, check_policies, check_v_values, load_config
from .errors import OpecError
from .experiment import SweepRow, default_workers, emit_csv, sweep
from .policy import POLICY_NAMES, make_policy
from .simulator import DEFAULT_SEED, TRACE_COLUMNS, run

log = logging.getLogger("opec")


def _floats(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _names(text):
    return tuple(x.strip() for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opec",
        description="Energy-constrained WiFi offloading scheduler simulations.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        default=None,
        help="scenario file (default: the bundled paper.cfg two-link scenario)",
    )
    common.add_argument("--slots", type=int, help="override the horizon (slots)")
    common.add_argument("--seed", type=int, help=f"override the master seed (default {DEFAULT_SEED})")
    common.add_argument("--out", required=True, help="CSV file to write")

    sim = sub.add_parser("simulate", parents=[common], help="run one policy at one V")
    sim.add_argument("--v", type=float, dest="V", help="override V")
    sim.add_argument("--policy", default="opec", choices=POLICY_NAMES)
    sim.add_argument("--trace", help="write a per-slot trace CSV here")
    sim.add_argument("--trace-every", type=int, help="slots between trace rows (default 1 with --trace)")

    sw = sub.add_parser("sweep", parents=[common], help="run every (policy, V) pair")
    sw.add_argument("--v-list", type=_floats, help="comma-separated V values")
    sw.add_argument("--policies", type=_names, help=f"comma-separated names from {', '.join(POLICY_NAMES)}")
    sw.add_argument("--workers", type=int, default=1, help=f"parallel processes (0 = {default_workers()})")
    return parser


def _load(args):
    path = args.config if args.config is not None else bundled_config()
    loaded = load_config(path)
    if isinstance(loaded, SweepSpec):
        spec, cfg = loaded, loaded.base
    else:
        spec, cfg = None, loaded
    changes = {}
    if args.slots is not None:
        changes["horizon"] = args.slots
    if args.seed is not None:
        changes["seed"] = args.seed
    if getattr(args, "V", None) is not None:
        changes["V"] = args.V
    if changes:
        cfg = cfg.replace(**changes)
    return spec, cfg


def cmd_simulate(args) -> int:
    _, cfg = _load(args)
    trace_fh = None
    trace_cb = None
    if args.trace:
        every = args.trace_every if args.trace_every is not None else (cfg.trace_every or 1)
        cfg = cfg.replace(trace_every=every)
        trace_fh = open(args.trace, "w", newline="", encoding="utf-8")
        writer = csv.writer(trace_fh, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)

        def trace_cb(row):
            writer.writerow([row.t, row.Q, repr(row.Z), row.decision, row.b, repr(row.p), row.r])

    try:
        policy = make_policy(args.policy, cfg)
        log.info("simulating %s at V=%g for %d slots", args.policy, cfg.V, cfg.horizon)
        m = run(cfg, policy, trace=trace_cb)
    finally:
        if trace_fh is not None:
            trace_fh.close()
    row = SweepRow.from_metrics(args.policy, cfg.V, m)
    emit_csv([row], args.out)
    print(
        f"{args.policy} V={cfg.V:g} T={m.t}: avg_Q={row.avg_Q:.6g} avg_r={row.avg_r:.6g} "
        f"avg_p={row.avg_p:.6g} Q/T={row.Q_over_T:.3g} Z/T={row.Z_over_T:.3g} "
        f"energy_ok={row.energy_ok}"
    )
    return 0


def cmd_sweep(args) -> int:
    spec, cfg = _load(args)
    v_values = args.v_list or (spec.v_values if spec else DEFAULT_V_GRID)
    policies = args.policies or (spec.policies if spec else ("opec",))
    check_v_values(v_values)
    check_policies(policies)
    spec = SweepSpec(base=cfg, v_values=v_values, policies=policies)
    workers = args.workers if args.workers > 0 else default_workers()
    rows = sweep(spec, workers=workers)
    emit_csv(rows, args.out)
    for row in rows:
        print(
            f"{row.policy:>18} V={row.V:<7g} avg_Q={row.avg_Q:<10.6g} avg_r={row.avg_r:<9.6g} "
            f"avg_p={row.avg_p:<9.6g} energy_ok={row.energy_ok}"
        )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "simulate":
            return cmd_simulate(args)
        return cmd_sweep(args)
    except (OpecError, ValueError) as exc:
        print(f"opec: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"opec: error: {exc.filename or ''}: {exc.strerror}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
