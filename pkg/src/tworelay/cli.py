"""Command line front end: eval, optimize, fm, and sim subcommands.

Machine-readable output (JSON, system text, CSV) goes to stdout; one-line
human summaries and notes go to stderr.  Exit codes: 0 on success, 2 for
input validation problems, 3 for resource caps, 4 for internal invariant
violations.  An infeasible law or a not-equivalent verdict is a result,
not an error, and still exits 0.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from . import fm, io, sim
from .optimize import SearchConfig, optimize_t1, optimize_t2
from .prob import (
    InvariantError,
    ResourceLimitError,
    T1Law,
    T2Law,
    ValidationError,
)
from .rates import T1Rates, eval_theorem1, eval_theorem2

LN2 = math.log(2.0)


def _report_in_nats(report: dict) -> dict:
    out = dict(report)
    out["objective_nats"] = out.pop("objective_bits") * LN2
    out["constraints"] = [
        {**c, "lhs": c["lhs"] * LN2, "rhs": c["rhs"] * LN2}
        for c in report["constraints"]
    ]
    out["units"] = "nats"
    return out


def _opt_in_nats(result: dict) -> dict:
    out = dict(result)
    out["best_objective_nats"] = out.pop("best_objective_bits") * LN2
    out["trace"] = [v * LN2 for v in result["trace"]]
    out["report"] = _report_in_nats(result["report"])
    out["units"] = "nats"
    return out


def _load_pair(args, theorem: str):
    channel = io.load_channel(args.channel)
    law = io.load_law(args.law)
    expected = T1Law if theorem == "t1" else T2Law
    if not isinstance(law, expected):
        raise ValidationError(
            f"law file {args.law} holds a "
            f"{'t2' if isinstance(law, T2Law) else 't1'} law, "
            f"but the requested theorem is {theorem}"
        )
    return channel, law


def cmd_eval(args) -> int:
    channel, law = _load_pair(args, args.theorem)
    if args.theorem == "t1":
        report = eval_theorem1(channel, law)
    else:
        report = eval_theorem2(channel, law)
    payload = report.to_dict()
    if args.nats:
        payload = _report_in_nats(payload)
    sys.stdout.write(io.dumps(payload))
    verdict = "feasible" if report.feasible else "infeasible"
    print(f"{args.theorem}: {verdict}, objective {report.objective_bits:.6f} bits",
          file=sys.stderr)
    return 0


def cmd_optimize(args) -> int:
    channel = io.load_channel(args.channel)
    cfg = SearchConfig(
        mode=args.mode,
        resolution=args.resolution,
        restarts=args.restarts,
        max_iter=args.max_iter,
        seed=args.seed,
        tolerance=args.tolerance,
        yh1_size=args.yh1_size,
        yh2_size=args.yh2_size,
        v1_size=args.v1_size,
        v2_size=args.v2_size,
    )
    run = optimize_t1 if args.theorem == "t1" else optimize_t2
    result = run(channel, cfg, jobs=args.jobs)
    payload = result.to_dict()
    if args.nats:
        payload = _opt_in_nats(payload)
    sys.stdout.write(io.dumps(payload))
    tail = " (no feasible law found)" if result.infeasible_everywhere else ""
    print(
        f"{args.theorem} {cfg.mode}: objective "
        f"{result.best_objective_bits:.6f} bits after "
        f"{result.evaluations} evaluations{tail}",
        file=sys.stderr,
    )
    return 0


_FM_DEFAULT_ELIMINATE = {
    "t1": ("RH1", "RH2", "RS1", "RS2"),
    "t2": ("RH1", "RH2", "R011", "R012", "R021", "R022"),
}


def _system_from(source: str) -> fm.RateSystem:
    if source in ("t1", "t2"):
        return fm.builtin_system(source)
    with open(source, encoding="utf-8") as handle:
        return fm.parse_system(handle.read())


def _target_from(source: str) -> fm.RateSystem:
    if source in ("t1", "t2"):
        return fm.target_system(source)
    with open(source, encoding="utf-8") as handle:
        return fm.parse_system(handle.read())


def cmd_fm(args) -> int:
    system = _system_from(args.which)
    if args.eliminate is not None:
        eliminate = tuple(args.eliminate)
    else:
        eliminate = _FM_DEFAULT_ELIMINATE.get(args.which, ())
    reduced = fm.eliminate_all(system, eliminate)
    sys.stdout.write(fm.format_system(reduced))
    note = f"{len(system.inequalities)} rows -> {len(reduced.inequalities)}"

    if args.check_against is not None:
        tags = [s for s in (args.which, args.check_against) if s in ("t1", "t2")]
        if not tags:
            raise ValidationError(
                "numeric check needs a builtin tag (t1 or t2) as the system "
                "or the --check-against target to know which laws to sample"
            )
        target = _target_from(args.check_against)
        bindings = fm.sample_bindings(tags[0], args.bindings, args.seed)
        verdict = fm.numeric_equiv(reduced, target, bindings).verdict
        sys.stdout.write(f"# verdict: {verdict}\n")
        note += f"; {verdict} over {args.bindings} bindings"
    print(note, file=sys.stderr)
    return 0


def _parse_sweep_range(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"sweep range {text!r} is not start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ValidationError(f"sweep range {text!r} has a non-numeric part") from None
    if step <= 0:
        raise ValidationError(f"sweep step must be positive, got {step}")
    if stop < start:
        raise ValidationError(f"sweep range {text!r} runs backwards")
    values = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-12:
            break
        values.append(v)
        k += 1
    return values


def cmd_sim(args) -> int:
    channel, law = _load_pair(args, "t1")
    if args.seed is None:
        print("note: --seed not given, defaulting to 0", file=sys.stderr)
        args.seed = 0

    if args.sweep is not None:
        name, ranges = args.sweep
        if name.lower() != "rh1":
            raise ValidationError(f"only the rh1 rate can be swept, not {name!r}")
        rates = _parse_sweep_range(ranges)

        def run_one(r: float) -> float:
            return sim.covering_experiment(
                law, channel, r, args.n, args.trials, args.seed, epsilon=args.eps
            )

        if args.jobs > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                fractions = list(pool.map(run_one, rates))
        else:
            fractions = [run_one(r) for r in rates]
        sys.stdout.write("rh1,success_fraction\n")
        for r, frac in zip(rates, fractions):
            sys.stdout.write(f"{r:.10g},{frac:.10g}\n")
        print(f"covering sweep: {len(rates)} points, {args.trials} trials each",
              file=sys.stderr)
        return 0

    cfg = sim.SimConfig(
        n=args.n,
        blocks=args.blocks,
        rates=T1Rates(args.rbar, args.rh1, args.rh2, args.rs1, args.rs2),
        typicality=sim.TypicalityParams(args.eps),
        trials=args.trials,
        seed=args.seed,
    )
    stats = sim.run_cf(channel, law, cfg)
    if args.csv:
        sys.stdout.write(stats.to_csv())
    else:
        sys.stdout.write(io.dumps(stats.to_dict()))
    errors = sum(stats.stage_errors.values())
    print(f"{stats.blocks_decoded} blocks decoded, {errors} first errors",
          file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tworelay",
        description="Rates, reductions, and toy coding runs for the two-relay feedback network.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one law on one channel")
    p_eval.add_argument("--channel", required=True, help="channel JSON file")
    p_eval.add_argument("--law", required=True, help="law JSON file")
    p_eval.add_argument("--theorem", required=True, choices=("t1", "t2"))
    p_eval.add_argument("--nats", action="store_true",
                        help="report information values in nats instead of bits")
    p_eval.set_defaults(func=cmd_eval)

    p_opt = sub.add_parser("optimize", help="search for a high-rate law")
    p_opt.add_argument("--channel", required=True, help="channel JSON file")
    p_opt.add_argument("--theorem", required=True, choices=("t1", "t2"))
    p_opt.add_argument("--mode", default="grid", choices=("grid", "random-restart"))
    p_opt.add_argument("--resolution", type=int, default=8)
    p_opt.add_argument("--restarts", type=int, default=8)
    p_opt.add_argument("--max-iter", type=int, default=24)
    p_opt.add_argument("--seed", type=int, default=0)
    p_opt.add_argument("--tolerance", type=float, default=1e-6)
    p_opt.add_argument("--yh1-size", type=int, default=2)
    p_opt.add_argument("--yh2-size", type=int, default=2)
    p_opt.add_argument("--v1-size", type=int, default=2)
    p_opt.add_argument("--v2-size", type=int, default=2)
    p_opt.add_argument("--jobs", type=int, default=1,
                       help="worker cap for restart batches")
    p_opt.add_argument("--nats", action="store_true",
                       help="report information values in nats instead of bits")
    p_opt.set_defaults(func=cmd_optimize)

    p_fm = sub.add_parser("fm", help="eliminate variables from an inequality system")
    p_fm.add_argument("which", help="t1, t2, or a system file")
    p_fm.add_argument("--eliminate", nargs="*", default=None, metavar="VAR",
                      help="variables to project out (builtin systems default "
                           "to their internal rates)")
    p_fm.add_argument("--check-against", default=None, metavar="TARGET",
                      help="t1, t2, or a system file to compare against numerically")
    p_fm.add_argument("--bindings", type=int, default=30,
                      help="sampled laws for the numeric check")
    p_fm.add_argument("--seed", type=int, default=0)
    p_fm.set_defaults(func=cmd_fm)

    p_sim = sub.add_parser("sim", help="run the toy coding scheme")
    p_sim.add_argument("--channel", required=True, help="channel JSON file")
    p_sim.add_argument("--law", required=True, help="t1 law JSON file")
    p_sim.add_argument("--n", type=int, default=8, help="block length")
    p_sim.add_argument("--blocks", type=int, default=3)
    p_sim.add_argument("--trials", type=int, default=20)
    p_sim.add_argument("--eps", type=float, default=0.2,
                       help="typicality tolerance")
    p_sim.add_argument("--seed", type=int, default=None)
    for name in ("rbar", "rh1", "rh2", "rs1", "rs2"):
        p_sim.add_argument(f"--{name}", type=float, default=0.0)
    p_sim.add_argument("--csv", action="store_true",
                       help="emit the one-row CSV instead of JSON")
    p_sim.add_argument("--sweep", nargs=2, default=None,
                       metavar=("RATE", "START:STOP:STEP"),
                       help="covering-success sweep over the rh1 book rate")
    p_sim.add_argument("--jobs", type=int, default=1,
                       help="worker cap for sweep points")
    p_sim.set_defaults(func=cmd_sim)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ResourceLimitError as err:
        print(f"resource limit: {err}", file=sys.stderr)
        return 3
    except InvariantError as err:
        print(f"invariant violated: {err}", file=sys.stderr)
        return 4
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
