"""Command-line interface.

Subcommands: scenario1, scenario2, simulate, oracle, selftest.
Exit codes: 0 success, 1 validation error, 2 runtime fault,
3 saturated/unstable-only result.
"""

import argparse
import csv
import os
import sys

from . import experiments, queueing
from .entities import MisrouteError
from .kernel import ConfigurationError, SimulationFault
from .metrics import write_summary

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAULT = 2
EXIT_DEGENERATE = 3


def _build_parser():
    p = argparse.ArgumentParser(
        prog="statefaas",
        description="Simulator and queueing oracle for a stateful FaaS "
                    "edge platform with remote/local state transitions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--seed", type=int, help="master seed override")
        sp.add_argument("--out", help="output directory override")
        sp.add_argument("--replications", type=int)
        sp.add_argument("--clients", type=int, nargs="+")
        sp.add_argument("--containers", type=int)
        sp.add_argument("--horizon", type=float, help="horizon in seconds")

    s1 = sub.add_parser("scenario1", help="static-split latency sweep")
    common(s1)
    s1.add_argument("--local-sweep", type=int, nargs="+",
                    help="L values to simulate (default: full range)")

    s2 = sub.add_parser("scenario2", help="provisioning search")
    common(s2)
    s2.add_argument("--f-local", type=float, nargs="+",
                    help="local-time fractions (default: 0.2 0.3 0.4)")
    s2.add_argument("--target-denial", type=float)

    sc = sub.add_parser("simulate", help="single custom configuration")
    common(sc)
    sc.add_argument("--local-containers", type=int,
                    help="static split size (network-triggered)")
    sc.add_argument("--f-local", type=float,
                    help="run with application triggers at this fraction")

    orc = sub.add_parser("oracle", help="analytical tables only")
    orc.add_argument("--scenario1", action="store_true",
                     help="static-split latency curve (default)")
    orc.add_argument("--clients", type=int, nargs="+", default=[50, 70, 90, 110])
    orc.add_argument("--containers", type=int, default=40)
    orc.add_argument("--arrival-rate-per-min", type=float, default=4.5)
    orc.add_argument("--mean-local-service-s", type=float, default=1.0)
    orc.add_argument("--mean-remote-service-s", type=float, default=3.0)

    st = sub.add_parser("selftest", help="run the quick invariant battery")
    st.add_argument("--seed", type=int, default=7)
    return p


def _load_config(args, scenario):
    if args.config:
        cfg = experiments.ScenarioConfig.from_json(args.config)
        cfg.scenario = scenario
    else:
        cfg = experiments.ScenarioConfig(scenario=scenario)
    if args.seed is not None:
        cfg.master_seed = args.seed
    if args.out is not None:
        cfg.output_dir = args.out
    if args.replications is not None:
        cfg.replications = args.replications
    if args.clients is not None:
        cfg.clients = list(args.clients)
    if args.containers is not None:
        cfg.containers = args.containers
    if args.horizon is not None:
        cfg.horizon_s = args.horizon
    if getattr(args, "local_sweep", None) is not None:
        cfg.local_sweep = list(args.local_sweep)
    f_local = getattr(args, "f_local", None)
    if f_local is not None:
        cfg.f_local = f_local if isinstance(f_local, list) else [f_local]
    if getattr(args, "target_denial", None) is not None:
        cfg.target_denial = args.target_denial
    cfg.validate()
    return cfg


def _cmd_oracle(args):
    mu_l = 1.0 / args.mean_local_service_s
    mu_r = 1.0 / args.mean_remote_service_s
    lam = args.arrival_rate_per_min / 60.0
    w = csv.writer(sys.stdout)
    w.writerow(["N", "L", "W_local", "W_remote", "W_avg", "stable"])
    for n in args.clients:
        for l in range(min(n, args.containers) + 1):
            w_local = queueing.mm1_response(lam, mu_l)
            n_rem = n - l
            if n_rem > 0 and args.containers - l >= 1:
                w_remote = queueing.mmc_response(n_rem * lam, mu_r,
                                                 args.containers - l)
            elif n_rem > 0:
                w_remote = queueing.UNSTABLE
            else:
                w_remote = float("nan")
            w_avg = queueing.scenario1_latency(n, l, args.containers, lam,
                                               mu_l, mu_r)
            stable = 0 if queueing.is_unstable(w_avg) else 1
            w.writerow([n, l, repr(w_local), repr(w_remote), repr(w_avg),
                        stable])
    return EXIT_OK


def _cmd_scenario1(args):
    cfg = _load_config(args, "1")
    points, rows = experiments.run_scenario1(cfg)
    os.makedirs(cfg.output_dir, exist_ok=True)
    write_summary(os.path.join(cfg.output_dir, "summary.csv"), rows)
    print(f"wrote {os.path.join(cfg.output_dir, 'summary.csv')}")
    if all(p.agg is None for p in points):
        return EXIT_DEGENERATE
    return EXIT_OK


def _cmd_scenario2(args):
    cfg = _load_config(args, "2")
    points, rows = experiments.run_scenario2(cfg)
    os.makedirs(cfg.output_dir, exist_ok=True)
    write_summary(os.path.join(cfg.output_dir, "summary.csv"), rows)
    print(f"wrote {os.path.join(cfg.output_dir, 'summary.csv')}")
    if any(p.saturated for p in points):
        return EXIT_DEGENERATE
    return EXIT_OK


def _cmd_simulate(args):
    cfg = _load_config(args, "custom")
    agg = experiments.run_custom(cfg, n_local=args.local_containers,
                                 f_local=args.f_local)
    return EXIT_DEGENERATE if agg.unstable else EXIT_OK


def _cmd_selftest(args):
    from .policies import StaticSplit
    from .simulator import Simulation

    print("selftest: transition soak with invariant auditing enabled")
    from .policies import AdmissionOnDemand
    sim = Simulation(12, 9, AdmissionOnDemand(), f_local=0.35,
                     mean_local_duration=40.0, d_down=0.5, d_up=0.5,
                     master_seed=args.seed, check_invariants=True,
                     collect_records=True)
    res = sim.run(4000.0, drain=True)
    assert res.generated == res.completed, "drain left invocations behind"
    assert res.version_violations == 0, "state version safety violated"
    print(f"  ok: {res.generated} invocations, "
          f"{res.to_local_done + res.to_remote_done} transitions, "
          f"0 violations")

    print("selftest: static split equivalence vs oracle (short run)")
    sim = Simulation(20, 15, StaticSplit(5), master_seed=args.seed,
                     check_invariants=True)
    res = sim.run(20000.0, warmup=2000.0)
    from .metrics import summarize_result
    s = summarize_result(res)
    w = queueing.scenario1_latency(20, 5, 15)
    rel = abs(s.mean_s - w) / w
    assert rel < 0.15, f"simulated mean {s.mean_s:.3f} vs oracle {w:.3f}"
    print(f"  ok: sim {s.mean_s:.3f} s vs oracle {w:.3f} s "
          f"(rel err {rel:.3f})")
    print("selftest passed")
    return EXIT_OK


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    handlers = {
        "oracle": _cmd_oracle,
        "scenario1": _cmd_scenario1,
        "scenario2": _cmd_scenario2,
        "simulate": _cmd_simulate,
        "selftest": _cmd_selftest,
    }
    try:
        return handlers[args.command](args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SimulationFault, MisrouteError, AssertionError) as exc:
        print(f"fault: {exc}", file=sys.stderr)
        return EXIT_FAULT


if __name__ == "__main__":
    sys.exit(main())
