"""Experiment configuration, scenario runners, and replication plumbing.

Scenario 1 sweeps the static local/remote split and compares the
simulated latency against the analytical curve; scenario 2 runs the
provisioning search for each (client count, local-time fraction) pair.
"""

import json
import os
from dataclasses import dataclass, field

from .entities import FunctionType
from .kernel import ConfigurationError
from .metrics import (aggregate, summarize_result, summary_row,
                      write_invocations, write_summary)
from .policies import AdmissionOnDemand, StaticSplit, provision_search
from .queueing import (is_unstable, scenario1_latency, scenario1_optimal_split,
                       stability_frontier)
from .simulator import Simulation

DEFAULT_SCENARIO1_CLIENTS = [50, 70, 90, 110]
DEFAULT_F_LOCAL = [0.2, 0.3, 0.4]


@dataclass
class ScenarioConfig:
    """Full experiment parameterization with the paper-derived defaults."""

    scenario: str = "custom"
    clients: list = field(default_factory=lambda: [50])
    containers: int = 40
    local_sweep: list | None = None          # scenario 1; None = full range
    f_local: list = field(default_factory=lambda: list(DEFAULT_F_LOCAL))
    mean_local_duration_s: float = 300.0
    arrival_rate_per_min: float = 4.5
    mean_local_service_s: float = 1.0
    mean_remote_service_s: float = 3.0
    state_size_bytes: int = 100_000
    d_down_s: float = 0.0
    d_up_s: float = 0.0
    horizon_s: float | None = None           # None = per-scenario default
    warmup_fraction: float = 0.1
    replications: int = 20
    master_seed: int = 1
    target_denial: float = 0.01
    tick_interval_s: float = 100.0
    dispatch: str = "shared"
    output_dir: str = "out"
    max_containers: int | None = None

    def __post_init__(self):
        if isinstance(self.clients, int):
            self.clients = [self.clients]
        self.validate()

    def validate(self):
        def bad(msg):
            raise ConfigurationError(f"config: {msg}")

        if self.scenario not in ("1", "2", "custom"):
            bad(f"scenario must be '1', '2' or 'custom', got {self.scenario!r}")
        if not self.clients or any(n < 1 for n in self.clients):
            bad(f"clients must be positive, got {self.clients}")
        if self.containers < 1:
            bad(f"containers must be >= 1, got {self.containers}")
        for name in ("arrival_rate_per_min", "mean_local_service_s",
                     "mean_remote_service_s", "mean_local_duration_s"):
            if getattr(self, name) <= 0:
                bad(f"{name} must be positive, got {getattr(self, name)}")
        if any(not 0.0 <= f < 1.0 for f in self.f_local):
            bad(f"f_local values must be in [0, 1), got {self.f_local}")
        if self.d_down_s < 0 or self.d_up_s < 0:
            bad("transition delays must be nonnegative")
        if self.replications < 2:
            bad(f"need at least 2 replications, got {self.replications}")
        if not 0.0 <= self.warmup_fraction < 1.0:
            bad(f"warmup_fraction must be in [0, 1), got "
                f"{self.warmup_fraction}")
        if self.local_sweep is not None:
            limit = min(max(self.clients), self.containers)
            if any(not 0 <= l <= limit for l in self.local_sweep):
                bad(f"local_sweep entries outside [0, {limit}]")

    @property
    def lam(self):
        return self.arrival_rate_per_min / 60.0

    @property
    def function_type(self):
        return FunctionType(
            remote_service_rate=1.0 / self.mean_remote_service_s,
            local_service_rate=1.0 / self.mean_local_service_s,
            state_size_bytes=self.state_size_bytes,
        )

    def horizon_for(self, n_clients):
        if self.horizon_s is not None:
            return self.horizon_s
        if self.scenario == "2":
            # shorter horizons for large populations keep the invocation
            # count (and thus denial precision) roughly constant
            return min(1e5, max(1e4, 4e6 / n_clients))
        return 2e5

    @classmethod
    def from_json(cls, path):
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except FileNotFoundError:
            raise ConfigurationError(f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config file {path}: {exc}")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ConfigurationError(
                f"config file {path}: unknown keys {sorted(unknown)}")
        return cls(**raw)


def run_replications(cfg, n_clients, n_containers, policy, f_local=0.0,
                     horizon=None, replications=None, collect_records=False,
                     check_invariants=False):
    """Run independent replications; returns (summaries, results) in
    replication-index order regardless of execution strategy."""
    horizon = horizon if horizon is not None else cfg.horizon_for(n_clients)
    replications = replications or cfg.replications
    warmup = cfg.warmup_fraction * horizon
    summaries, results = [], []
    for rep in range(replications):
        sim = Simulation(
            n_clients, n_containers, policy,
            lam=cfg.lam, function_type=cfg.function_type,
            f_local=f_local, mean_local_duration=cfg.mean_local_duration_s,
            d_down=cfg.d_down_s, d_up=cfg.d_up_s,
            master_seed=cfg.master_seed, replication=rep,
            tick_interval=cfg.tick_interval_s, dispatch=cfg.dispatch,
            collect_records=collect_records,
            check_invariants=check_invariants,
        )
        res = sim.run(horizon, warmup=warmup)
        results.append(res)
        summaries.append(summarize_result(res))
    return summaries, results


@dataclass
class Scenario1Point:
    n_clients: int
    n_local: int
    oracle_w: float
    agg: object | None      # None for analytically unstable points
    is_argmin: bool


def run_scenario1(cfg, log=print):
    """Static-split sweep: simulated + analytical latency per (N, L)."""
    points = []
    rows = []
    for n in cfg.clients:
        sweep = (cfg.local_sweep if cfg.local_sweep is not None
                 else range(min(n, cfg.containers) + 1))
        lstar, _ = scenario1_optimal_split(
            n, cfg.containers, cfg.lam,
            1.0 / cfg.mean_local_service_s, 1.0 / cfg.mean_remote_service_s)
        frontier = stability_frontier(n, cfg.containers, cfg.lam,
                                      1.0 / cfg.mean_remote_service_s)
        log(f"scenario1 N={n}: argmin L*={lstar}, stability frontier "
            f"L<={frontier}")
        for l in sweep:
            w = scenario1_latency(
                n, l, cfg.containers, cfg.lam,
                1.0 / cfg.mean_local_service_s,
                1.0 / cfg.mean_remote_service_s)
            if is_unstable(w):
                points.append(Scenario1Point(n, l, w, None, False))
                rows.append(["1", n, cfg.containers, l, "nan", "nan", "nan",
                             "nan", "nan", 0.0, 0, 1])
                continue
            policy = StaticSplit(l)
            sums, _ = run_replications(cfg, n, cfg.containers, policy)
            agg = aggregate(sums)
            points.append(Scenario1Point(n, l, w, agg, l == lstar))
            rows.append(summary_row("1", n, cfg.containers, l, agg))
            log(f"  L={l}: sim {agg.mean['mean_s']:.4f} s "
                f"[{agg.ci_lo['mean_s']:.4f}, {agg.ci_hi['mean_s']:.4f}], "
                f"oracle {w:.4f} s{'  <-- argmin' if l == lstar else ''}")
    return points, rows


@dataclass
class Scenario2Point:
    n_clients: int
    f_local: float
    c_min: int
    ratio: float
    denial: float
    denial_ci_hi: float
    saturated: bool


def make_denial_evaluator(cfg, n_clients, f_local, log=None):
    """Denial estimator for the provisioning search: mean and 95% CI upper
    bound of the per-invocation denial fraction over replications."""

    def evaluate(n_containers):
        sums, _ = run_replications(
            cfg, n_clients, n_containers, AdmissionOnDemand(),
            f_local=f_local)
        agg = aggregate(sums)
        if log:
            log(f"    C={n_containers}: denial {agg.mean['denial']:.5f} "
                f"(ci_hi {agg.ci_hi['denial']:.5f})"
                f"{' UNSTABLE' if agg.unstable else ''}")
        return agg.mean["denial"], agg.ci_hi["denial"], agg.unstable

    return evaluate


def run_scenario2(cfg, log=print):
    """Provisioning search per (N, f): minimum containers for stability
    and the denial target."""
    points = []
    rows = []
    mu_r = 1.0 / cfg.mean_remote_service_s
    for n in cfg.clients:
        for f in cfg.f_local:
            log(f"scenario2 N={n} f={f}: searching "
                f"(horizon {cfg.horizon_for(n):.0f} s x "
                f"{cfg.replications} reps)")
            res = provision_search(
                n, f, make_denial_evaluator(cfg, n, f, log),
                target_denial=cfg.target_denial, lam=cfg.lam, mu_r=mu_r,
                max_containers=cfg.max_containers)
            point = Scenario2Point(n, f, res.c_min, res.c_min / n,
                                   res.denial, res.denial_ci_hi,
                                   res.saturated)
            points.append(point)
            log(f"  -> C_min={res.c_min} ({res.c_min / n:.3f} containers/"
                f"client), denial {res.denial:.5f}"
                f"{' SATURATED' if res.saturated else ''}")
            # final summary row re-simulates at C_min for the full metrics
            sums, _ = run_replications(cfg, n, res.c_min,
                                       AdmissionOnDemand(), f_local=f)
            rows.append(summary_row("2", n, res.c_min, f, aggregate(sums)))
    return points, rows


def run_custom(cfg, n_local=None, f_local=None, log=print):
    """Single configuration run; writes invocations.csv and summary.csv."""
    n = cfg.clients[0]
    if f_local is not None or cfg.scenario == "2":
        policy = AdmissionOnDemand()
        f = f_local if f_local is not None else cfg.f_local[0]
    else:
        policy = StaticSplit(n_local if n_local is not None else 0)
        f = 0.0
    sums, results = run_replications(cfg, n, cfg.containers, policy,
                                     f_local=f, collect_records=True)
    agg = aggregate(sums)
    os.makedirs(cfg.output_dir, exist_ok=True)
    write_invocations(os.path.join(cfg.output_dir, "invocations.csv"),
                      results)
    l_or_f = f if isinstance(policy, AdmissionOnDemand) else policy.local_containers
    write_summary(os.path.join(cfg.output_dir, "summary.csv"),
                  [summary_row(cfg.scenario, n, cfg.containers, l_or_f, agg)])
    log(f"custom run N={n} C={cfg.containers}: mean "
        f"{agg.mean['mean_s']:.4f} s, p99 {agg.mean['p99_s']:.4f} s, "
        f"denial {agg.mean['denial']:.5f}, unstable={agg.unstable}")
    return agg
