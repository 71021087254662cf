"""Statistics over simulation output: latency means and tail percentiles,
denial fractions, transfer traffic, instability detection, and
replication confidence intervals."""

import csv
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .entities import MODE_NAMES


class EmptyWindow(ValueError):
    """No records left after warm-up filtering."""


def nearest_rank(sorted_values, pct):
    """Nearest-rank percentile (no interpolation) of an ascending sample."""
    n = len(sorted_values)
    if n == 0:
        raise EmptyWindow("empty sample")
    rank = max(1, int(np.ceil(pct / 100.0 * n)))
    return sorted_values[rank - 1]


@dataclass
class RunSummary:
    """Per-replication metrics."""

    mean_s: float
    p95_s: float
    p99_s: float
    denial: float
    transfer_bytes: int
    utilization: float
    unstable: bool
    replication: int = 0
    n_completed: int = 0
    mean_local_s: float = float("nan")
    mean_remote_s: float = float("nan")
    p99_local_s: float = float("nan")
    p99_remote_s: float = float("nan")


def summarize(records, warmup):
    """Latency statistics over (client, arrival, completion, preferred,
    served_local) records with arrival after the warm-up cut."""
    waited = sorted(comp - arr for _, arr, comp, _, _ in records
                    if arr > warmup)
    if not waited:
        raise EmptyWindow(f"no records after warmup={warmup}")
    denial_base = denied = 0
    for _, arr, _, pref, served_local in records:
        if arr > warmup and pref:
            denial_base += 1
            if not served_local:
                denied += 1
    return RunSummary(
        mean_s=float(np.mean(waited)),
        p95_s=nearest_rank(waited, 95.0),
        p99_s=nearest_rank(waited, 99.0),
        denial=denied / denial_base if denial_base else 0.0,
        transfer_bytes=0,
        utilization=float("nan"),
        unstable=False,
        n_completed=len(waited),
    )


def detect_instability(qlen_samples, n_clients, slope_threshold=0.01,
                       backlog_factor=10.0):
    """True when the in-system count keeps growing.

    Least-squares slope over the second half of the measurement ticks must
    exceed the threshold (invocations/s) and the final backlog must exceed
    backlog_factor * n_clients.
    """
    if len(qlen_samples) < 10:
        return False
    half = qlen_samples[len(qlen_samples) // 2:]
    ts = np.array([t for t, _ in half])
    qs = np.array([q for _, q in half], dtype=float)
    if qs[-1] <= backlog_factor * n_clients:
        return False
    slope = np.polyfit(ts, qs, 1)[0]
    return bool(slope > slope_threshold)


def summarize_result(result):
    """RunSummary for one SimResult, including instability detection."""
    wl = np.asarray(result.waited_local)
    wr = np.asarray(result.waited_remote)
    waited = np.sort(np.concatenate((wl, wr)))
    unstable = detect_instability(result.qlen_samples, result.n_clients)
    if waited.size == 0:
        raise EmptyWindow("no completed invocations after warm-up")
    util = (sum(result.busy_s) / (len(result.busy_s) * result.horizon)
            if result.busy_s else float("nan"))
    return RunSummary(
        mean_s=float(waited.mean()),
        p95_s=float(nearest_rank(waited, 95.0)),
        p99_s=float(nearest_rank(waited, 99.0)),
        denial=result.denial_fraction,
        transfer_bytes=result.transfer_bytes,
        utilization=util,
        unstable=unstable,
        replication=result.replication,
        n_completed=int(waited.size),
        mean_local_s=float(wl.mean()) if wl.size else float("nan"),
        mean_remote_s=float(wr.mean()) if wr.size else float("nan"),
        p99_local_s=(float(nearest_rank(np.sort(wl), 99.0)) if wl.size
                     else float("nan")),
        p99_remote_s=(float(nearest_rank(np.sort(wr), 99.0)) if wr.size
                      else float("nan")),
    )


@dataclass
class Aggregate:
    """Replication means with 95% Student-t confidence intervals."""

    mean: dict
    ci_lo: dict
    ci_hi: dict
    n: int
    unstable: bool


_AGG_METRICS = ("mean_s", "p95_s", "p99_s", "denial", "transfer_bytes",
                "utilization")


def aggregate(summaries):
    """Combine replication summaries; any unstable replication marks the
    aggregate unstable and suppresses the intervals."""
    if len(summaries) < 2:
        raise ValueError("need at least 2 replications to aggregate")
    unstable = any(s.unstable for s in summaries)
    mean, lo, hi = {}, {}, {}
    n = len(summaries)
    tcrit = float(sps.t.ppf(0.975, n - 1))
    for name in _AGG_METRICS:
        vals = np.array([getattr(s, name) for s in summaries], dtype=float)
        m = float(np.mean(vals))
        mean[name] = m
        if unstable:
            lo[name] = hi[name] = float("nan")
        else:
            half = tcrit * float(np.std(vals, ddof=1)) / np.sqrt(n)
            lo[name] = m - half
            hi[name] = m + half
    return Aggregate(mean=mean, ci_lo=lo, ci_hi=hi, n=n, unstable=unstable)


SUMMARY_HEADER = ["scenario", "N", "C", "L_or_f", "mean_s", "ci_lo", "ci_hi",
                  "p95_s", "p99_s", "denial", "bytes", "unstable"]

INVOCATIONS_HEADER = ["replication", "client", "arrival_s", "completion_s",
                      "preferred", "served", "waited_s"]


def summary_row(scenario, n_clients, n_containers, l_or_f, agg):
    return [scenario, n_clients, n_containers, l_or_f,
            repr(agg.mean["mean_s"]), repr(agg.ci_lo["mean_s"]),
            repr(agg.ci_hi["mean_s"]), repr(agg.mean["p95_s"]),
            repr(agg.mean["p99_s"]), repr(agg.mean["denial"]),
            int(agg.mean["transfer_bytes"]), int(agg.unstable)]


def write_summary(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_HEADER)
        w.writerows(rows)


def write_invocations(path, results):
    """Per-invocation CSV from replications run with collect_records."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(INVOCATIONS_HEADER)
        for res in results:
            if res.records is None:
                raise ValueError("run with collect_records=True to export")
            rep = res.replication
            for cid, arr, comp, pref, served in res.records:
                w.writerow([rep, cid, repr(arr), repr(comp),
                            MODE_NAMES[pref], MODE_NAMES[served],
                            repr(comp - arr)])
