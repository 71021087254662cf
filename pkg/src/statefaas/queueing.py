"""Closed-form queueing results used as ground truth for the simulator.

Covers M/M/1 and Erlang-C M/M/c mean response times, the static-split
weighted latency curve, its optimal split, and the stability frontier.
Unstable configurations are reported as the value UNSTABLE (infinity),
never as an exception, so whole curves can be tabulated across their
divergence point.
"""

from math import ceil, inf, isinf

# Default model parameters: 4.5 invocations/min per client, 1 s mean local
# service, 3 s mean remote service, 40 containers.
LAMBDA_C = 4.5 / 60.0
MU_L = 1.0
MU_R = 1.0 / 3.0
C_TOTAL = 40

UNSTABLE = inf


def is_unstable(value):
    return isinf(value)


def mm1_response(lam, mu):
    """Mean response time of an M/M/1 queue, 1/(mu - lambda)."""
    if lam < 0 or mu <= 0:
        raise ValueError(f"need lam >= 0 and mu > 0, got lam={lam}, mu={mu}")
    if lam >= mu:
        return UNSTABLE
    return 1.0 / (mu - lam)


def erlang_b(c, a):
    """Erlang-B blocking probability, by the standard recurrence."""
    b = 1.0
    for k in range(1, c + 1):
        b = a * b / (k + a * b)
    return b


def erlang_c(c, a):
    """Probability an arrival waits in an M/M/c queue with offered load a.

    Computed from Erlang-B via C = B / (1 - rho*(1 - B)), which avoids
    the factorial overflow of the textbook formula.
    """
    if c < 1 or int(c) != c:
        raise ValueError(f"server count must be a positive integer, got {c}")
    if a < 0:
        raise ValueError(f"offered load must be nonnegative, got {a}")
    if a >= c:
        return UNSTABLE
    if a == 0.0:
        return 0.0
    b = erlang_b(c, a)
    rho = a / c
    return b / (1.0 - rho * (1.0 - b))


def mmc_response(lam, mu, c):
    """Mean response time of an M/M/c queue: 1/mu + C(c,a)/(c*mu - lam)."""
    if lam < 0 or mu <= 0:
        raise ValueError(f"need lam >= 0 and mu > 0, got lam={lam}, mu={mu}")
    if lam >= c * mu:
        return UNSTABLE
    pwait = erlang_c(c, lam / mu)
    return 1.0 / mu + pwait / (c * mu - lam)


def scenario1_latency(n_clients, n_local, c_total=C_TOTAL,
                      lam=LAMBDA_C, mu_l=MU_L, mu_r=MU_R):
    """Mean latency over all clients under a static split.

    n_local clients get dedicated M/M/1 containers at rate mu_l; the rest
    share the remaining containers as one M/M/c at rate mu_r. The average
    weights the two groups by their cardinalities. Returns UNSTABLE when
    the remote subsystem (or a dedicated container) is overloaded.
    """
    if not 0 <= n_local <= min(n_clients, c_total):
        raise ValueError(
            f"n_local={n_local} outside [0, min(N={n_clients}, C={c_total})]"
        )
    w_local = mm1_response(lam, mu_l)
    if n_local == n_clients:
        return w_local
    n_remote = n_clients - n_local
    c_remote = c_total - n_local
    if c_remote < 1:
        return UNSTABLE
    w_remote = mmc_response(n_remote * lam, mu_r, c_remote)
    if is_unstable(w_local) or is_unstable(w_remote):
        return UNSTABLE
    return (n_local * w_local + n_remote * w_remote) / n_clients


def scenario1_optimal_split(n_clients, c_total=C_TOTAL,
                            lam=LAMBDA_C, mu_l=MU_L, mu_r=MU_R):
    """Argmin of scenario1_latency over stable splits; ties go to smaller L.

    Returns (L*, W(L*)), or (None, UNSTABLE) if no split is stable.
    """
    best_l = None
    best_w = UNSTABLE
    for n_local in range(min(n_clients, c_total) + 1):
        w = scenario1_latency(n_clients, n_local, c_total, lam, mu_l, mu_r)
        if w < best_w:
            best_l, best_w = n_local, w
    return best_l, best_w


def stability_frontier(n_clients, c_total=C_TOTAL, lam=LAMBDA_C, mu_r=MU_R):
    """Largest L with a stable remote block, i.e. (N-L)*lam < (C-L)*mu_r.

    Returns -1 when even L=0 is unstable. The L == N split (no remote
    clients) is always stable but is not part of the frontier formula;
    callers cap with min(N, C) separately.
    """
    best = -1
    for n_local in range(min(n_clients, c_total) + 1):
        if n_local == n_clients:
            break
        if (n_clients - n_local) * lam < (c_total - n_local) * mu_r:
            best = n_local
    return best


def remote_stability_bound(n_clients, lam=LAMBDA_C, mu_r=MU_R):
    """Smallest container count keeping a pure remote pool stable."""
    c = ceil(n_clients * lam / mu_r)
    if n_clients * lam >= c * mu_r:
        c += 1
    return max(c, 1)
