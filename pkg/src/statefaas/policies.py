"""Decision logic: the static local/remote split, admission of
application-triggered local requests, and the provisioning search."""

from dataclasses import dataclass
from math import ceil, floor

from .kernel import ConfigurationError
from .queueing import LAMBDA_C, MU_R


@dataclass(frozen=True)
class StaticSplit:
    """Network-triggered policy: the first L clients get dedicated
    containers at t=0, the rest share the remaining pool."""

    local_containers: int

    def validate(self, n_clients, n_containers):
        limit = min(n_clients, n_containers)
        if not 0 <= self.local_containers <= limit:
            raise ConfigurationError(
                f"local_containers={self.local_containers} outside "
                f"[0, min(N={n_clients}, C={n_containers})]"
            )


@dataclass(frozen=True)
class AdmissionOnDemand:
    """Application-triggered policy: local requests are granted while an
    unbound container exists and the residual remote pool stays stable."""


def grant_local(n_unbound, n_remote_preferring, n_containers, n_bound_after,
                lam=LAMBDA_C, mu_r=MU_R):
    """Grant rule for a local-state request.

    Requires a free (unbound, possibly busy) container and that the
    remote pool left after the grant can sustain the load of the clients
    currently preferring remote execution.
    """
    if n_unbound <= 0:
        return False
    if n_remote_preferring == 0:
        return True
    return n_remote_preferring * lam < (n_containers - n_bound_after) * mu_r


def search_lower_bound(n_clients, f_local, lam=LAMBDA_C, mu_r=MU_R):
    """Closed-form lower bound on the provisioned container count.

    ceil(f*N) containers for the sustained local demand plus enough
    remote servers for the complementary load, plus one for strictness.
    """
    n_local = ceil(f_local * n_clients)
    n_remote = floor((1.0 - f_local) * n_clients * lam / mu_r) + 1
    return n_local + n_remote


@dataclass(frozen=True)
class SearchResult:
    c_min: int
    denial: float
    denial_ci_hi: float
    saturated: bool = False

    def ratio(self, n_clients):
        return self.c_min / n_clients


def provision_search(n_clients, f_local, evaluate, target_denial=0.01,
                     lam=LAMBDA_C, mu_r=MU_R, max_containers=None):
    """Smallest container count meeting stability and the denial target.

    `evaluate(C)` must return (denial_mean, denial_ci_hi, unstable) from
    simulation; a candidate passes when it is stable and the 95% CI upper
    bound of the per-invocation denial fraction is <= target_denial.
    Denial is assumed nonincreasing in C, so the search bisects between
    the closed-form lower bound and the saturation bound.
    """
    if not 0.0 <= f_local < 1.0:
        raise ConfigurationError(f"f_local must be in [0, 1), got {f_local}")
    lo_bound = search_lower_bound(n_clients, f_local, lam, mu_r)
    if target_denial >= 1.0:
        return SearchResult(lo_bound, 0.0, 0.0)
    saturation = n_clients + ceil(n_clients * lam / mu_r) + 1
    if max_containers is None:
        max_containers = saturation
    max_containers = min(max_containers, saturation)

    cache = {}

    def passes(c):
        if c not in cache:
            cache[c] = evaluate(c)
        denial, ci_hi, unstable = cache[c]
        return (not unstable) and ci_hi <= target_denial

    if passes(lo_bound):
        denial, ci_hi, _ = cache[lo_bound]
        return SearchResult(lo_bound, denial, ci_hi)

    hi = min(n_clients, max_containers)
    if hi <= lo_bound or not passes(hi):
        hi = max_containers
        if not passes(hi):
            denial, ci_hi, _ = cache[hi]
            return SearchResult(hi, denial, ci_hi, saturated=True)
    lo = lo_bound  # known failing
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if passes(mid):
            hi = mid
        else:
            lo = mid
    denial, ci_hi, _ = cache[hi]
    return SearchResult(hi, denial, ci_hi)
