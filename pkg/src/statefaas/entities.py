"""Core entity model: function types, clients/sessions, containers,
broker routing records, and the external state service."""

from collections import deque
from dataclasses import dataclass

from .kernel import ConfigurationError

REMOTE = 0
LOCAL = 1

MODE_NAMES = {REMOTE: "remote", LOCAL: "local"}


@dataclass(frozen=True)
class FunctionType:
    """Service rates for one function type, remote-state vs local-state.

    The remote rate folds the external state round-trip into the mean
    service time, so local execution is never slower.
    """

    remote_service_rate: float = 1.0 / 3.0
    local_service_rate: float = 1.0
    state_size_bytes: int = 100_000

    def __post_init__(self):
        if not self.local_service_rate >= self.remote_service_rate > 0:
            raise ConfigurationError(
                "need local_service_rate >= remote_service_rate > 0, got "
                f"{self.local_service_rate} and {self.remote_service_rate}"
            )
        if self.state_size_bytes < 0:
            raise ConfigurationError("state_size_bytes must be nonnegative")


class Client:
    """A client and its single session."""

    __slots__ = ("cid", "preferred", "actual", "bound", "job",
                 "arrivals", "phases", "expected_version")

    def __init__(self, cid, arrivals, phases):
        self.cid = cid
        self.preferred = REMOTE
        self.actual = REMOTE
        self.bound = -1          # container id when actual == LOCAL
        self.job = None          # in-flight TransitionJob, at most one
        self.arrivals = arrivals
        self.phases = phases
        self.expected_version = 0  # version uploaded by the last to-remote job


class Container:
    """A worker container, either in the shared remote pool or bound to
    one session in local-state mode."""

    __slots__ = ("kid", "session", "detaching", "busy", "job", "queue",
                 "busy_s", "svc", "pending_job")

    def __init__(self, kid, svc):
        self.kid = kid
        self.session = -1        # -1: remote pool; else bound client id
        self.detaching = False   # claimed by an in-flight to-local job
        self.busy = False
        self.job = None          # (client id, arrival time, preferred, local?)
        self.queue = deque()
        self.busy_s = 0.0
        self.svc = svc
        self.pending_job = -1    # to-local job waiting for detach


class MisrouteError(RuntimeError):
    """Invocation for a client without a routing record; must never happen."""


# Dispatch target tags returned by Broker.route
TARGET_REMOTE_POOL = "remote_pool"
TARGET_CONTAINER = "container"
TARGET_BUFFER = "buffer"


class Broker:
    """Per-client routing records, updated at the tail of each transition."""

    def __init__(self, n_clients):
        # record: -1 remote pool, >= 0 dedicated container id
        self.records = [-1] * n_clients
        self.misroutes = 0

    def route(self, clients, client_id):
        """Resolve the dispatch target for one invocation.

        A client with an in-flight transition is buffered at the broker;
        otherwise the routing record decides between the shared pool and
        the dedicated container.
        """
        if not 0 <= client_id < len(self.records):
            self.misroutes += 1
            raise MisrouteError(f"no routing record for client {client_id}")
        client = clients[client_id]
        if client.job is not None:
            return TARGET_BUFFER, client.job
        record = self.records[client_id]
        if record < 0:
            return TARGET_REMOTE_POOL, None
        return TARGET_CONTAINER, record


class ExternalStateService:
    """Session state versions and transfer accounting.

    Versions increase on every upload (each remote-state completion and
    each to-remote transition); a to-local transition must read the
    latest version. Only transition transfers count toward traffic.
    """

    def __init__(self, n_clients, state_size_bytes):
        self.versions = [0] * n_clients
        self.state_size_bytes = state_size_bytes
        self.transition_transfers = 0

    def upload(self, session, transition=False):
        self.versions[session] += 1
        if transition:
            self.transition_transfers += 1
        return self.versions[session]

    def download(self, session):
        self.transition_transfers += 1
        return self.versions[session]

    @property
    def transfer_bytes(self):
        return self.transition_transfers * self.state_size_bytes
