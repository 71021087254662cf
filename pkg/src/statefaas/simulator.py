"""Event-driven model of the FaaS platform: shared remote pool,
dedicated local containers, and the remote<->local transition protocol.

Transition ordering follows the orchestrator handshake: to local-state,
the claimed container first finishes its in-service remote invocation
(never preempted), the client's outstanding remote work quiesces, the
session state is downloaded, and only then is the broker record updated;
to remote-state, the dedicated container drains its queue, uploads the
state, tears down, and then the broker record flips. While a transition
is in flight the client's new invocations are buffered at the broker and
released, in arrival order, at the broker update.

The simulation can run through two equivalent drivers: a generic
handler-based loop that optionally audits every structural invariant
after each event, and an inlined loop used for long replications. Both
consume the same random streams in the same order, so they produce
bit-identical traces (tested).
"""

import heapq
from array import array
from collections import deque
from dataclasses import dataclass

from .entities import (LOCAL, REMOTE, Broker, Client, Container,
                       ExternalStateService, FunctionType)
from .kernel import (INF, INVOCATION_ARRIVAL, MEASUREMENT_TICK, PHASE_CHANGE,
                     SERVICE_COMPLETION, STREAM_ARRIVAL, STREAM_MISC,
                     STREAM_PHASE, STREAM_SERVICE, TRANSITION_STEP,
                     ConfigurationError, EventQueue, RngStream,
                     SimulationFault)
from .policies import AdmissionOnDemand, StaticSplit, grant_local
from .queueing import LAMBDA_C
from .workload import PhaseProcess

TO_LOCAL = 0
TO_REMOTE = 1

STEP_WAIT_DETACH = 0
STEP_QUIESCE = 1
STEP_DOWNLOADING = 2
STEP_DRAIN = 3
STEP_UPLOADING = 4


class TransitionJob:
    """One in-flight remote<->local transition for one client."""

    __slots__ = ("jid", "cid", "direction", "step", "container", "buffer",
                 "started")

    def __init__(self, jid, cid, direction, container, started):
        self.jid = jid
        self.cid = cid
        self.direction = direction
        self.step = STEP_WAIT_DETACH
        self.container = container
        self.buffer = []
        self.started = started


@dataclass
class SimResult:
    """Raw outcome of one replication."""

    n_clients: int
    n_containers: int
    horizon: float
    warmup: float
    generated: int
    completed: int
    waited_local: array
    waited_remote: array
    pref_local_total: int
    pref_local_denied: int
    qlen_samples: list
    transfer_bytes: int
    transfers: int
    busy_s: list
    attempts: int
    attempt_denials: int
    to_local_done: int
    to_remote_done: int
    version_violations: int
    misroutes: int
    records: list | None = None
    replication: int = 0

    @property
    def denial_fraction(self):
        if self.pref_local_total == 0:
            return 0.0
        return self.pref_local_denied / self.pref_local_total


class Simulation:
    """One replication of the platform model. Single-use: build, run, read."""

    def __init__(self, n_clients, n_containers, policy, *,
                 lam=LAMBDA_C, function_type=None,
                 f_local=0.0, mean_local_duration=300.0,
                 d_down=0.0, d_up=0.0,
                 master_seed=1, replication=0,
                 tick_interval=100.0,
                 dispatch="shared",
                 collect_records=False, check_invariants=False):
        if n_clients < 1 or n_containers < 0:
            raise ConfigurationError(
                f"need n_clients >= 1 and n_containers >= 0, got "
                f"{n_clients}, {n_containers}")
        if lam <= 0:
            raise ConfigurationError(f"arrival rate must be positive: {lam}")
        if d_down < 0 or d_up < 0:
            raise ConfigurationError("transition delays must be nonnegative")
        if dispatch not in ("shared", "per_container_random"):
            raise ConfigurationError(f"unknown dispatch discipline {dispatch!r}")
        fn = function_type or FunctionType()
        self.n_clients = n_clients
        self.n_containers = n_containers
        self.lam = lam
        self.mu_r = fn.remote_service_rate
        self.mu_l = fn.local_service_rate
        self.d_down = d_down
        self.d_up = d_up
        self.tick_interval = tick_interval
        self.dispatch = dispatch
        self.check_invariants = check_invariants
        self.replication = replication

        self.eq = EventQueue()
        self.broker = Broker(n_clients)
        self.state = ExternalStateService(n_clients, fn.state_size_bytes)
        self.clients = [
            Client(i,
                   RngStream(master_seed, STREAM_ARRIVAL, i, replication),
                   RngStream(master_seed, STREAM_PHASE, i, replication))
            for i in range(n_clients)
        ]
        self.containers = [
            Container(j, RngStream(master_seed, STREAM_SERVICE, j, replication))
            for j in range(n_containers)
        ]
        self.misc = RngStream(master_seed, STREAM_MISC, 0, replication)
        self.remote_idle = list(range(n_containers))
        self.shared = deque()
        self.outstanding_remote = [0] * n_clients

        self.jobs = {}
        self.next_jid = 0
        self.n_bound = 0
        self.n_transitioning = 0

        self.generated = 0
        self.completed = 0
        self.pref_local_total = 0
        self.pref_local_denied = 0
        self.waited_local = array("d")
        self.waited_remote = array("d")
        self.qlen_samples = []
        self.attempts = 0
        self.attempt_denials = 0
        self.to_local_done = 0
        self.to_remote_done = 0
        self.version_violations = 0
        self.records = [] if collect_records else None

        # preference process
        self.admission = isinstance(policy, AdmissionOnDemand)
        self.policy = policy
        if self.admission and f_local > 0.0:
            self.phase = PhaseProcess(f_local, mean_local_duration)
            self.r_r_to_l, self.r_l_to_r = self.phase.rates
        else:
            self.phase = None
            self.r_r_to_l = self.r_l_to_r = 0.0
        self.n_pref_remote = n_clients
        if self.phase is not None:
            for c in self.clients:
                if self.phase.initial_prefers_local(c.phases):
                    c.preferred = LOCAL
                    self.n_pref_remote -= 1
        if isinstance(policy, StaticSplit):
            policy.validate(n_clients, n_containers)

        self._handlers = [self._on_arrival, self._on_completion,
                          self._on_phase, self._on_transition,
                          self._on_tick, lambda _p: None]
        self._ran = False

    # ---------------------------------------------------------------- run

    def run(self, horizon, warmup=0.0, drain=False):
        if self._ran:
            raise SimulationFault("Simulation objects are single-use")
        self._ran = True
        if horizon <= 0:
            raise ConfigurationError(f"horizon must be positive, got {horizon}")
        self.warmup = warmup
        self.arrival_stop = horizon
        self.phase_stop = horizon
        self.tick_stop = horizon
        self.horizon = horizon

        # t=0 bootstrap, in client id order
        if isinstance(self.policy, StaticSplit):
            for cid in range(self.policy.local_containers):
                self._attempt_to_local(self.clients[cid], force=True)
        elif self.admission:
            for c in self.clients:
                if c.preferred == LOCAL:
                    self._attempt_to_local(c)
        for c in self.clients:
            t = c.arrivals.exponential(self.lam)
            if t <= self.arrival_stop:
                self.eq.schedule(t, INVOCATION_ARRIVAL, c.cid)
        if self.phase is not None:
            for c in self.clients:
                soj = self.phase.sojourn(c.preferred == LOCAL, c.phases)
                if soj is not None and soj <= self.phase_stop:
                    self.eq.schedule(soj, PHASE_CHANGE, c.cid)
        if self.tick_interval and self.tick_interval <= horizon:
            self.eq.schedule(self.tick_interval, MEASUREMENT_TICK, 0)

        import gc
        gc_was_enabled = gc.isenabled()
        gc.disable()
        try:
            if self.check_invariants or self.dispatch != "shared":
                self._run_generic(horizon, drain)
            else:
                self._run_fast(horizon, drain)
        finally:
            if gc_was_enabled:
                gc.enable()
        if self.eq.now < horizon:
            self.eq.now = horizon
        return self.result()

    def _run_generic(self, horizon, drain):
        handlers = self._handlers
        if self.check_invariants:
            audit = self._audit

            def wrap(h):
                def run_and_check(payload):
                    h(payload)
                    audit()
                return run_and_check

            handlers = [wrap(h) for h in handlers]
        self.eq.run_until(horizon, handlers)
        if drain:
            self.eq.run_until(INF, handlers)

    def _run_fast(self, horizon, drain):
        # Inlined copy of the arrival/completion fast paths; any state
        # touching transitions falls back to the shared slow-path methods.
        # Consumes streams in the same order as the generic driver.
        eq = self.eq
        heap = eq._heap
        push = heapq.heappush
        pop = heapq.heappop
        clients = self.clients
        containers = self.containers
        shared = self.shared
        shared_pop = shared.popleft
        shared_app = shared.append
        idle = self.remote_idle
        heapq.heapify(idle)
        versions = self.state.versions
        out = self.outstanding_remote
        inv_lam = 1.0 / self.lam
        inv_mu_r = 1.0 / self.mu_r
        inv_mu_l = 1.0 / self.mu_l
        arrival_stop = self.arrival_stop
        warmup = self.warmup
        admission = self.admission
        records = self.records
        has_records = records is not None
        wl_app = self.waited_local.append
        wr_app = self.waited_remote.append
        handlers = self._handlers
        stop = horizon
        nseq = eq._seq
        ngen = self.generated
        ncomp = self.completed
        nxt = next
        # sentinel marking the end of the horizon, ordered after real
        # events at the same timestamp; avoids peeking the heap top on
        # every iteration
        push(heap, (stop, INF, 5, 0))
        t = eq.now
        while heap:
            t, _s, kind, pl = pop(heap)
            if kind == 0:  # invocation arrival
                c = clients[pl]
                ngen += 1
                st = c.arrivals
                v = nxt(st.eit, -1.0)
                if v < 0.0:
                    st.refill()
                    v = nxt(st.eit)
                nt = t + v * inv_lam
                if nt <= arrival_stop:
                    push(heap, (nt, nseq, 0, pl))
                    nseq += 1
                if c.job is not None or (admission and c.preferred == 1
                                         and c.actual == 0):
                    eq.now = t
                    eq._seq = nseq
                    self.generated = ngen
                    self.completed = ncomp
                    self._route(c, t)
                    nseq = eq._seq
                    continue
                if c.actual == 1:
                    cont = containers[c.bound]
                    if cont.busy:
                        cont.queue.append((pl, t, c.preferred))
                    else:
                        st2 = cont.svc
                        v = nxt(st2.eit, -1.0)
                        if v < 0.0:
                            st2.refill()
                            v = nxt(st2.eit)
                        dur = v * inv_mu_l
                        cont.busy = True
                        cont.job = (pl, t, c.preferred)
                        cont.busy_s += dur
                        push(heap, (t + dur, nseq, 1, cont.kid))
                        nseq += 1
                else:
                    out[pl] += 1
                    cont = None
                    while idle:
                        kid = pop(idle)
                        cc = containers[kid]
                        if (not cc.busy and not cc.detaching
                                and cc.session == -1):
                            cont = cc
                            break
                    if cont is None:
                        shared_app((pl, t, c.preferred))
                    else:
                        if versions[pl] < c.expected_version:
                            self.version_violations += 1
                        st2 = cont.svc
                        v = nxt(st2.eit, -1.0)
                        if v < 0.0:
                            st2.refill()
                            v = nxt(st2.eit)
                        dur = v * inv_mu_r
                        cont.busy = True
                        cont.job = (pl, t, c.preferred)
                        cont.busy_s += dur
                        push(heap, (t + dur, nseq, 1, cont.kid))
                        nseq += 1
            elif kind == 1:  # service completion
                cont = containers[pl]
                cid, arr, pref = cont.job
                local = cont.session >= 0
                ncomp += 1
                if has_records:
                    records.append((cid, arr, t, pref, 1 if local else 0))
                if arr > warmup:
                    w = t - arr
                    if local:
                        wl_app(w)
                    else:
                        wr_app(w)
                    if pref:
                        self.pref_local_total += 1
                        if not local:
                            self.pref_local_denied += 1
                if local:
                    q = cont.queue
                    if q:
                        # stay busy, roll straight into the next queued job
                        st2 = cont.svc
                        v = nxt(st2.eit, -1.0)
                        if v < 0.0:
                            st2.refill()
                            v = nxt(st2.eit)
                        dur = v * inv_mu_l
                        cont.job = q.popleft()
                        cont.busy_s += dur
                        push(heap, (t + dur, nseq, 1, pl))
                        nseq += 1
                    else:
                        cont.job = None
                        cont.busy = False
                        cj = clients[cont.session].job
                        if cj is not None and cj.step == STEP_DRAIN:
                            eq.now = t
                            eq._seq = nseq
                            self.generated = ngen
                            self.completed = ncomp
                            self._begin_upload(cj)
                            nseq = eq._seq
                else:
                    out[cid] -= 1
                    versions[cid] += 1
                    if cont.detaching:
                        cont.job = None
                        cont.busy = False
                        eq.now = t
                        eq._seq = nseq
                        self.generated = ngen
                        self.completed = ncomp
                        self._detach_ready(cont)
                        nseq = eq._seq
                    elif shared:
                        c2, a2, p2 = shared_pop()
                        if versions[c2] < clients[c2].expected_version:
                            self.version_violations += 1
                        st2 = cont.svc
                        v = nxt(st2.eit, -1.0)
                        if v < 0.0:
                            st2.refill()
                            v = nxt(st2.eit)
                        dur = v * inv_mu_r
                        cont.job = (c2, a2, p2)
                        cont.busy_s += dur
                        push(heap, (t + dur, nseq, 1, pl))
                        nseq += 1
                    else:
                        cont.job = None
                        cont.busy = False
                        push(idle, pl)
                    cj = clients[cid].job
                    if (cj is not None and cj.step == STEP_QUIESCE
                            and out[cid] == 0):
                        eq.now = t
                        eq._seq = nseq
                        self.generated = ngen
                        self.completed = ncomp
                        self._begin_download(cj)
                        nseq = eq._seq
            elif kind == 5:  # end-of-horizon sentinel
                if drain:
                    continue
                break
            else:  # phase change / transition step / tick
                eq.now = t
                eq._seq = nseq
                self.generated = ngen
                self.completed = ncomp
                handlers[kind](pl)
                nseq = eq._seq
                ngen = self.generated
                ncomp = self.completed
        eq.now = t
        eq._seq = nseq
        self.generated = ngen
        self.completed = ncomp

    # ----------------------------------------------------- event handlers

    def _on_arrival(self, cid):
        c = self.clients[cid]
        self.generated += 1
        now = self.eq.now
        nt = now + c.arrivals.exponential(self.lam)
        if nt <= self.arrival_stop:
            self.eq.schedule(nt, INVOCATION_ARRIVAL, cid)
        self._route(c, now)

    def _route(self, c, now):
        if (self.admission and c.preferred == LOCAL and c.actual == REMOTE
                and c.job is None):
            self._attempt_to_local(c)
        if c.job is not None:
            c.job.buffer.append((now, c.preferred))
        elif c.actual == LOCAL:
            self._enqueue_local(c.bound, c.cid, now, c.preferred)
        else:
            self._dispatch_remote(c.cid, now, c.preferred)

    def _on_completion(self, kid):
        cont = self.containers[kid]
        cid, arr, pref = cont.job
        cont.job = None
        cont.busy = False
        now = self.eq.now
        local = cont.session >= 0
        self._record(cid, arr, now, pref, local)
        if local:
            if cont.queue:
                c2, a2, p2 = cont.queue.popleft()
                self._start_local(cont, c2, a2, p2)
            else:
                cj = self.clients[cont.session].job
                if cj is not None and cj.step == STEP_DRAIN:
                    self._begin_upload(cj)
        else:
            self.outstanding_remote[cid] -= 1
            self.state.upload(cid)  # remote instance writes state back
            if cont.detaching:
                self._detach_ready(cont)
            elif self.dispatch == "shared":
                if self.shared:
                    c2, a2, p2 = self.shared.popleft()
                    self._start_remote(cont, c2, a2, p2)
                else:
                    heapq.heappush(self.remote_idle, kid)
            else:
                if cont.queue:
                    c2, a2, p2 = cont.queue.popleft()
                    self._start_remote(cont, c2, a2, p2)
                else:
                    heapq.heappush(self.remote_idle, kid)
            cj = self.clients[cid].job
            if (cj is not None and cj.step == STEP_QUIESCE
                    and self.outstanding_remote[cid] == 0):
                self._begin_download(cj)

    def _on_phase(self, cid):
        c = self.clients[cid]
        now = self.eq.now
        if c.preferred == LOCAL:
            c.preferred = REMOTE
            self.n_pref_remote += 1
            rate = self.r_r_to_l  # sojourn in the new remote phase
            if c.actual == LOCAL and c.job is None:
                self._attempt_to_remote(c)
        else:
            c.preferred = LOCAL
            self.n_pref_remote -= 1
            rate = self.r_l_to_r
            if c.actual == REMOTE and c.job is None:
                self._attempt_to_local(c)
        nxt = now + c.phases.exponential(rate)
        if nxt <= self.phase_stop:
            self.eq.schedule(nxt, PHASE_CHANGE, cid)

    def _on_transition(self, jid):
        job = self.jobs.pop(jid)
        c = self.clients[job.cid]
        cont = self.containers[job.container]
        if job.direction == TO_LOCAL:
            # state download completed
            if self.outstanding_remote[job.cid] != 0:
                self.version_violations += 1
            self.state.download(job.cid)
            cont.detaching = False
            cont.pending_job = -1
            cont.session = job.cid
            self.n_transitioning -= 1
            self.n_bound += 1
            c.actual = LOCAL
            c.bound = cont.kid
            c.job = None
            self.broker.records[job.cid] = cont.kid
            self.to_local_done += 1
            for arr, pref in job.buffer:
                self._enqueue_local(cont.kid, job.cid, arr, pref)
            if self.admission and c.preferred == REMOTE:
                self._attempt_to_remote(c)
        else:
            # state upload completed; tear down and rejoin the pool
            self.state.upload(job.cid, transition=True)
            c.expected_version = self.state.versions[job.cid]
            cont.session = -1
            self.n_transitioning -= 1
            c.actual = REMOTE
            c.bound = -1
            c.job = None
            self.broker.records[job.cid] = -1
            self.to_remote_done += 1
            if self.dispatch == "shared" and self.shared:
                c2, a2, p2 = self.shared.popleft()
                self._start_remote(cont, c2, a2, p2)
            else:
                heapq.heappush(self.remote_idle, cont.kid)
            if self.admission and c.preferred == LOCAL:
                # preference flipped back mid-transition; turn around
                # immediately and keep the buffered invocations local
                self._attempt_to_local(c)
            if c.job is not None:
                c.job.buffer.extend(job.buffer)
            else:
                for arr, pref in job.buffer:
                    self._dispatch_remote(job.cid, arr, pref)

    def _on_tick(self, _payload):
        now = self.eq.now
        self.qlen_samples.append((now, self.generated - self.completed))
        nxt = now + self.tick_interval
        if nxt <= self.tick_stop:
            self.eq.schedule(nxt, MEASUREMENT_TICK, 0)

    # --------------------------------------------------------- mechanics

    def _record(self, cid, arr, now, pref, served_local):
        self.completed += 1
        if self.records is not None:
            self.records.append((cid, arr, now, pref, 1 if served_local else 0))
        if arr > self.warmup:
            w = now - arr
            if served_local:
                self.waited_local.append(w)
            else:
                self.waited_remote.append(w)
            if pref:
                self.pref_local_total += 1
                if not served_local:
                    self.pref_local_denied += 1

    def _start_local(self, cont, cid, arr, pref):
        dur = cont.svc.exponential(self.mu_l)
        cont.busy = True
        cont.job = (cid, arr, pref)
        cont.busy_s += dur
        self.eq.schedule(self.eq.now + dur, SERVICE_COMPLETION, cont.kid)

    def _start_remote(self, cont, cid, arr, pref):
        if self.state.versions[cid] < self.clients[cid].expected_version:
            self.version_violations += 1
        dur = cont.svc.exponential(self.mu_r)
        cont.busy = True
        cont.job = (cid, arr, pref)
        cont.busy_s += dur
        self.eq.schedule(self.eq.now + dur, SERVICE_COMPLETION, cont.kid)

    def _enqueue_local(self, kid, cid, arr, pref):
        cont = self.containers[kid]
        if cont.busy:
            cont.queue.append((cid, arr, pref))
        else:
            self._start_local(cont, cid, arr, pref)

    def _pop_idle(self):
        idle = self.remote_idle
        while idle:
            kid = heapq.heappop(idle)
            cont = self.containers[kid]
            if not cont.busy and not cont.detaching and cont.session == -1:
                return cont
        return None

    def _dispatch_remote(self, cid, arr, pref):
        self.outstanding_remote[cid] += 1
        if self.dispatch == "shared":
            cont = self._pop_idle()
            if cont is not None:
                self._start_remote(cont, cid, arr, pref)
            else:
                self.shared.append((cid, arr, pref))
        else:
            pool = [k.kid for k in self.containers
                    if k.session == -1 and not k.detaching]
            if not pool:
                self.shared.append((cid, arr, pref))
                return
            cont = self.containers[pool[self.misc.randint(len(pool))]]
            if cont.busy:
                cont.queue.append((cid, arr, pref))
            else:
                self._pop_specific_idle(cont.kid)
                self._start_remote(cont, cid, arr, pref)

    def _pop_specific_idle(self, kid):
        try:
            self.remote_idle.remove(kid)
            heapq.heapify(self.remote_idle)
        except ValueError:
            pass

    def _claim_container(self):
        cont = self._pop_idle()
        if cont is not None:
            return cont
        for cont in self.containers:
            if cont.session == -1 and not cont.detaching:
                return cont
        return None

    def _attempt_to_local(self, c, force=False):
        self.attempts += 1
        n_unbound = self.n_containers - self.n_bound - self.n_transitioning
        if force:
            ok = n_unbound > 0
        else:
            ok = grant_local(n_unbound, self.n_pref_remote, self.n_containers,
                             self.n_bound + self.n_transitioning + 1,
                             self.lam, self.mu_r)
        if not ok:
            self.attempt_denials += 1
            return False
        cont = self._claim_container()
        if cont is None:
            self.attempt_denials += 1
            return False
        jid = self.next_jid
        self.next_jid = jid + 1
        job = TransitionJob(jid, c.cid, TO_LOCAL, cont.kid, self.eq.now)
        self.jobs[jid] = job
        c.job = job
        cont.detaching = True
        self.n_transitioning += 1
        if self.dispatch != "shared" and cont.queue:
            self._reassign_orphans(cont)
        if cont.busy:
            cont.pending_job = jid
            job.step = STEP_WAIT_DETACH
        elif self.outstanding_remote[c.cid] > 0:
            job.step = STEP_QUIESCE
        else:
            self._begin_download(job)
        return True

    def _reassign_orphans(self, cont):
        # per-container dispatch only: detached container's pending remote
        # work moves round-robin to the remaining pool, preserving order
        orphans = list(cont.queue)
        cont.queue.clear()
        pool = [k for k in self.containers
                if k.session == -1 and not k.detaching and k.kid != cont.kid]
        if not pool:
            self.shared.extend(orphans)
            return
        for i, inv in enumerate(orphans):
            target = pool[i % len(pool)]
            if target.busy:
                target.queue.append(inv)
            else:
                self._pop_specific_idle(target.kid)
                self._start_remote(target, *inv)

    def _attempt_to_remote(self, c):
        jid = self.next_jid
        self.next_jid = jid + 1
        job = TransitionJob(jid, c.cid, TO_REMOTE, c.bound, self.eq.now)
        self.jobs[jid] = job
        c.job = job
        cont = self.containers[c.bound]
        self.n_bound -= 1
        self.n_transitioning += 1
        if cont.busy or cont.queue:
            job.step = STEP_DRAIN
        else:
            self._begin_upload(job)

    def _detach_ready(self, cont):
        job = self.jobs[cont.pending_job]
        cont.pending_job = -1
        if self.outstanding_remote[job.cid] > 0:
            job.step = STEP_QUIESCE
        else:
            self._begin_download(job)

    def _begin_download(self, job):
        job.step = STEP_DOWNLOADING
        self.eq.schedule(self.eq.now + self.d_down, TRANSITION_STEP, job.jid)

    def _begin_upload(self, job):
        job.step = STEP_UPLOADING
        self.eq.schedule(self.eq.now + self.d_up, TRANSITION_STEP, job.jid)

    # ----------------------------------------------------------- results

    def in_system(self):
        return self.generated - self.completed

    def result(self):
        return SimResult(
            n_clients=self.n_clients,
            n_containers=self.n_containers,
            horizon=self.horizon,
            warmup=self.warmup,
            generated=self.generated,
            completed=self.completed,
            waited_local=self.waited_local,
            waited_remote=self.waited_remote,
            pref_local_total=self.pref_local_total,
            pref_local_denied=self.pref_local_denied,
            qlen_samples=self.qlen_samples,
            transfer_bytes=self.state.transfer_bytes,
            transfers=self.state.transition_transfers,
            busy_s=[k.busy_s for k in self.containers],
            attempts=self.attempts,
            attempt_denials=self.attempt_denials,
            to_local_done=self.to_local_done,
            to_remote_done=self.to_remote_done,
            version_violations=self.version_violations,
            misroutes=self.broker.misroutes,
            records=self.records,
            replication=self.replication,
        )

    # --------------------------------------------------------- invariants

    def _audit(self):
        """Structural conservation checks; raises on simulator bugs."""
        pool = bound = trans = 0
        waiting = 0
        for cont in self.containers:
            if cont.session == -1:
                if cont.detaching:
                    trans += 1
                else:
                    pool += 1
            else:
                cj = self.clients[cont.session].job
                if cj is not None and cj.direction == TO_REMOTE:
                    trans += 1
                else:
                    bound += 1
            waiting += len(cont.queue) + (1 if cont.busy else 0)
        if pool + bound + trans != self.n_containers:
            raise SimulationFault(
                f"container leak: pool={pool} bound={bound} trans={trans} "
                f"total={self.n_containers}")
        if bound != self.n_bound or trans != self.n_transitioning:
            raise SimulationFault(
                f"counter drift: bound {bound} vs {self.n_bound}, "
                f"transitioning {trans} vs {self.n_transitioning}")
        waiting += len(self.shared)
        for job in self.jobs.values():
            waiting += len(job.buffer)
        if waiting != self.generated - self.completed:
            raise SimulationFault(
                f"invocation leak: in-system {waiting} vs "
                f"{self.generated - self.completed}")
