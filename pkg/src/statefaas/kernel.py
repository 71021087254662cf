"""Discrete-event simulation kernel: virtual clock, ordered event queue,
and reproducible per-entity random-number streams."""

import heapq

import numpy as np

INF = float("inf")

# Event kinds
INVOCATION_ARRIVAL = 0
SERVICE_COMPLETION = 1
PHASE_CHANGE = 2
TRANSITION_STEP = 3
MEASUREMENT_TICK = 4
HORIZON = 5

# Stream kinds (first component of a stream id)
STREAM_ARRIVAL = 0
STREAM_SERVICE = 1
STREAM_PHASE = 2
STREAM_MISC = 3

_BUF = 4096


class SimulationFault(RuntimeError):
    """Internal inconsistency (e.g. scheduling in the past); aborts the replication."""


class ConfigurationError(ValueError):
    """Invalid user-supplied parameter."""


class RngStream:
    """Independent random stream keyed by (master_seed, salt, kind, entity id).

    Backed by PCG64 seeded through numpy's SeedSequence, so streams with
    different ids are statistically independent and fully reproducible.
    Uniform draws are buffered in chunks. The exponential view of the
    chunk is consumed through a plain list iterator (`eit`); uniform
    draws use the index `i`, and the two cursors advance together so a
    stream can mix both kinds of draws.
    """

    __slots__ = ("stream_id", "_gen", "buf", "ebuf", "eit", "i")

    def __init__(self, master_seed, kind, entity_id, salt=0):
        self.stream_id = (kind, entity_id)
        ss = np.random.SeedSequence((master_seed, salt, kind, entity_id))
        self._gen = np.random.Generator(np.random.PCG64(ss))
        self.buf = []
        self.ebuf = []
        self.eit = iter(())
        self.i = 0

    def refill(self):
        raw = self._gen.random(_BUF)
        self.buf = raw.tolist()
        # unit-rate exponential view of the same chunk, so the hot loop
        # pays one vectorized log per 4096 draws
        self.ebuf = (-np.log(1.0 - raw)).tolist()
        self.eit = iter(self.ebuf)
        self.i = 0
        return self.buf

    def uniform01(self):
        """Uniform draw in (0, 1]."""
        i = self.i
        buf = self.buf
        if i >= len(buf):
            buf = self.refill()
            i = 0
        self.i = i + 1
        next(self.eit, None)
        return 1.0 - buf[i]

    def exponential(self, rate):
        """Exponential draw with the given rate, by inverse transform."""
        # ebuf values are nonnegative, so a negative default flags an
        # exhausted chunk
        v = next(self.eit, -1.0)
        if v < 0.0:
            self.refill()
            v = next(self.eit)
        self.i += 1
        return v * (1.0 / rate)

    def bernoulli(self, p):
        return self.uniform01() <= p

    def randint(self, n):
        """Integer uniform in [0, n)."""
        return min(int(self.uniform01() * n), n - 1)


def exp_sample(rate, stream):
    """Inverse-transform exponential sample: -ln(u)/rate for u in (0, 1]."""
    if rate <= 0:
        raise ConfigurationError(f"exponential rate must be positive, got {rate}")
    return stream.exponential(rate)


class EventQueue:
    """Time-ordered event queue with a deterministic insertion-sequence tie-break.

    Events are (fire_at, sequence, kind, payload) tuples; equal fire_at
    resolves by ascending sequence, so a run is a pure function of the
    schedule() call order and the configured streams.
    """

    def __init__(self):
        self.now = 0.0
        self._heap = []
        self._seq = 0
        self._cancelled = set()

    def __len__(self):
        return len(self._heap)

    def schedule(self, at, kind, payload=0):
        """Enqueue an event; returns a handle usable with cancel()."""
        if at < self.now:
            raise SimulationFault(
                f"event scheduled in the past: at={at} < now={self.now}"
            )
        seq = self._seq
        self._seq = seq + 1
        heapq.heappush(self._heap, (at, seq, kind, payload))
        return seq

    def cancel(self, handle):
        self._cancelled.add(handle)

    def run_until(self, horizon, handlers):
        """Process all events with fire_at <= horizon, in order.

        `handlers` is indexable by event kind; each handler is called with
        the event payload. Returns the number of events processed, and
        leaves the clock at `horizon` (or at the last event when horizon
        is infinite).
        """
        if horizon < self.now:
            raise SimulationFault(f"horizon {horizon} < now {self.now}")
        heap = self._heap
        cancelled = self._cancelled
        pop = heapq.heappop
        count = 0
        while heap:
            if heap[0][0] > horizon:
                break
            t, seq, kind, payload = pop(heap)
            if cancelled and seq in cancelled:
                cancelled.discard(seq)
                continue
            self.now = t
            handlers[kind](payload)
            count += 1
        if horizon != INF and horizon > self.now:
            self.now = horizon
        return count
