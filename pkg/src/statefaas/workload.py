"""Client behavior: Poisson invocation arrivals and the two-state
preference process that drives application-triggered transitions.

Each client alternates between preferring remote-state and local-state
execution. The preference follows a continuous-time two-state chain
parameterized by the target stationary local fraction and the mean local
sojourn, so any combination of switching rates can be expressed.
"""

from dataclasses import dataclass

from .kernel import ConfigurationError, exp_sample


def phase_rates(f_local, mean_local_duration):
    """Switching rates (r_remote_to_local, r_local_to_remote).

    Chosen so the stationary fraction of time preferring local equals
    f_local and the mean local sojourn equals mean_local_duration:
    r_LtoR = 1/T_L and r_RtoL = f/((1-f) T_L).
    """
    if not 0.0 <= f_local < 1.0:
        raise ConfigurationError(f"f_local must be in [0, 1), got {f_local}")
    if mean_local_duration <= 0:
        raise ConfigurationError(
            f"mean_local_duration must be positive, got {mean_local_duration}"
        )
    r_l_to_r = 1.0 / mean_local_duration
    r_r_to_l = f_local / ((1.0 - f_local) * mean_local_duration)
    return r_r_to_l, r_l_to_r


@dataclass(frozen=True)
class PhaseProcess:
    """Two-state preference chain for one client."""

    f_local: float
    mean_local_duration: float = 300.0

    @property
    def rates(self):
        return phase_rates(self.f_local, self.mean_local_duration)

    def initial_prefers_local(self, stream):
        """Stationary initial preference draw."""
        if self.f_local <= 0.0:
            return False
        return stream.bernoulli(self.f_local)

    def sojourn(self, prefers_local, stream):
        """Time until the next preference toggle from the current state."""
        r_r_to_l, r_l_to_r = self.rates
        rate = r_l_to_r if prefers_local else r_r_to_l
        if rate <= 0.0:
            return None
        return exp_sample(rate, stream)


def next_arrival(now, arrival_rate, stream):
    """Next invocation instant for an open-loop Poisson client."""
    return now + exp_sample(arrival_rate, stream)
