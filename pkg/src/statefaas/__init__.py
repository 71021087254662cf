"""Discrete-event simulator and analytical queueing oracle for a stateful
FaaS edge platform where workers switch between remote-state (shared
pool) and local-state (dedicated container) execution."""

from .entities import FunctionType
from .kernel import ConfigurationError, EventQueue, RngStream, SimulationFault
from .policies import AdmissionOnDemand, StaticSplit, provision_search
from .queueing import (UNSTABLE, erlang_c, is_unstable, mm1_response,
                       mmc_response, scenario1_latency,
                       scenario1_optimal_split, stability_frontier)
from .simulator import Simulation

__version__ = "0.1.0"

__all__ = [
    "AdmissionOnDemand", "ConfigurationError", "EventQueue", "FunctionType",
    "RngStream", "Simulation", "SimulationFault", "StaticSplit", "UNSTABLE",
    "erlang_c", "is_unstable", "mm1_response", "mmc_response",
    "provision_search", "scenario1_latency", "scenario1_optimal_split",
    "stability_frontier",
]
