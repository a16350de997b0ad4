"""Packet-level simulator and analytic overhead model for proactive
wireless multi-hop routing protocols (DSDV, FSR, OLSR)."""

from .config import ScenarioConfig, load_config
from .engine import Simulation
from .experiments import ResultRow, run_scenario, sweep
from .overhead import AnalyticParams

__all__ = [
    "AnalyticParams",
    "ResultRow",
    "ScenarioConfig",
    "Simulation",
    "load_config",
    "run_scenario",
    "sweep",
]
