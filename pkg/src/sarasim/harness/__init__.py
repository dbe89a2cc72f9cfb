"""Scenario configuration, deployment, simulation loop, metrics and output."""

from .config import PRESETS, ScenarioConfig, load_config, preset
from .deploy import Deployment, deploy
from .metrics import MetricsSeries, coverage_fraction, lifetime
from .simulate import SimulationResult, simulate

__all__ = ["PRESETS", "ScenarioConfig", "load_config", "preset", "Deployment", "deploy",
           "MetricsSeries", "coverage_fraction", "lifetime", "SimulationResult", "simulate"]
