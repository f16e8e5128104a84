"""Coordinated transmit/receive beamforming on the MIMO interference channel."""

from . import algorithms, metrics, network, numerics, pareto, strategies
from .algorithms import ALGORITHMS, AlgorithmSettings, initialize_profile
from .exceptions import CobeamError, ConfigError, DegenerateInputError, DimensionError, InvalidInputError
from .metrics import ia_residual, sum_rate, total_leakage
from .network import ChannelSet, ScenarioConfig, realize_channels
from .strategies import BeamformerProfile

__version__ = "0.1.0"

__all__ = [
    "algorithms",
    "metrics",
    "network",
    "numerics",
    "pareto",
    "strategies",
    "ALGORITHMS",
    "AlgorithmSettings",
    "initialize_profile",
    "CobeamError",
    "ConfigError",
    "DegenerateInputError",
    "DimensionError",
    "InvalidInputError",
    "ia_residual",
    "sum_rate",
    "total_leakage",
    "ChannelSet",
    "ScenarioConfig",
    "realize_channels",
    "BeamformerProfile",
]
