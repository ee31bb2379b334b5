"""Link-level simulator for UAV decode-and-forward relays serving shadowed ships."""
from .geometry import Box3, LosState, Vec3
from .channel import ChannelParams
from .energy import EnergyParams
from .positioning import Architecture
from .scenario import ScenarioConfig, default_config, monte_carlo, run_scenario

__all__ = [
    "Architecture", "Box3", "ChannelParams", "EnergyParams", "LosState", "ScenarioConfig",
    "Vec3", "default_config", "monte_carlo", "run_scenario",
]
__version__ = "0.1.0"
