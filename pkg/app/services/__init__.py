from . import constraint_service as ConstraintService
from . import dynamics_service as DynamicsService
from . import planner_service as PlannerService
from . import reachability_service as ReachabilityService
from . import scenario_service as ScenarioService
from . import spectral_service as SpectralService

__all__ = [
    "ConstraintService",
    "DynamicsService",
    "PlannerService",
    "ReachabilityService",
    "ScenarioService",
    "SpectralService",
]
