from .array_validator import FloatArray, FrozenModel, IntArray, Matrix3, Vector3
from .bound_validator import (ConeBound, ConeExtents, FactCheck, FhatMatrix,
                              SphereBound, SweepRecord, TableRow)
from .constraint_validator import ConstraintVerdict, PathConstraint, Violation
from .orbit_validator import (OrbitParams, RelState, StmBlocks, Trajectory,
                              TransferLeg)
from .planner_validator import (BetaBand, CfkScenario, CfmLegReport, CfmPlan,
                                CoverageClass, FeasibilityMap, MissionLeg,
                                MissionSummary)
from .reach_validator import (ClearanceReport, Crossing, ExclusionReport,
                              InversionResult, ReachCurve, ReachSurface)
from .scenario_validator import ScenarioFile

__all__ = [
    "FloatArray",
    "FrozenModel",
    "IntArray",
    "Matrix3",
    "Vector3",
    "ConeBound",
    "ConeExtents",
    "FactCheck",
    "FhatMatrix",
    "SphereBound",
    "SweepRecord",
    "TableRow",
    "ConstraintVerdict",
    "PathConstraint",
    "Violation",
    "OrbitParams",
    "RelState",
    "StmBlocks",
    "Trajectory",
    "TransferLeg",
    "BetaBand",
    "CfkScenario",
    "CfmLegReport",
    "CfmPlan",
    "CoverageClass",
    "FeasibilityMap",
    "MissionLeg",
    "MissionSummary",
    "ClearanceReport",
    "Crossing",
    "ExclusionReport",
    "InversionResult",
    "ReachCurve",
    "ReachSurface",
    "ScenarioFile",
]
