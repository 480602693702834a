from enum import Enum


class Enumerator:
    # The ExitCode class is an enumeration of the process exit statuses of the CLI.
    class ExitCode(Enum):
        Ok = 0
        Internal = 1
        Validation = 2
        Infeasible = 3

    # The Command class is an enumeration of the CLI sub-commands.
    class Command(Enum):
        Propagate = "propagate"
        Bound = "bound"
        Reach = "reach"
        Invert = "invert"
        PlanCfk = "plan-cfk"
        PlanCfm = "plan-cfm"
        VerifyFacts = "verify-facts"

    # The ConstraintKind class is an enumeration of the path-constraint shapes.
    class ConstraintKind(Enum):
        Shell = "shell"
        Keep_Out = "keep-out"
        Equality = "equality"

    # The CellVerdict class is an enumeration of feasibility-map cell classes.
    class CellVerdict(Enum):
        Feasible = 0
        Unreachable_Two_Impulse = 1
        Unreachable_Two_And_Three_Impulse = 2
        Infeasible = 3

    # The Coverage class tells how much of the polar angle a three-impulse tour visits.
    class Coverage(Enum):
        Empty = 0
        Partial = 1
        Full = 2

    # The Certification class is an enumeration of flight-time ranges certified clear.
    class Certification(Enum):
        Not_Certified = 0
        Outside_Interval = 1
        Inside_Interval = 2

    # The ConeMode class tells where the cone extents come from.
    class ConeMode(Enum):
        Measured = "measured"
        User = "user"

    # The InversionStatus class is an enumeration of reach-inversion outcomes.
    class InversionStatus(Enum):
        Solved = "solved"
        Ambiguous_Endpoint = "ambiguous-endpoint"
        Unreachable = "unreachable"

    def label(T, value):
        """Lower-case, dash separated member name used in CSV files"""
        return T(value).name.lower().replace("_", "-")
