"""
    Common messages used throughout the application
"""


# The Messages class is a container for storing and managing messages.
class Messages:
    # ERROR_
    ERROR_INTERNAL = "Internal error! Please check the log output for details."
    ERROR_DT_OUT_OF_RANGE = "Flight time {dt} s is outside [0, pi/kappa = {limit} s); every inter-impulse flight time must be shorter than pi/kappa."
    ERROR_DT_NOT_POSITIVE = "Flight time {dt} s must lie strictly inside (0, pi/kappa = {limit} s)."
    ERROR_SINGULAR_TRANSFER = "Transfer time {dt} s is outside the conditioning window [{lower} s, {upper} s]; F_rv is too close to singular."
    ERROR_ILL_CONDITIONED = "F_rv({dt} s) condition estimate {cond:.3e} exceeds {limit:.1e}."
    ERROR_NOT_SYMMETRIC = "Matrix is not symmetric (max asymmetry {asym:.3e})."
    ERROR_NOT_SQUARE = "Matrix must be square, got shape {shape}."
    ERROR_EMPTY_LIST = "At least one radius is required."
    ERROR_NON_POSITIVE_RADIUS = "All radii must be positive."
    ERROR_BAD_AXIS = "Cone axis must be a unit vector with nonnegative components, got {axis}."
    ERROR_BAD_RHO_MINUS = "rho_minus must be positive, got {value}."
    ERROR_BAD_RHO_PLUS = "rho_plus must be componentwise nonnegative, got {value}."
    ERROR_ALL_ZERO = "rho_plus has no positive component."
    ERROR_BAD_GRID = "Every flight time of the grid must exceed t = {t} s and stay below pi/kappa = {limit} s."
    ERROR_BAD_RESOLUTION = "Grid resolutions must be at least 2."
    ERROR_NO_WITNESS = "Witness point {witness} lies inside the constrained region; no clearance argument is possible."
    ERROR_BOUNDARY_NOT_CLEAR = "Boundary trajectory with flight time {dt} s intersects the constrained region."
    ERROR_BAD_WINDOW = "Flight-time interval must satisfy dt_a < dt_b, got [{dt_a}, {dt_b}]."
    ERROR_INSUFFICIENT_SAMPLING = "Trajectory sample spacing {spacing} s exceeds the declared resolution {resolution} s."
    ERROR_EQUALITY_INSTANT_MISSING = "No trajectory sample at the equality instant t = {t} s."
    ERROR_ENDPOINT_INSIDE = "Leg endpoint {point} lies inside the keep-out sphere."
    ERROR_CHAIN_BROKEN = "Leg {index} starts at {start} but the previous leg ends at {end}."
    ERROR_LEG_MISSES_TARGET = "Leg {index} lands {miss:.3e} km away from its end point {end}; its impulse does not match its flight time."
    ERROR_CELL_NOT_FEASIBLE = "Cell ({i}, {j}) is not feasible."
    ERROR_UNREACHABLE = "Target {target} is not reachable (best residual {residual:.3e} km)."
    ERROR_TOO_FEW_SAMPLES = "At least two samples are required."
    ERROR_TOO_FEW_POSITIONS = "A tour needs at least two impulse positions."
    ERROR_NO_LEGS = "A mission needs at least one leg."
    ERROR_SCENARIO_READ = "Unable to read scenario file {path}: {reason}"
    ERROR_SCENARIO_OVERRIDE = "Override '{override}' must have the form key=value."
    ERROR_SCENARIO_MODE = "Scenario planner mode '{mode}' does not match sub-command '{command}'."
    ERROR_SCENARIO_ORBIT = "Exactly one of a_ts, altitude or kappa must be given in the orbit block."
    ERROR_SCENARIO_RADII = "Constraint radii must satisfy 0 <= rho_inner <= rho_outer."
    ERROR_SCENARIO_BLOCK = "Scenario is missing the '{block}' block required by '{command}'."
    ERROR_WRITE_FILE = "Unable to write {path}: {reason}"
    ERROR_CFM_KEEP_OUT = "plan-cfm needs a keep-out sphere: set planner.cfm.keep_out_radius or list one constraint."

    # OK_
    OK_RUN = "Finished '{command}'; wrote {count} file(s) to {directory}."
    OK_CERTIFIED = "Tour certified collision-free for every flight time."
    OK_FACTS = "All fact checks passed."

    # NOT_
    NOT_CERTIFIED = "Tour is not certified: {legs} leg(s) fail the boundary test."
    NOT_FEASIBLE = "No feasible cell in the map."
    NOT_FACTS = "{count} fact check(s) failed."
    NOT_SATISFIED = "{count} path constraint(s) violated."
    NOT_REACHABLE = "{count} target(s) unreachable."

    # WARN_
    WARN_STALE_FILES = "Output directory holds files not written by this run: {files}"
