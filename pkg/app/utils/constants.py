# Output file names and their fixed CSV schemas. Units are part of every column name.

TRAJECTORY_FILE = "trajectory.csv"
TRAJECTORY_COLUMNS = ["t_s", "x_km", "y_km", "z_km"]

STATES_FILE = "states.csv"
STATES_COLUMNS = ["t_s", "x_km", "y_km", "z_km", "vx_km_s", "vy_km_s", "vz_km_s"]

LEGS_FILE = "legs.csv"
LEGS_COLUMNS = [
    "leg", "dt_s", "dvx_km_s", "dvy_km_s", "dvz_km_s", "dv_km_s",
    "sigma", "delta_km", "max_sampled_km",
]

CONSTRAINTS_FILE = "constraint_verdicts.csv"
CONSTRAINTS_COLUMNS = ["constraint", "kind", "satisfied", "min_margin_km", "violation_t_s"]

SPHERE_BOUNDS_FILE = "sphere_bounds.csv"
SPHERE_BOUNDS_COLUMNS = ["leg", "dt_s", "sigma", "delta_km", "max_sampled_km"]

CONE_BOUNDS_FILE = "cone_bounds.csv"
CONE_BOUNDS_COLUMNS = [
    "leg", "mode", "e_x", "e_y", "e_z", "rho_minus_km",
    "rho_plus_x_km", "rho_plus_y_km", "rho_plus_z_km", "c_theta", "max_abs_cos_theta",
]

SIGMA_CURVE_FILE = "sigma_curve.csv"
SIGMA_CURVE_COLUMNS = ["dt_s", "sigma"]

MAX_REACH_FILE = "max_reach_sweep.csv"
MAX_REACH_COLUMNS = ["r1_km", "t2_fraction", "max_reached_km", "delta_bound_km"]

REACH_CURVES_FILE = "reach_curves.csv"
REACH_CURVES_COLUMNS = ["t_s", "dt_s", "x_km", "y_km", "z_km"]

REACH_SURFACE_FILE = "reach_surface.csv"
REACH_SURFACE_COLUMNS = ["dt_s", "t_s", "x_km", "y_km", "z_km"]

CLEARANCE_FILE = "clearance.csv"
CLEARANCE_COLUMNS = [
    "constraint", "clear", "min_boundary_distance_km", "crossings",
    "t_spacing_s", "dt_spacing_s", "samples",
]

INVERSION_FILE = "inversion.csv"
INVERSION_COLUMNS = ["target", "x_km", "y_km", "z_km", "status", "t_s", "dt_s", "residual_km"]

CFK_TWO_IMPULSE_FILE = "cfk_two_impulse_map.csv"
CFK_TWO_IMPULSE_COLUMNS = ["beta_deg", "t_s", "verdict", "margin_km"]

CFK_THREE_IMPULSE_FILE = "cfk_three_impulse_map.csv"
CFK_THREE_IMPULSE_COLUMNS = ["beta_deg", "t_s", "verdict", "coverage", "witness_t2_s", "margin_km"]

UNREACHABLE_BANDS_FILE = "unreachable_bands.csv"
UNREACHABLE_BANDS_COLUMNS = ["n_impulses", "beta_start_deg", "beta_end_deg", "cells"]

COVERAGE_CLASSES_FILE = "coverage_classes.csv"
COVERAGE_CLASSES_COLUMNS = ["coverage", "dt_min_s", "dt_max_s", "cells"]

CFM_LEGS_FILE = "cfm_legs.csv"
CFM_LEGS_COLUMNS = [
    "leg", "x_i_km", "y_i_km", "z_i_km", "x_j_km", "y_j_km", "z_j_km",
    "segment_margin_km", "limit_margin_km", "certified",
]

CFM_STRESS_FILE = "cfm_stress.csv"
CFM_STRESS_COLUMNS = ["case", "min_margin_km"]

FACTS_FILE = "facts.csv"
FACTS_COLUMNS = ["check", "asserted", "passed", "value", "tolerance", "detail"]
