"""Closed-form solutions, singularity predicates and root continuation."""

from .branches import circle_log, continued_power, principal_power, unwrapped_log
from .burgers import (
    burgers_kink,
    burgers_rational_n2,
    n2_nonsingular_condition,
    kink_B_from_A,
    kink_denominator,
    locator_x,
    n2_bound,
    n2_pole_bound_check,
    n2_poles,
    singularity_locator,
)
from .closed_forms import (
    LogBranchCheck,
    blowup_times_1_21,
    branch_data_1_21,
    constants_1_21,
    initial_data_1_21,
    log_branch_condition,
    period_1_21,
    nonsingular_1_14a,
    nonsingular_1_25,
    nonsingular_1_26,
    denominator_roots_1_25,
    solve_1_14a,
    solve_1_21_family,
    solve_1_25,
    solve_1_26,
)
from .first_order import (
    CircleVerdict,
    FirstOrderClassification,
    blowup_time,
    classify_first_order,
    singular_datum,
    solve_1_1,
    solve_2_6,
    tau_branch_point,
)
from .roots import (
    Eq122,
    Eq123,
    RootPaths,
    implicit_period_bounds,
    quadrature_polynomial_1_22,
    rhs_coefficient_1_22,
    root_track_polynomial,
)
from .weierstrass import (
    WeierstrassParams,
    nonsingular_1_13,
    solve_1_13,
    weierstrass_p,
    weierstrass_p_prime,
)
from .residuals import derivatives, ode_residual
