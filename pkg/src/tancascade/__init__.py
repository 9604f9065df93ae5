"""Numerics for the cycle-doubling / cycle-merging cascade of T_t(z) = i t tan z."""

from .attractor import CantorLevel, CantorSystem, build_levels, orbit_constants, verify_system
from .cascade import CascadeTable, cascade_table, estimate_t_infinity, solve_alpha, solve_beta
from .cycles import (
    Cycle,
    ParabolicFix,
    classify,
    count_distinct_cycles,
    find_attracting_cycle,
    locate_parabolic,
    multiplier,
    refine_cycle_newton,
)
from .render import (
    Raster,
    RenderConfig,
    read_ppm,
    render_orbit_diagram,
    render_parameter_plane,
    write_ppm,
)
from .renorm import RenormLevel, c_value, is_renormalizable, prepoles, renorm_eval
from .tanmap import (
    MapParams,
    Side,
    SidedReal,
    eval_F_partials,
    eval_f,
    eval_f_prime,
    eval_T,
    orbit,
    schwarzian,
)
from .transversal import (
    OrbitSetP,
    TransferMatrix,
    build_orbit_P,
    certificate,
    certificate_ok,
    phi_prime,
    poly_P,
    spectral_radius,
    transfer_matrix,
)

__version__ = "0.1.0"
