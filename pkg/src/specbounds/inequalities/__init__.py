"""Spectrum-level inequality and monotonicity checks."""

from .dirichlet import (c2_boundary_condition, check_C2_general, check_dirichlet_refined,
                        check_pln_bounds, dirichlet_refined_table, gap_quantities, pln_tables)
from .moments import (SweepTable, check_geometric_bound, check_moment_order, check_yang_cap,
                      geometric_bound_table_check, geometric_mean, moment_F, moment_F_minimum,
                      moment_F_minimum_golden, moment_mean_S, moment_order_table, moment_root,
                      validate_pq, yang_cap_table, yang_type_cap)
from .riesz import (check_generalized_riesz_monotone, check_ratio_bound, check_riesz_monotone,
                    check_Z_divergence, check_Z_monotone, generalized_riesz_mean, log_t_grid,
                    ratio_bound_constant, ratio_bound_sweep, riesz_mean, riesz_ratio,
                    trusted_t_grid, weighted_partition_Z, z_composite, z_decade_ratios)

__all__ = [name for name in dir() if not name.startswith("_")]
