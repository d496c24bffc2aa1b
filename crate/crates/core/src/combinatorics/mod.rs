//! Permutation components and the exact second-moment machinery.

mod bounds;
mod interval_mass;
mod moments;
mod tnk;

pub use bounds::{bound_diagnostics, bound_diagnostics_to, first_column_bounded, ln_big, BoundReport};
pub use interval_mass::{c_eta_theta, c_eta_theta_with_grid, Density, IntervalMass, TabulatedDensity, GRID_POINTS};
pub use moments::{
    expected_paths, pair_term, percolation_expected, s1_s2_split, second_moment_bound, second_moment_terms,
    MomentSplit, MomentValue,
};
pub use tnk::{components, factorial, global_descents, t_convolution, t_n1, t_table, TnkTable};
