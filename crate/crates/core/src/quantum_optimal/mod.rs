//! Optimal quantum learning strategies in the covariant Choi parameterization.

mod brute;
mod cases;
mod choi_build;
mod params;
mod regime;
mod unot;
mod xyz;

pub use brute::brute_force_optimum;
pub use cases::{
    case_fidelity, case_one_stretched, half_spin_mixture_alpha, half_spin_mixture_fidelity, half_turn_fidelity,
    spin_one_equatorial_fidelity, stretched_average_fidelity,
};
pub use choi_build::covariant_choi_build;
pub use params::{covariant_fidelity, multiplicity_bounds, tp_weights, CovariantChoiParams};
pub use regime::{delta_half, delta_one, optimal_fidelity, Problem, Regime, RegimeReport};
pub use unot::{universal_not, unot_mixture_channel, UNotMixtureChannel};
pub use xyz::{discrete_xyz_strategy, DiscreteXyz};
