//! Exact arithmetic for cyclic group actions on simply connected 4-manifolds:
//! G-signature congruences, equivariant line and SU(2) bundle existence, and
//! equivariant instanton moduli dimensions.

pub mod action;
pub mod arith;
pub mod congruence;
pub mod cyclotomic;
pub mod error;
pub mod moduli;
pub mod series;

pub use action::{
    linear_cp2, linear_cp2_bar, linear_s4, three_cp2_bar_action, AdjointLift, FixedSphere, GroupAction, IsolatedPoint,
    LineIsotropy, PartialLineIsotropy, Su2Isotropy, Unknown, ValidationReport,
};
pub use arith::{crt_solve, mod_inverse, rational_mod, Rational, Residue};
pub use congruence::{
    check_line_bundle, check_rotation_relations, check_su2, gsignature_check, search_realizable, solve_existence,
    CongruenceReport, RelationResult, SearchParams,
};
pub use cyclotomic::CycloNum;
pub use error::{Error, Result};
pub use moduli::{
    dim_invariant_moduli, dim_involution, dim_isolated_only, dim_nonequivariant, evaluate_dimension, rho_lens,
    rho_surface, DimensionReport, RhoValue,
};
pub use series::{CoefficientRing, PowerSeries, PrimeField, Rationals};
