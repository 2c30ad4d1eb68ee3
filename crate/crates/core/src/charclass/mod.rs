//! Characteristic classes from Chern-root calculus.
//!
//! Multiplicative genera are expanded into universal polynomials in the
//! elementary symmetric functions of the roots, starting from their defining
//! power series. Nothing is tabulated by hand.

mod classes;
mod genus;
mod poly;
mod series;

pub use classes::{
    a_hat_class, a_hat_from_chern, chern_character, chern_classes, chern_from_character,
    complexified_chern, pontryagin_classes, power_sums, tensor_chern, todd_class,
    total_pontryagin, TABLE_LIMIT,
};
pub use genus::{
    a_hat_polynomials, chern_from_power_sums, expand_genus, power_sums_from_chern,
    todd_identity_check, todd_identity_holds, todd_polynomials, GenusPolynomials, VariableType,
};
pub use poly::{ClassAlgebra, FormalPoly};
pub use series::UnivariateSeries;
