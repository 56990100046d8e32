//! Symmetric-group representations: partitions, skew shapes, standard
//! tableaux, Young's orthogonal form and zeta functions.

mod family;
mod module;
mod partition;
mod zeta;

pub use family::{dim_polynomial, DimPolynomial, FamilyShape, Growth};
pub use module::{
    perm_action, perm_action_seminormal, skew_dim, skew_tableaux, yor_matrix, Content, Diagram,
    SkewModule, Tableau,
};
pub use partition::{dim, dim_u128, partitions, Partition, SkewShape};
pub use zeta::{truncation_tail, zeta_exact, zeta_inv_poly, zeta_poly};
