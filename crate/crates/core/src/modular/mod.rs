//! The modular group, its congruence quotients and random covers.

pub mod cover;
pub mod group;
pub mod quotient;
pub mod reduce;

pub use cover::{random_cover, RandomCover};
pub use group::{closed_form_order, coset_index, CosetModQ, CosetTable, GroupElement};
pub use quotient::{
    injectivity_radius, max_base_distance, quotient_distance, sample_fundamental_domain, sample_uniform_quotient,
    truncated_fraction, Injectivity, QuotientGeometry, QuotientPoint, MODULAR_AREA,
};
pub use reduce::{in_fundamental_domain, reduce_fundamental};
