//! Exact phases in Q/Z, cyclotomic numbers and closed forms `r·√m·ζ₈ˢ`.

mod cyclo;
mod eighth;
mod phase;
mod rootsum;

pub use cyclo::{cyclotomic_polynomial, field_degree, Coefficient, CycloValue};
pub use eighth::{recognize_eighthroot, sqrt_cyclo, EighthRootForm};
pub use phase::{common_denominator, parse_fraction, parse_reduced_fraction, PhaseQZ};
pub use rootsum::RootSum;
