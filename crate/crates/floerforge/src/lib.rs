//! Exact-arithmetic tooling for bifiltered chain complexes of the kind that
//! arise as link Floer homology of two-component links: validation,
//! reduction, decomposition into the five standard summand families,
//! decategorification to Alexander/Conway polynomials, structural
//! constraint checking, candidate search, and Khovanov-side rank
//! arithmetic.

pub mod botany;
pub mod catalog;
pub mod complexes;
pub mod constraints;
pub mod decomposition;
pub mod exactalg;
pub mod invariants;
pub mod jsonio;
pub mod khovanov;
pub mod rng;
