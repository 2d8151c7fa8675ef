//! Exact evaluation of generalised polynomials over real number fields,
//! discrete calculus, weak multiplication, and bounded first-order checks of
//! the definability constructions built on them.

pub mod numeric;
pub mod genpoly;
pub mod presets;
pub mod search;
pub mod fo;
pub mod weakmult;
pub mod bohr;
pub mod suite;
