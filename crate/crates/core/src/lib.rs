//! Computational core for complex-analytic equivariant elliptic cohomology:
//! q-series, modular forms, Weierstrass-type theta functions, loop-group
//! characters, equivariant Thom forms, formal group laws, cubical structures
//! and finite-group commuting-pair data.

pub mod cartan;
pub mod fgl;
pub mod finite;
pub mod loopchar;
pub mod modular;
pub mod qseries;
pub mod theta;
pub mod tolerances;
pub mod verify;
