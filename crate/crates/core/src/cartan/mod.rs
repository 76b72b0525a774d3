//! Torus-equivariant differential forms on `R^{2n}` in the Cartan model.
//!
//! Each term is a rational (or q-series) coefficient times a formal power of
//! `pi`, a power of `beta` (degree -2), a monomial in the Lie variables
//! `z_j` (degree 0), a coordinate monomial, a Gaussian `e^{-g pi r_j^2}` per
//! plane and an exterior monomial. The differential is
//! `Q = d - beta^{-1} i_X` with `X = sum_j z_j V_j`.

mod form;
mod s2;
mod thom;

pub use form::{gaussian_moment, CartanConvention, CartanError, EqForm, LieKey, LieSeries, TermKey};
pub use s2::{s2_section_check, S2Check, S2Form, S2Key, S2Section};
pub use thom::{elliptic_thom_form, elliptic_thom_form_spin, mq_thom_form, plane_u, sigma_w_series_shifted, ThomGroup};
