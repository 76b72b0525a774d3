//! Pass thresholds for the verification suites. Every numeric check reads
//! its threshold from here and the CLI can override each field. Exact checks
//! (rational arithmetic, finite groups) always compare against zero.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// `|sigma_product - sigma_eisenstein|`.
    pub sigma_cross: f64,
    /// Quasi-periodicity and modularity of sigma.
    pub sigma_laws: f64,
    /// Looijenga shift law, relative to the larger side.
    pub looijenga: f64,
    /// `|F(sigma(z1), sigma(z2)) - sigma(z1 + z2)|`.
    pub fgl_addition: f64,
    /// Every cubical-structure residual.
    pub cubical: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { sigma_cross: 1e-9, sigma_laws: 1e-9, looijenga: 1e-8, fgl_addition: 1e-6, cubical: 1e-7 }
    }
}
