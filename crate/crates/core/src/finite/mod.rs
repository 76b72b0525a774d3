//! Finite-group data for elliptic cohomology over a point: commuting pairs,
//! their conjugation and `SL2(Z)` orbits, and Freed-Quinn line bundles from
//! 3-cocycles. U(1) values are exact turn fractions.

mod cocycle;
mod group;
mod orbits;
mod sl2;

pub use cocycle::{
    coboundary_check, cochain_torsion, fq_cocycle, fq_cocycle_checked, fq_descent_check, random_coboundary, turns_to_complex, zn_cocycle,
    CoboundaryReport, Cocycle3, DescentReport, VerifiedCocycle,
};
pub use group::FiniteGroup;
pub use orbits::{commuting_pairs, conj_act, devoto_report, orbit_decomposition, sl2_act, sl2z_act, Action, CommutingPair, Orbit, OrbitReport, Sl2Mod, Stabilizer};
pub use sl2::Sl2Z;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("cochain has order {cochain}, group has order {group}")]
    OrderMismatch { cochain: usize, group: usize },
    #[error("not a cocycle: coboundary is nontrivial at {0:?}")]
    NotCocycle([usize; 4]),
    #[error("pair {0:?} does not commute")]
    NotCommuting(CommutingPair),
    #[error("{0}")]
    Invalid(String),
}

/// Built-in corpus used by the test suite and the CLI.
pub fn builtin_group(name: &str) -> Option<FiniteGroup> {
    let lower = name.to_ascii_lowercase();
    if let Some(n) = lower.strip_prefix('z').and_then(|s| s.parse::<usize>().ok()) {
        return (n >= 1).then(|| FiniteGroup::cyclic(n));
    }
    if let Some(m) = lower.strip_prefix('d').and_then(|s| s.parse::<usize>().ok()) {
        return (m >= 1).then(|| FiniteGroup::dihedral(m));
    }
    match lower.as_str() {
        "trivial" => Some(FiniteGroup::trivial()),
        "s3" => Some(FiniteGroup::symmetric(3)),
        "s4" => Some(FiniteGroup::symmetric(4)),
        "a4" => Some(FiniteGroup::alternating4()),
        "q8" => Some(FiniteGroup::quaternion()),
        "z2xz2" | "v4" => Some(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))),
        "z2xz6" => Some(FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(6))),
        _ => None,
    }
}
