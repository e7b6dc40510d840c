//! Subgroup spaces of profinite groups presented as towers of finite groups.
//!
//! The crate computes finite levels of the space of closed subgroups `S(G)`
//! and of closed normal subgroups `N(G)`, decides isolation of threads,
//! and classifies the limit space as finite, countable of type `ω^k·n+1`,
//! a Cantor set, or uncountable and not perfect.

pub mod arith;
pub mod bitset;
pub mod budget;
pub mod classify;
pub mod cli;
pub mod error;
pub mod group;
pub mod lattice;
pub mod ordinal;
pub mod subspace;
pub mod tower;

pub use budget::Budget;
pub use classify::{classify_space, perfectness, tcount_report, Classification, Perfectness, SpaceKind, Verdict};
pub use error::{Error, Result};
pub use group::{
    direct_product, hom_compose, hom_image, hom_preimage, make_cyclic, make_dihedral, quotient, semidirect,
    CayleyTable, FiniteGroup, GroupRef, Homomorphism,
};
pub use lattice::{
    all_subgroups, center, closure, complements, derived_subgroup, frattini, hom_count, maximal_normal_subgroups,
    maximal_subgroups, normal_subgroups, psi, LatticeReport, Subgroup,
};
pub use ordinal::{ConcreteSpace, OrdinalSignature};
pub use subspace::{ball_class, fiber, growth_sequence, isolation_verdicts, level_space, LevelSpace, ThreadVerdict, Tri};
pub use tower::{Certificates, SupernaturalOrder, Tower};
