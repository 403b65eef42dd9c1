//! Combinatorics and finite-field linear algebra for dual pairs of special
//! nilpotent orbits in types B and C.
//!
//! The crate is organized in three layers.
//!
//! **Partition combinatorics.** [`partition`] implements the two families of
//! orbit partitions (odd-orthogonal and symplectic), membership and
//! specialness tests, transposes, dominance, and the collapse maps;
//! [`orbit`] adds the duality map between the families, the decomposition of
//! a type-B partition into blocks, the blockwise local duals, the invariants
//! `c` (pair-block count) and `beta` (even-entry count), dimension and
//! moduli-count bookkeeping, and two-variable labels for dual pairs;
//! [`richardson`] covers parabolic Levi data: induced orbits, index sets and
//! their power-of-two polarization degrees, the dual Levi map, the seesaw
//! identity, and the two-group quotients ([`f2`] provides the bitmask
//! linear algebra they run on).
//!
//! **Truncated-series models.** [`series`] implements matrices and monic
//! polynomials over truncated power series with prime-field coefficients
//! ([`field`], [`linalg`]); [`local`] samples generic characteristic data
//! for a fixed orbit, checks the genericity assumptions (Eisenstein factors,
//! resultant orders, coefficient-order bounds), and decides splitting of
//! torsion modules and degeneracy orders of residue-pairing Gram matrices.
//!
//! **Counting models.** [`isotropic`] builds the residue-pairing model
//! attached to a special type-B partition and counts its maximal isotropic,
//! flag-compatible subspaces both structurally and by brute force;
//! [`weil`] realizes double covers of a punctured curve inside an
//! `F_2`-vector space with its intersection pairing and verifies that the
//! covers attached to a dual pair of parabolics annihilate each other.

pub mod error;
pub mod f2;
pub mod field;
pub mod isotropic;
pub mod linalg;
pub mod local;
pub mod orbit;
pub mod partition;
pub mod richardson;
pub mod series;
pub mod weil;

pub use error::{Error, Result};
pub use field::{Field, Fp, Fp2};
pub use isotropic::{
    brute_force_count, build_residue_model, build_residue_model_in, count_check,
    structural_count, CountCheck, FieldKind, IsotropicSolution, ResidueModel,
};
pub use local::{
    assumption_check, degeneracy_order, pair_gram, residue_functionals,
    sample_generic_char, self_dual_gram, splitting_criterion, AssumptionReport,
    LocalCharData, SigmaClass,
};
pub use orbit::{
    block_decompose, dimension_report, eta_sequence, kl_label, orbit_dimension,
    orbit_invariants, ramification_coefficients, rank_of, Block, BlockKind, DimensionReport,
    KlLabel, OrbitInvariants, RamificationEntry,
};
pub use partition::{
    collapse, enumerate_partitions, is_member, is_special, springer_dual,
    EnumerateFilter, OrbitType, Partition,
};
pub use richardson::{
    component_groups, dual_levi, enumerate_polarizations, richardson_data,
    seesaw_check, ComponentGroupData, LeviType, PolarizationData, SeesawReport,
};
pub use series::{CharData, SeriesMatrix, SeriesPoly, SeriesScalar};
pub use weil::{
    hitchin_instance, weil_space, CoverSpec, HitchinWeilInstance, PointLabel,
    WeilSpace, WeilVerdicts,
};
