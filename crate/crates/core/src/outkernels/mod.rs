//! Dehn twists, extensions of vertex automorphisms, and the kernels of the
//! restriction maps.

pub mod autom;
pub mod labelling;
pub mod sigma;
pub mod tau;

use serde::Serialize;

pub use autom::{extend_automorphism, generators, make_dehn_twist, make_dehn_twist_at, GeneratorImages, GogAutomorphism};
pub use labelling::{chi, labelling_closure, labellings_relation, LabelContext, Labelling, LabellingRelation};
pub use sigma::{kernel_sigma_structure, rational_rank, KernelSigmaReport};
pub use tau::{kernel_tau_structure, mapping_torus_term, KernelTauReport, TauCase};

/// Coarse size of a subgroup of the fundamental group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SizeType {
    Finite(usize),
    VirtuallyZ,
    NonElementary,
}
