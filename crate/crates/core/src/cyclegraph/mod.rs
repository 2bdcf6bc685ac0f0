//! Cyclic permutations, their interval lattices, and the weighted
//! double-count machinery used to bound admissible families.

mod counting;
mod interval;
mod perm;
mod structures;
mod verify;

pub use counting::{
    double_count, double_count_capped, phi_weight, seeded_double_counts, DoubleCount,
    DOUBLE_COUNT_CAP,
};
pub use interval::{CoverEdge, ElementLabel, IntervalLattice, LatticeElement, LevelProfile};
pub use perm::CyclicPerm;
pub use structures::{
    edge_multiplicities, enumerate_xk, enumerate_yk_anchors, psi_value, psi_weight, window_edges,
    Triple, XkStructure, XkVariant, YkAnchor,
};
pub use verify::{
    audit_interval_lattice, verify_lemma1, verify_lemma2, verify_theorem9, AuditConfig,
    IntervalAudit, NamedCheck, Status, VerifierReport, DEFAULT_MAX_ELEMENTS,
};
