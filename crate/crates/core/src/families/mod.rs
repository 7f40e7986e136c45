//! Halin graphs, fragments, snark families and their certificates.

mod blocks;
mod build;
mod certificate;
mod halin;

pub use blocks::{bipartite_block, decollineator_from_snark, first_path, heawood_dipole, HalinFragment};
pub use build::{
    composite_family, even_order_family, halin_poles, halin_snark, treelike, windmill, CompositeVariant, FamilyMember,
    HalinPoles, Orientation,
};
pub use certificate::{
    stationary_shapes, verify_certificate, Certificate, CertificateKind, ChainStep, PartRecord, TreeVertex,
};
pub use halin::{build_halin, HalinGraph, TreeSpec};
