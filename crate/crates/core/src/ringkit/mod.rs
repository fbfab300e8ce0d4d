//! Generic fusion-ring algebra: group rings, discriminant forms, monodromy
//! gradings and simple current extensions of Grothendieck rings.

pub mod examples;
mod extension;
mod iso;
mod lattice;
mod ring;

pub use extension::{
    deextend, extend, monodromy_decomposition, verify_round_trips, Extension, ExtensionDatum, RoundTripReport,
    SimpleCurrent,
};
pub use iso::{count_isomorphisms, find_isomorphism};
pub use lattice::{group_ring, DiscriminantForm};
pub use ring::{FusionRing, FUSION_RING_SCHEMA};
