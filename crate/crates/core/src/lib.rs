//! Fusion rules of W-algebras of type A at subregular and principal levels.

pub mod error;
pub mod fusion;
pub mod levelrank;
pub mod qchar;
pub mod rational;
pub mod ringkit;
pub mod sicoh;
pub mod rootdata;
pub mod verify;
pub mod walg;

pub use error::{Error, Result};
pub use ringkit::FusionRing;
pub use rootdata::{AffineWeight, FiniteWeight, YoungDiagram};
pub use walg::{Family, WModel, WModuleLabel};
