//! Finitely generated modules over the supported rings: D-structure plus generator
//! actions, with Hom, resolutions, transposes, socles and isomorphism tests.

mod hom;
mod map;
mod module;
mod ops;
mod raw;
mod resolution;

pub use hom::{hom, HomModule, HOM_VAR_BUDGET};
pub use map::ModMap;
pub use module::{Built, CoeffModule};
pub use ops::{is_isomorphic, iso_map, ColonMode, ISO_BUDGET};
pub use raw::{RawBuilt, RawSum};
pub use resolution::{free_actions, min_gens_in_free, RMat, Resolution};
