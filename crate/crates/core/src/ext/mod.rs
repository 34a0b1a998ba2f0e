//! Yoneda Ext: presentations from minimal resolutions, middle objects, classification
//! of extensions, Baer sums, scalar actions, pushouts and pullbacks, and Tor.

mod laws;
mod presentation;
mod ses;
mod tor;

pub use laws::{engine_laws, test_scalars, LawReport};
pub use presentation::{ext1, ext_module, hom_free_map, ClassIter, ExtClass, ExtPresentation, ENUM_BUDGET};
pub use ses::{
    ext_map_contravariant, ext_map_covariant, hom_post, hom_pre, long_exact_defects, pullback_seq, pushout_seq,
    right_inverse, ses_direct_sum, Ses,
};
pub use tor::{tor, tor1};
