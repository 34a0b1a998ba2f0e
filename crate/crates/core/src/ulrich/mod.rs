//! Multiplicities, Ulrich modules, blow-up views, add-membership and the minimal
//! MCM approximation of the residue field in dimension one.

mod add;
mod approx;
mod blowup;
mod mult;
mod sample;

pub use add::{in_add, AddMembership};
pub use approx::{min_mcm_approx_k, mintype_sequence};
pub use blowup::{
    blowup_ring, ext1_over_blowup, ext1_ul, ext1_ul_classes, restrict_scalars, restrict_to_blowup, view_over, BlowupExt, UlExt,
};
pub use mult::{
    elem_times, frac_elem_in_r, in_cm, is_ulrich, module_dim, multiplicity, phi_i, reduction_in_r,
    MultiplicityReport, UlrichTest, HILBERT_MAX_N,
};
pub use sample::ul_sample;
