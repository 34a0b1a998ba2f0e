//! Subfunctors of Ext¹ cut out by numerical functions, by Ulrich middles and by
//! half-exact functors, plus an empirical checker for the exact-structure axioms.

mod axioms;
mod numfn;
mod sample;
mod sub;

pub use axioms::{
    check_exact_axioms, check_exact_axioms_on, composite_deflation, identity_sequences, Admissible, AxiomReport,
    Violation,
};
pub use numfn::{et_value, stable_tail, NumFn, ET_MAX_N, STABLE_WINDOW};
pub use sample::{sample_modules, SampleSpec, Sampled};
pub use sub::{
    ext1_mu_lattice, ext1_sub, ext1_subset, hom_exactness_subfunctor, Certificate, HomExactness, HomSide, SubExt, CERT_PAIR_BUDGET,
};
