//! Scalars and matrices over the coefficient base D (F_p or F_p[t]_(t)),
//! with a local Smith normal form and the linear algebra built on it.

mod matrix;
mod poly;
mod scalar;
mod smith;

pub use matrix::Matrix;
pub use scalar::{is_prime, Coeff, Fp, Local, MAX_PRIME};
pub use smith::{
    cokernel_invariants, in_span, intersect_spans, kernel_basis, local_smith, preimage, smith_with,
    solve, span_basis, span_contains, subquotient, CokerInvariants, Smith, Subquotient, Track,
};
