//! Local rings (Artinian monomial quotients, the DVR, numerical semigroup rings)
//! and fractional-ideal arithmetic.

mod ideal;
mod invariants;
mod ring;
mod semigroup;

pub use ideal::{canonical_ideal, FracElem, FracIdeal, Valuations};
pub(crate) use ideal::lattice_index;
pub use invariants::{
    artin_invariants, curve_invariants, is_almost_gorenstein, ring_invariants, socle_dim,
    RingInvariants, REDUCTION_BUDGET,
};
pub use ring::{build_ring, AnyRing, ArtinRing, CurveRing, Family, RingHandle, RingSpec, Word};
pub use semigroup::Semigroup;
