use std::sync::Arc;

use super::ideal::{canonical_ideal, FracIdeal};
use super::ring::{AnyRing, RingHandle};
use crate::dcoeff::{kernel_basis, Coeff, Local, Matrix};
use crate::Result;

/// Basic numerical invariants of a local ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingInvariants {
    pub dim: usize,
    pub depth: usize,
    pub embdim: u64,
    pub multiplicity: u64,
    pub cm_type: u64,
    pub is_regular: bool,
    pub is_gorenstein: bool,
    pub has_minimal_multiplicity: bool,
    /// `None` in dimension 0.
    pub is_almost_gorenstein: Option<bool>,
}

/// Default budget for reduction searches.
pub const REDUCTION_BUDGET: u32 = 16;

/// λ(Soc R) of an Artinian ring.
pub fn socle_dim<T: Coeff>(ring: &RingHandle<T>) -> u64 {
    let p = ring.prime();
    let n = ring.rank();
    let mut stack = Matrix::zeros(p, 0, n);
    for a in ring.gen_actions() {
        stack = stack.vstack(a);
    }
    kernel_basis(&stack).cols() as u64
}

fn embdim<T: Coeff>(ring: &Arc<RingHandle<T>>) -> Result<u64> {
    let m = FracIdeal::maximal(ring);
    Ok(m.index_of(&m.product(&m))?)
}

pub fn artin_invariants<T: Coeff>(ring: &Arc<RingHandle<T>>) -> Result<RingInvariants> {
    let embdim = embdim(ring)?;
    let e = ring.rank() as u64;
    let r = socle_dim(ring);
    Ok(RingInvariants {
        dim: 0,
        depth: 0,
        embdim,
        multiplicity: e,
        cm_type: r,
        is_regular: embdim == 0,
        is_gorenstein: r == 1,
        has_minimal_multiplicity: e == embdim + 1,
        is_almost_gorenstein: None,
    })
}

/// Almost Gorenstein test: m ⊆ (x : ω) for a principal reduction x of ω.
pub fn is_almost_gorenstein(ring: &Arc<RingHandle<Local>>) -> Result<bool> {
    let omega = canonical_ideal(ring)?;
    let (x, _) = omega.principal_reduction(REDUCTION_BUDGET)?;
    let xr = FracIdeal::principal(ring, &x);
    Ok(xr.colon(&omega)?.contains(&FracIdeal::maximal(ring)))
}

pub fn curve_invariants(ring: &Arc<RingHandle<Local>>) -> Result<RingInvariants> {
    let embdim = embdim(ring)?;
    let m = FracIdeal::maximal(ring);
    let (x, _) = m.principal_reduction(REDUCTION_BUDGET)?;
    let xr = FracIdeal::principal(ring, &x);
    let e = xr.quotient_length()?;
    let r = xr.colon_in_r(&m)?.index_of(&xr)?;
    Ok(RingInvariants {
        dim: 1,
        depth: 1,
        embdim,
        multiplicity: e,
        cm_type: r,
        is_regular: embdim == 1,
        is_gorenstein: r == 1,
        has_minimal_multiplicity: e == embdim,
        is_almost_gorenstein: Some(is_almost_gorenstein(ring)?),
    })
}

pub fn ring_invariants(ring: &AnyRing) -> Result<RingInvariants> {
    match ring {
        AnyRing::Artin(r) => artin_invariants(r),
        AnyRing::Curve(r) => curve_invariants(r),
    }
}
