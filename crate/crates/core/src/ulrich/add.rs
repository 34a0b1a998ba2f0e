use std::sync::Arc;

use crate::dcoeff::{Coeff, Matrix};
use crate::ext::right_inverse;
use crate::modules::{hom, CoeffModule, ModMap};
use crate::Result;

/// Outcome of an add(X) membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AddMembership {
    pub member: bool,
    /// n for the universal map X^n → M (n = μ(Hom(X, M))).
    pub summands: usize,
}

/// M ∈ add(X): the universal map X^n → M, one summand per minimal generator of
/// Hom(X, M), is split surjective. Every split surjection X^k → M factors through it.
pub fn in_add<T: Coeff>(m: &Arc<CoeffModule<T>>, x: &Arc<CoeffModule<T>>) -> Result<AddMembership> {
    let ring = m.ring();
    if m.is_zero() {
        return Ok(AddMembership {
            member: true,
            summands: 0,
        });
    }
    let h = hom(x, m)?;
    let gens = h.module.min_generators();
    let n = gens.cols();
    if n == 0 {
        return Ok(AddMembership {
            member: false,
            summands: 0,
        });
    }
    let (xn, _, proj) = CoeffModule::direct_sum_with_maps(ring, &vec![x.clone(); n]);
    let mut pi = Matrix::zeros(m.prime(), m.ngens(), xn.ngens());
    for (k, pk) in proj.iter().enumerate() {
        pi = pi.add(&h.to_map(&gens.col(k)).mat.mul(pk));
    }
    let p = ModMap::new_unchecked(&xn, m, m.reduce_matrix(&pi));
    let member = p.is_surjective() && right_inverse(&p)?.is_some();
    Ok(AddMembership { member, summands: n })
}
