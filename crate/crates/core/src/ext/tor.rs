use std::sync::Arc;

use crate::dcoeff::{preimage, span_basis, Coeff, Matrix};
use crate::modules::{CoeffModule, RMat};
use crate::rings::FracIdeal;
use crate::{Error, Result};

/// Tor_j(M, Q) as a module: homology of F_• ⊗ Q for the minimal resolution of M.
pub fn tor<T: Coeff>(m: &Arc<CoeffModule<T>>, q: &Arc<CoeffModule<T>>, j: usize) -> Arc<CoeffModule<T>> {
    let ring = m.ring();
    let p = m.prime();
    let res = m.resolution(j + 1);
    let n = q.ngens();
    let tensor = |d: &RMat<T>| {
        let mut out = Matrix::zeros(p, d.rows * n, d.cols * n);
        for a in 0..d.rows {
            for b in 0..d.cols {
                out.set_block(a * n, b * n, &q.elem_action(d.get(a, b)));
            }
        }
        out
    };
    let rel = |b: usize| {
        let r = q.relations();
        Matrix::block_diag(p, &vec![&r; b])
    };
    let bj = res.betti[j];
    let dim = bj * n;
    let span = |a: Matrix<T>| if a.cols() == 0 { Matrix::zeros(p, dim, 0) } else { span_basis(&a) };
    let ker = if j == 0 {
        Matrix::identity(p, dim)
    } else {
        preimage(&tensor(&res.diffs[j - 1]), &rel(res.betti[j - 1]))
    };
    let ker = span(ker.hstack(&rel(bj)));
    let im = span(tensor(&res.diffs[j]).hstack(&rel(bj)));
    let acts: Vec<Matrix<T>> = q
        .actions()
        .iter()
        .map(|a| Matrix::block_diag(p, &vec![a; bj]))
        .collect();
    CoeffModule::from_subquotient(ring, &ker, &im, |g, v| acts[g].mul_vec(v)).module
}

/// Tor_1(M, R/J); InfiniteLength when the result is not of finite length.
pub fn tor1<T: Coeff>(m: &Arc<CoeffModule<T>>, j: &FracIdeal<T>) -> Result<Arc<CoeffModule<T>>> {
    let q = CoeffModule::from_quotient(j)?;
    let t = tor(m, &q, 1);
    if !T::IS_FIELD && t.free_rank() > 0 {
        return Err(Error::InfiniteLength("Tor_1 has positive rank".into()));
    }
    Ok(t)
}
