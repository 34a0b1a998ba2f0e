use std::sync::Arc;

use super::module::CoeffModule;
use crate::dcoeff::{span_basis, Coeff, Matrix, Subquotient};
use crate::rings::RingHandle;

/// A direct sum of canonical modules kept in concatenated ("raw") coordinates, used
/// to build quotients and submodules of sums without renormalizing the summands.
pub struct RawSum<T> {
    ring: Arc<RingHandle<T>>,
    parts: Vec<Arc<CoeffModule<T>>>,
    offs: Vec<usize>,
    dim: usize,
}

/// A module built inside a raw sum, with its embedding data.
pub struct RawBuilt<T> {
    pub module: Arc<CoeffModule<T>>,
    pub sq: Subquotient<T>,
}

impl<T: Coeff> RawBuilt<T> {
    /// Module coordinates of raw vectors lying in the defining lattice.
    pub fn coords_matrix(&self, raw: &Matrix<T>) -> Option<Matrix<T>> {
        let cols: Option<Vec<Vec<T>>> = raw.columns().iter().map(|c| self.sq.coords(c)).collect();
        Some(Matrix::from_cols(raw.prime(), self.module.ngens(), &cols?))
    }

    pub fn lift(&self) -> &Matrix<T> {
        &self.sq.emb
    }
}

impl<T: Coeff> RawSum<T> {
    pub fn new(ring: &Arc<RingHandle<T>>, parts: &[Arc<CoeffModule<T>>]) -> Self {
        let mut offs = Vec::new();
        let mut dim = 0;
        for m in parts {
            offs.push(dim);
            dim += m.ngens();
        }
        RawSum {
            ring: ring.clone(),
            parts: parts.to_vec(),
            offs,
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offs[k]
    }

    fn blocks(&self, f: impl Fn(&CoeffModule<T>) -> Matrix<T>) -> Matrix<T> {
        let bs: Vec<Matrix<T>> = self.parts.iter().map(|m| f(m)).collect();
        let refs: Vec<&Matrix<T>> = bs.iter().collect();
        Matrix::block_diag(self.ring.prime(), &refs)
    }

    pub fn relations(&self) -> Matrix<T> {
        self.blocks(|m| m.relations())
    }

    pub fn action(&self, g: usize) -> Matrix<T> {
        self.blocks(|m| m.actions()[g].clone())
    }

    pub fn basis_action(&self, i: usize) -> Matrix<T> {
        self.blocks(|m| m.basis_action(i))
    }

    /// Places the rows of a matrix over part k into raw coordinates.
    pub fn embed(&self, k: usize, a: &Matrix<T>) -> Matrix<T> {
        let mut out = Matrix::zeros(self.ring.prime(), self.dim, a.cols());
        out.set_block(self.offs[k], 0, a);
        out
    }

    /// Rows of part k.
    pub fn project(&self, k: usize, a: &Matrix<T>) -> Matrix<T> {
        let idx: Vec<usize> = (self.offs[k]..self.offs[k] + self.parts[k].ngens()).collect();
        a.select_rows(&idx)
    }

    /// D-span of relations and all R-multiples of the given vectors.
    pub fn r_span(&self, vs: &Matrix<T>) -> Matrix<T> {
        let mut all = self.relations();
        for i in 0..self.ring.rank() {
            all = all.hstack(&self.basis_action(i).mul(vs));
        }
        if all.cols() == 0 {
            return Matrix::zeros(self.ring.prime(), self.dim, 0);
        }
        span_basis(&all)
    }

    /// Quotient of the sum by the R-span of the given vectors.
    pub fn quotient(&self, rels: &Matrix<T>) -> RawBuilt<T> {
        let k = self.r_span(rels);
        let acts: Vec<Matrix<T>> = (0..self.ring.gen_actions().len()).map(|g| self.action(g)).collect();
        let b = CoeffModule::from_subquotient(
            &self.ring,
            &Matrix::identity(self.ring.prime(), self.dim),
            &k,
            |g, v| acts[g].mul_vec(v),
        );
        RawBuilt {
            module: b.module,
            sq: b.sq,
        }
    }

    /// The submodule given by an R-stable lattice containing the relations.
    pub fn submodule(&self, lat: &Matrix<T>) -> RawBuilt<T> {
        let acts: Vec<Matrix<T>> = (0..self.ring.gen_actions().len()).map(|g| self.action(g)).collect();
        let b = CoeffModule::from_subquotient(&self.ring, lat, &self.relations(), |g, v| acts[g].mul_vec(v));
        RawBuilt {
            module: b.module,
            sq: b.sq,
        }
    }
}
