use std::sync::Arc;

use super::module::CoeffModule;
use crate::dcoeff::{preimage, span_basis, span_contains, Coeff, Matrix};
use crate::{Error, Result};

/// An R-linear map given by a D-matrix in the canonical generating systems.
#[derive(Clone)]
pub struct ModMap<T> {
    pub src: Arc<CoeffModule<T>>,
    pub dst: Arc<CoeffModule<T>>,
    pub mat: Matrix<T>,
}

impl<T: Coeff> std::fmt::Debug for ModMap<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModMap").field("mat", &self.mat).finish()
    }
}

impl<T: Coeff> ModMap<T> {
    /// Checks well-definedness and R-linearity.
    pub fn new(src: &Arc<CoeffModule<T>>, dst: &Arc<CoeffModule<T>>, mat: Matrix<T>) -> Result<Self> {
        let f = Self::new_unchecked(src, dst, mat);
        if f.mat.rows() != dst.ngens() || f.mat.cols() != src.ngens() {
            return Err(Error::Invalid("map matrix has the wrong shape".into()));
        }
        if !f.is_well_defined() {
            return Err(Error::Invalid("map does not respect relations".into()));
        }
        if !f.is_r_linear() {
            return Err(Error::Invalid("map is not R-linear".into()));
        }
        Ok(f)
    }

    pub fn new_unchecked(src: &Arc<CoeffModule<T>>, dst: &Arc<CoeffModule<T>>, mat: Matrix<T>) -> Self {
        ModMap {
            src: src.clone(),
            dst: dst.clone(),
            mat: dst.reduce_matrix(&mat),
        }
    }

    pub fn identity(m: &Arc<CoeffModule<T>>) -> Self {
        Self::new_unchecked(m, m, m.full())
    }

    pub fn zero(src: &Arc<CoeffModule<T>>, dst: &Arc<CoeffModule<T>>) -> Self {
        Self::new_unchecked(src, dst, Matrix::zeros(src.prime(), dst.ngens(), src.ngens()))
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        self.dst.reduce(&self.mat.mul_vec(v))
    }

    /// self ∘ g.
    pub fn compose(&self, g: &ModMap<T>) -> ModMap<T> {
        assert!(Arc::ptr_eq(&g.dst, &self.src) || g.dst.ngens() == self.src.ngens());
        Self::new_unchecked(&g.src, &self.dst, self.mat.mul(&g.mat))
    }

    pub fn add(&self, o: &ModMap<T>) -> ModMap<T> {
        Self::new_unchecked(&self.src, &self.dst, self.mat.add(&o.mat))
    }

    pub fn neg(&self) -> ModMap<T> {
        Self::new_unchecked(&self.src, &self.dst, self.mat.neg())
    }

    /// r·f for a ring element r.
    pub fn scale_ring(&self, r: &[T]) -> ModMap<T> {
        Self::new_unchecked(&self.src, &self.dst, self.dst.elem_action(r).mul(&self.mat))
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn is_well_defined(&self) -> bool {
        let p = self.src.prime();
        self.src.torsion().iter().enumerate().all(|(j, &a)| {
            let c: Vec<T> = self.mat.col(j).iter().map(|x| x.mul(&T::t_pow(p, a))).collect();
            self.dst.is_zero_elem(&c)
        })
    }

    pub fn is_r_linear(&self) -> bool {
        self.src
            .actions()
            .iter()
            .zip(self.dst.actions())
            .all(|(gm, gn)| self.dst.reduce_matrix(&gn.mul(&self.mat)) == self.dst.reduce_matrix(&self.mat.mul(gm)))
    }

    /// Kernel as a submodule lattice of the source (containing its relations).
    pub fn kernel(&self) -> Matrix<T> {
        let k = preimage(&self.mat, &self.dst.relations());
        let all = k.hstack(&self.src.relations());
        if all.cols() == 0 {
            return Matrix::zeros(self.src.prime(), self.src.ngens(), 0);
        }
        span_basis(&all)
    }

    /// Image as a submodule lattice of the target (containing its relations).
    pub fn image(&self) -> Matrix<T> {
        let all = self.mat.hstack(&self.dst.relations());
        if all.cols() == 0 {
            return Matrix::zeros(self.dst.prime(), self.dst.ngens(), 0);
        }
        span_basis(&all)
    }

    pub fn is_injective(&self) -> bool {
        span_contains(&self.src.relations(), &self.kernel())
    }

    pub fn is_surjective(&self) -> bool {
        span_contains(&self.image(), &self.dst.full())
    }

    pub fn equals(&self, o: &ModMap<T>) -> bool {
        self.dst.reduce_matrix(&self.mat.sub(&o.mat)).is_zero()
    }
}
