use std::sync::Arc;

use super::module::CoeffModule;
use crate::dcoeff::{kernel_basis, preimage, span_basis, subquotient, Coeff, Matrix};
use crate::rings::RingHandle;

/// A matrix of ring elements (each in R coordinates), describing R^cols → R^rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMat<T> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<T>>,
}

impl<T: Coeff> RMat<T> {
    pub fn zeros(ring: &RingHandle<T>, rows: usize, cols: usize) -> Self {
        RMat {
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &[T] {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Vec<T>) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).to_vec());
            }
        }
        RMat {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// D-matrix of the map R^cols → R^rows (free coordinates, rank(R) per summand).
    pub fn expand(&self, ring: &RingHandle<T>) -> Matrix<T> {
        let n = ring.rank();
        let p = ring.prime();
        let mut out = Matrix::zeros(p, self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if e.iter().all(|x| x.is_zero()) {
                    continue;
                }
                out.set_block(i * n, j * n, &ring.mul_matrix(e));
            }
        }
        out
    }

    /// Columns given as free-module vectors (rows·rank(R) D-coordinates each).
    pub fn from_free_cols(ring: &RingHandle<T>, rows: usize, cols: &[Vec<T>]) -> Self {
        let n = ring.rank();
        let mut m = RMat::zeros(ring, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.set(i, j, c[i * n..(i + 1) * n].to_vec());
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.iter().all(|x| x.is_zero()))
    }

    /// True when every entry lies in m.
    pub fn is_minimal(&self, ring: &RingHandle<T>) -> bool {
        self.entries.iter().all(|e| !ring.is_unit(e))
    }
}

/// A minimal free resolution F_k → … → F_0 → M.
#[derive(Clone, Debug)]
pub struct Resolution<T> {
    /// Images in M of the basis of F_0.
    pub cover: Matrix<T>,
    pub betti: Vec<usize>,
    /// diffs[j] : F_{j+1} → F_j.
    pub diffs: Vec<RMat<T>>,
    /// syz[j] = Ω^{j+1}M as a lattice in the D-coordinates of F_j.
    pub syz: Vec<Matrix<T>>,
}

/// D-actions of the non-scalar generators on R^k.
pub fn free_actions<T: Coeff>(ring: &RingHandle<T>, k: usize) -> Vec<Matrix<T>> {
    ring.gen_actions()
        .iter()
        .map(|a| Matrix::block_diag(ring.prime(), &vec![a; k]))
        .collect()
}

/// Lifts of a k-basis of S/mS for an R-stable lattice S ⊆ R^k.
pub fn min_gens_in_free<T: Coeff>(ring: &RingHandle<T>, k: usize, s: &Matrix<T>) -> Vec<Vec<T>> {
    let p = ring.prime();
    if s.cols() == 0 {
        return Vec::new();
    }
    let mut ms = Matrix::zeros(p, s.rows(), 0);
    if ring.is_curve() {
        ms = ms.hstack(&s.scale(&T::t_pow(p, 1)));
    }
    for a in free_actions(ring, k) {
        ms = ms.hstack(&a.mul(s));
    }
    let ms = if ms.cols() == 0 { ms } else { span_basis(&ms) };
    subquotient(s, &ms).emb.columns()
}

impl<T: Coeff> CoeffModule<T> {
    /// Lifts of a k-basis of M/mM.
    pub fn min_generators(&self) -> Matrix<T> {
        let mm = self.m_times(&self.full());
        let sq = subquotient(&self.full(), &mm);
        self.reduce_matrix(&sq.emb)
    }

    pub fn mu(&self) -> usize {
        self.min_generators().cols()
    }

    /// D-matrix of the cover R^{μ} → M for the given generators.
    pub fn cover_matrix(&self, gens: &Matrix<T>) -> Matrix<T> {
        let p = self.prime();
        let n = self.ring().rank();
        let mut cols = Vec::with_capacity(gens.cols() * n);
        let ba: Vec<Matrix<T>> = (0..n).map(|i| self.basis_action(i)).collect();
        for k in 0..gens.cols() {
            let v = gens.col(k);
            for b in &ba {
                cols.push(self.reduce(&b.mul_vec(&v)));
            }
        }
        Matrix::from_cols(p, self.ngens(), &cols)
    }

    /// Minimal free resolution up to F_len.
    pub fn compute_resolution(&self, len: usize) -> Resolution<T> {
        let ring = self.ring().clone();
        let gens = self.min_generators();
        let b0 = gens.cols();
        let pi = self.cover_matrix(&gens);
        let mut betti = vec![b0];
        let mut diffs = Vec::new();
        let mut syz = Vec::new();
        let mut kernel = if b0 == 0 {
            Matrix::zeros(ring.prime(), 0, 0)
        } else {
            let k = preimage(&pi, &self.relations());
            if k.cols() == 0 { k } else { span_basis(&k) }
        };
        let mut prev = b0;
        for _ in 0..len {
            let cols = min_gens_in_free(&ring, prev, &kernel);
            let d = RMat::from_free_cols(&ring, prev, &cols);
            syz.push(kernel.clone());
            betti.push(d.cols);
            let next = d.cols;
            kernel = if next == 0 {
                Matrix::zeros(ring.prime(), 0, 0)
            } else {
                kernel_basis(&d.expand(&ring))
            };
            diffs.push(d);
            prev = next;
        }
        Resolution {
            cover: gens,
            betti,
            diffs,
            syz,
        }
    }

    /// Resolution to F_2, cached.
    pub fn presentation(&self) -> Arc<Resolution<T>> {
        self.res.get_or_init(|| Arc::new(self.compute_resolution(2))).clone()
    }

    pub fn resolution(&self, len: usize) -> Arc<Resolution<T>> {
        if len <= 2 {
            self.presentation()
        } else {
            Arc::new(self.compute_resolution(len))
        }
    }

    /// Ω^j M, with Ω^0 M = M.
    pub fn syzygy(self: &Arc<Self>, j: usize) -> Arc<Self> {
        if j == 0 {
            return self.clone();
        }
        let res = self.resolution(j);
        let ring = self.ring().clone();
        let lat = &res.syz[j - 1];
        let k = res.betti[j - 1];
        let acts = free_actions(&ring, k);
        let zero = Matrix::zeros(ring.prime(), lat.rows(), 0);
        CoeffModule::from_subquotient(&ring, lat, &zero, |g, v| acts[g].mul_vec(v)).module
    }

    /// Auslander transpose: cokernel of the dual of the minimal presentation.
    pub fn transpose(&self) -> Arc<Self> {
        let ring = self.ring().clone();
        let res = self.presentation();
        let d1 = &res.diffs[0];
        let b1 = d1.cols;
        if b1 == 0 {
            return CoeffModule::zero(&ring);
        }
        let dt = d1.transpose().expand(&ring);
        let acts = free_actions(&ring, b1);
        let n = b1 * ring.rank();
        let k = if dt.cols() == 0 { dt } else { span_basis(&dt) };
        CoeffModule::from_subquotient(&ring, &Matrix::identity(ring.prime(), n), &k, |g, v| {
            acts[g].mul_vec(v)
        })
        .module
    }
}
