use std::sync::Arc;

use super::hom::{hom, HomModule};
use super::map::ModMap;
use super::module::CoeffModule;
use crate::dcoeff::{preimage, span_basis, span_contains, subquotient, Coeff, Matrix};
use crate::rings::{canonical_ideal, FracIdeal, RingHandle};
use crate::{Error, Result};

/// Default number of candidate classes tried by the isomorphism search.
pub const ISO_BUDGET: u64 = 1 << 20;

/// Which right-hand side a module colon uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColonMode {
    /// (mN :_M m)
    MTimesN,
    /// (N :_M m)
    N,
}

fn span_or_empty<T: Coeff>(p: u16, rows: usize, a: &Matrix<T>) -> Matrix<T> {
    if a.cols() == 0 {
        Matrix::zeros(p, rows, 0)
    } else {
        span_basis(a)
    }
}

impl<T: Coeff> CoeffModule<T> {
    /// λ(M).
    pub fn length(&self) -> Result<u64> {
        if T::IS_FIELD {
            return Ok(self.ngens() as u64);
        }
        if self.free_rank() > 0 {
            return Err(Error::InfiniteLength(format!("module has D-rank {}", self.free_rank())));
        }
        Ok(self.torsion().iter().map(|&a| a as u64).sum())
    }

    /// Lattice of I·M for an integral ideal I.
    pub fn ideal_times(&self, i: &FracIdeal<T>) -> Result<Matrix<T>> {
        if i.shift() > 0 {
            return Err(Error::Invalid("ideal is not contained in R".into()));
        }
        let ring = self.ring();
        let mut all = self.relations();
        for g in i.gens() {
            let r = ring
                .from_ambient(g)
                .ok_or_else(|| Error::Invalid("ideal is not contained in R".into()))?;
            all = all.hstack(&self.elem_action(&r));
        }
        Ok(span_or_empty(self.prime(), self.ngens(), &all))
    }

    /// Lattice of I·L for an R-stable lattice L (relations included).
    pub fn lattice_times(&self, lat: &Matrix<T>, i: &FracIdeal<T>) -> Result<Matrix<T>> {
        if i.shift() > 0 {
            return Err(Error::Invalid("ideal is not contained in R".into()));
        }
        let ring = self.ring();
        let mut all = self.relations();
        for g in i.gens() {
            let r = ring
                .from_ambient(g)
                .ok_or_else(|| Error::Invalid("ideal is not contained in R".into()))?;
            all = all.hstack(&self.elem_action(&r).mul(lat));
        }
        Ok(span_or_empty(self.prime(), self.ngens(), &all))
    }

    /// ν_I(M) = λ(M/IM).
    pub fn nu(&self, i: &FracIdeal<T>) -> Result<u64> {
        let im = self.ideal_times(i)?;
        self.sub_length(&self.full(), &im)
    }

    /// Lattice of Soc(M) = (0 :_M m), including the relations.
    pub fn socle_lattice(&self) -> Matrix<T> {
        self.colon_lattice(&self.relations())
    }

    /// {x : m·x ⊆ S} for a submodule lattice S.
    pub fn colon_lattice(&self, s: &Matrix<T>) -> Matrix<T> {
        let p = self.prime();
        let n = self.ngens();
        let acts = self.m_actions();
        if acts.is_empty() || n == 0 {
            return self.full();
        }
        let mut stacked = Matrix::zeros(p, 0, n);
        for a in &acts {
            stacked = stacked.vstack(a);
        }
        let target = Matrix::block_diag(p, &vec![s; acts.len()]);
        let x = preimage(&stacked, &target);
        span_or_empty(p, n, &x.hstack(&self.relations()))
    }

    pub fn socle(self: &Arc<Self>) -> Arc<Self> {
        self.submodule(&self.socle_lattice()).0
    }

    /// (mN :_M m) or (N :_M m) for N generated by the given columns.
    pub fn colon_in_module(&self, n_gens: &Matrix<T>, mode: ColonMode) -> Matrix<T> {
        let n = self.r_span(n_gens);
        let target = match mode {
            ColonMode::N => n,
            ColonMode::MTimesN => self.m_times(&n),
        };
        self.colon_lattice(&target)
    }

    /// ann_R(M), as an ideal of R.
    pub fn annihilator(&self) -> FracIdeal<T> {
        let ring = self.ring();
        let p = self.prime();
        let r = ring.rank();
        let n = self.ngens();
        if n == 0 {
            return FracIdeal::unit(ring);
        }
        let ba: Vec<Matrix<T>> = (0..r).map(|i| self.basis_action(i)).collect();
        // column i: the stacked columns of B_i
        let cols: Vec<Vec<T>> = ba
            .iter()
            .map(|b| (0..n).flat_map(|j| b.col(j)).collect())
            .collect();
        let a = Matrix::from_cols(p, n * n, &cols);
        let rel = self.relations();
        let target = Matrix::block_diag(p, &vec![&rel; n]);
        let sol = preimage(&a, &target);
        let gens: Vec<Vec<T>> = sol.columns().iter().map(|c| ring.to_ambient(c)).collect();
        FracIdeal::from_ambient(ring, 0, gens)
    }

    /// Lattice of the D-torsion part (everything, over Artinian rings).
    pub fn torsion_lattice(&self) -> Matrix<T> {
        if !self.ring().is_curve() {
            return self.full();
        }
        let idx: Vec<usize> = (0..self.torsion().len()).collect();
        self.full().select_cols(&idx)
    }

    /// H⁰_m(M).
    pub fn torsion_part(self: &Arc<Self>) -> Arc<Self> {
        self.submodule(&self.torsion_lattice()).0
    }

    /// Least n with m^n · H⁰_m(M) = 0.
    pub fn loewy_length(&self) -> usize {
        let rel = self.relations();
        let mut cur = span_or_empty(self.prime(), self.ngens(), &self.torsion_lattice().hstack(&rel));
        let mut n = 0;
        while !span_contains(&rel, &cur) {
            cur = self.m_times(&cur);
            n += 1;
        }
        n
    }

    /// Maximal Cohen-Macaulay: torsion-free over curves, always over Artinian rings.
    pub fn is_mcm(&self) -> bool {
        !self.ring().is_curve() || self.torsion().is_empty()
    }

    /// Depth (0 or 1). The zero module counts as depth 1 over curve rings.
    pub fn depth01(&self) -> u8 {
        if self.ring().is_curve() && self.torsion().is_empty() {
            1
        } else {
            0
        }
    }

    /// The canonical module ω_R.
    pub fn canonical_module(ring: &Arc<RingHandle<T>>) -> Result<Arc<Self>> {
        if ring.is_curve() {
            return Ok(Self::from_frac_ideal(&canonical_ideal(ring)?));
        }
        // Matlis dual Hom_k(R, k): generators act by transposes
        let acts = ring.gen_actions().iter().map(|a| a.transpose()).collect();
        Ok(Arc::new(Self::from_parts(ring, Vec::new(), ring.rank(), acts)?))
    }

    /// M† = Hom(M, ω).
    pub fn dualize_omega(self: &Arc<Self>) -> Result<HomModule<T>> {
        let w = Self::canonical_module(self.ring())?;
        hom(self, &w)
    }
}

/// An isomorphism M → N if one exists.
pub fn iso_map<T: Coeff>(m: &Arc<CoeffModule<T>>, n: &Arc<CoeffModule<T>>, budget: u64) -> Result<Option<ModMap<T>>> {
    if m.torsion() != n.torsion() || m.free_rank() != n.free_rank() {
        return Ok(None);
    }
    if m.is_zero() {
        return Ok(Some(ModMap::zero(m, n)));
    }
    if m.mu() != n.mu() {
        return Ok(None);
    }
    let h = hom(m, n)?;
    let hm = &h.module;
    if hm.is_zero() {
        return Ok(None);
    }
    let lifts = subquotient(&hm.full(), &hm.m_times(&hm.full())).emb;
    let d = lifts.cols();
    let p = m.prime() as u64;
    let total = p
        .checked_pow(d as u32)
        .filter(|&c| c <= budget)
        .ok_or_else(|| Error::ResourceBudget(format!("{p}^{d} Hom classes exceed the isomorphism budget")))?;
    let mn = n.m_times(&n.full());
    let cols = lifts.columns();
    // classes up to F_p^* scaling: first nonzero digit is 1
    for code in 1..total {
        let mut digits = Vec::with_capacity(d);
        let mut c = code;
        for _ in 0..d {
            digits.push(c % p);
            c /= p;
        }
        if digits.iter().rev().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        let mut v = hm.zero_vec();
        for (k, &dg) in digits.iter().enumerate() {
            if dg != 0 {
                let s = T::from_i64(m.prime(), dg as i64);
                for (x, y) in v.iter_mut().zip(&cols[k]) {
                    *x = x.add(&y.mul(&s));
                }
            }
        }
        let f = h.to_map(&v);
        if span_contains(&f.mat.hstack(&mn), &n.full()) {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

pub fn is_isomorphic<T: Coeff>(m: &Arc<CoeffModule<T>>, n: &Arc<CoeffModule<T>>) -> Result<bool> {
    Ok(iso_map(m, n, ISO_BUDGET)?.is_some())
}
