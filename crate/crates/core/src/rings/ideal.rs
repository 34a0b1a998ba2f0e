use std::sync::Arc;

use super::ring::{CurveRing, RingHandle};
use super::semigroup::Semigroup;
use crate::dcoeff::{
    cokernel_invariants, local_smith, preimage, span_basis, span_contains, subquotient, Coeff,
    Local, Matrix,
};
use crate::{Error, Result};

/// Element s^{-shift}·v of the total quotient ring, v in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracElem<T> {
    pub shift: u32,
    pub v: Vec<T>,
}

/// A fractional ideal s^{-shift}·span_D(lattice), with an R-generating list kept
/// at the same shift.
#[derive(Clone, Debug)]
pub struct FracIdeal<T> {
    ring: Arc<RingHandle<T>>,
    shift: u32,
    lattice: Matrix<T>,
    gens: Vec<Vec<T>>,
}

/// D-length of big/small for lattices small ⊆ big; `None` when infinite.
pub(crate) fn lattice_index<T: Coeff>(big: &Matrix<T>, small: &Matrix<T>) -> Option<u64> {
    let sq = subquotient(big, small);
    let t: u64 = sq.torsion.iter().map(|&a| a as u64).sum();
    if T::IS_FIELD {
        Some(t + sq.free as u64)
    } else if sq.free == 0 {
        Some(t)
    } else {
        None
    }
}

impl<T: Coeff> FracIdeal<T> {
    /// R-span of s^{-shift}·g for the given ambient vectors.
    pub fn from_ambient(ring: &Arc<RingHandle<T>>, shift: u32, gens: Vec<Vec<T>>) -> Self {
        let p = ring.prime();
        let n = ring.amb_rank();
        let mut cols = Vec::new();
        for i in 0..ring.rank() {
            let mut b = ring.zero();
            b[i] = T::one(p);
            let m = ring.amb_mul_matrix(&ring.to_ambient(&b));
            for g in &gens {
                cols.push(m.mul_vec(g));
            }
        }
        let lattice = span_basis(&Matrix::from_cols(p, n, &cols));
        let mut out = FracIdeal {
            ring: ring.clone(),
            shift,
            lattice,
            gens,
        };
        out.normalize();
        out
    }

    /// Ideal generated by elements of R (R coordinates).
    pub fn from_elems(ring: &Arc<RingHandle<T>>, elems: &[Vec<T>]) -> Self {
        let g = elems.iter().map(|a| ring.to_ambient(a)).collect();
        Self::from_ambient(ring, 0, g)
    }

    pub fn principal(ring: &Arc<RingHandle<T>>, x: &FracElem<T>) -> Self {
        Self::from_ambient(ring, x.shift, vec![x.v.clone()])
    }

    pub fn unit(ring: &Arc<RingHandle<T>>) -> Self {
        Self::from_elems(ring, &[ring.one()])
    }

    pub fn maximal(ring: &Arc<RingHandle<T>>) -> Self {
        Self::from_elems(ring, &ring.mgens())
    }

    /// Ideal generated by t^k, k possibly negative (curve rings).
    pub fn monomial(ring: &Arc<RingHandle<T>>, exps: &[i64]) -> Self {
        let e = ring.scalar_exp().expect("curve ring") as i64;
        let lo = exps.iter().copied().min().unwrap_or(0);
        let shift = if lo < 0 { ((-lo) + e - 1) / e } else { 0 };
        let gens = exps
            .iter()
            .map(|&k| ring.amb_t_pow((k + shift * e) as u32))
            .collect();
        Self::from_ambient(ring, shift as u32, gens)
    }

    pub fn ring(&self) -> &Arc<RingHandle<T>> {
        &self.ring
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn lattice(&self) -> &Matrix<T> {
        &self.lattice
    }

    pub fn gens(&self) -> &[Vec<T>] {
        &self.gens
    }

    pub fn gen_elems(&self) -> Vec<FracElem<T>> {
        self.gens
            .iter()
            .map(|g| FracElem {
                shift: self.shift,
                v: g.clone(),
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.lattice.cols() == 0
    }

    fn normalize(&mut self) {
        if T::IS_FIELD {
            return;
        }
        let p = self.ring.prime();
        let s = T::t_pow(p, 1);
        while self.shift > 0
            && !self.lattice.is_zero()
            && (0..self.lattice.rows())
                .all(|i| (0..self.lattice.cols()).all(|j| self.lattice.get(i, j).val() != Some(0)))
        {
            let div = |x: &T| x.div_exact(&s).expect("divisible by s");
            let mut l = self.lattice.clone();
            for i in 0..l.rows() {
                for j in 0..l.cols() {
                    let v = div(l.get(i, j));
                    l.set(i, j, v);
                }
            }
            self.lattice = l;
            // the generator list spans the lattice over R, so it is divisible too
            self.gens = self
                .gens
                .iter()
                .map(|g| g.iter().map(|x| div(x)).collect())
                .collect();
            self.shift -= 1;
        }
    }

    /// Lattice rescaled to shift σ >= self.shift.
    fn lattice_at(&self, sigma: u32) -> Matrix<T> {
        let k = sigma - self.shift;
        if k == 0 {
            self.lattice.clone()
        } else {
            self.lattice.scale(&T::t_pow(self.ring.prime(), k))
        }
    }

    fn gens_at(&self, sigma: u32) -> Vec<Vec<T>> {
        let c = T::t_pow(self.ring.prime(), sigma - self.shift);
        self.gens
            .iter()
            .map(|g| g.iter().map(|x| x.mul(&c)).collect())
            .collect()
    }

    fn same_ring(&self, o: &Self) {
        assert!(Arc::ptr_eq(&self.ring, &o.ring), "ideals over different rings");
    }

    pub fn sum(&self, o: &Self) -> Self {
        self.same_ring(o);
        let sigma = self.shift.max(o.shift);
        let mut g = self.gens_at(sigma);
        g.extend(o.gens_at(sigma));
        let lattice = span_basis(&self.lattice_at(sigma).hstack(&o.lattice_at(sigma)));
        let mut out = FracIdeal {
            ring: self.ring.clone(),
            shift: sigma,
            lattice,
            gens: g,
        };
        out.normalize();
        out
    }

    pub fn product(&self, o: &Self) -> Self {
        self.same_ring(o);
        let r = &self.ring;
        let mut cols = Vec::new();
        for a in self.lattice.columns() {
            let m = r.amb_mul_matrix(&a);
            for b in o.lattice.columns() {
                cols.push(m.mul_vec(&b));
            }
        }
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &o.gens {
                gens.push(r.amb_mul(a, b));
            }
        }
        let n = r.amb_rank();
        let mut out = FracIdeal {
            ring: r.clone(),
            shift: self.shift + o.shift,
            lattice: span_basis(&Matrix::from_cols(r.prime(), n, &cols)),
            gens,
        };
        out.normalize();
        out
    }

    pub fn power(&self, n: u32) -> Self {
        let mut acc = Self::unit(&self.ring);
        for _ in 0..n {
            acc = acc.product(self);
        }
        acc
    }

    /// x·I.
    pub fn scale(&self, x: &FracElem<T>) -> Self {
        Self::principal(&self.ring, x).product(self)
    }

    /// o ⊆ self.
    pub fn contains(&self, o: &Self) -> bool {
        self.same_ring(o);
        let sigma = self.shift.max(o.shift);
        span_contains(&self.lattice_at(sigma), &o.lattice_at(sigma))
    }

    pub fn contains_elem(&self, x: &FracElem<T>) -> bool {
        self.contains(&Self::principal(&self.ring, x))
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.contains(o) && o.contains(self)
    }

    /// self ⊆ R.
    pub fn is_integral(&self) -> bool {
        Self::unit(&self.ring).contains(self)
    }

    /// {y : y·J ⊆ I} inside the total quotient ring (curve rings only).
    pub fn colon(&self, j: &Self) -> Result<Self> {
        self.same_ring(j);
        if !self.ring.is_curve() {
            return Err(Error::DimensionMismatch("colon in the total quotient ring of an Artinian ring".into()));
        }
        if j.is_zero() {
            return Err(Error::Invalid("colon by the zero ideal".into()));
        }
        let e = self.ring.scalar_exp().unwrap() as i64;
        let v = j
            .lattice
            .columns()
            .iter()
            .filter_map(|c| self.ring.amb_val(c))
            .min()
            .unwrap() as i64;
        let sigma = (self.shift as i64 - j.shift as i64 + (v + e - 1) / e).max(0) as u32;
        let delta = sigma + j.shift - self.shift;
        Ok(self.colon_solve(j, sigma, delta))
    }

    /// y' in the ambient lattice with y'·J' ⊆ s^delta·L_I; result at shift σ.
    fn colon_solve(&self, j: &Self, sigma: u32, delta: u32) -> Self {
        let r = &self.ring;
        let p = r.prime();
        let n = r.amb_rank();
        let li = if delta == 0 {
            self.lattice.clone()
        } else {
            self.lattice.scale(&T::t_pow(p, delta))
        };
        let jcols = j.lattice.columns();
        let mut stack = Matrix::zeros(p, 0, n);
        for c in &jcols {
            stack = stack.vstack(&r.amb_mul_matrix(c));
        }
        let blocks: Vec<&Matrix<T>> = jcols.iter().map(|_| &li).collect();
        let target = Matrix::block_diag(p, &blocks);
        let sol = preimage(&stack, &target);
        let mut out = FracIdeal {
            ring: r.clone(),
            shift: sigma,
            gens: sol.columns(),
            lattice: sol,
        };
        out.normalize();
        out
    }

    /// (I :_R J) = {y ∈ R : y·J ⊆ I}.
    pub fn colon_in_r(&self, j: &Self) -> Result<Self> {
        if !self.ring.is_curve() {
            self.same_ring(j);
            if j.is_zero() {
                return Err(Error::Invalid("colon by the zero ideal".into()));
            }
            return Ok(self.colon_solve(j, 0, 0));
        }
        Ok(self.colon(j)?.intersect_r())
    }

    pub fn intersect(&self, o: &Self) -> Self {
        self.same_ring(o);
        let sigma = self.shift.max(o.shift);
        let a = self.lattice_at(sigma);
        let x = preimage(&a, &o.lattice_at(sigma));
        let lattice = span_basis(&a.mul(&x));
        let mut out = FracIdeal {
            ring: self.ring.clone(),
            shift: sigma,
            gens: lattice.columns(),
            lattice,
        };
        out.normalize();
        out
    }

    pub fn intersect_r(&self) -> Self {
        self.intersect(&Self::unit(&self.ring))
    }

    /// λ(R/I) for an ideal I ⊆ R.
    pub fn quotient_length(&self) -> Result<u64> {
        if !self.is_integral() {
            return Err(Error::Invalid("quotient length of a non-integral ideal".into()));
        }
        lattice_index(&self.ring.r_lattice(), &self.lattice).ok_or_else(|| Error::InfiniteLength("quotient is not of finite length".into()))
    }

    /// λ(I/J) for J ⊆ I.
    pub fn index_of(&self, j: &Self) -> Result<u64> {
        if !self.contains(j) {
            return Err(Error::Invalid("index of a non-contained ideal".into()));
        }
        let sigma = self.shift.max(j.shift);
        lattice_index(&self.lattice_at(sigma), &j.lattice_at(sigma)).ok_or_else(|| Error::InfiniteLength("quotient is not of finite length".into()))
    }

    /// μ(I) = λ(I/mI).
    pub fn mu(&self) -> u64 {
        let mi = FracIdeal::maximal(&self.ring).product(self);
        self.index_of(&mi).expect("mI ⊆ I has finite colength")
    }

    /// Generators of I that are non-zero-divisors on R.
    pub fn nzd_generators(&self) -> Result<Vec<FracElem<T>>> {
        let r = &self.ring;
        let n = r.amb_rank();
        let is_nzd = |v: &[T]| crate::dcoeff::kernel_basis(&r.amb_mul_matrix(v)).cols() == 0 && n > 0;
        let gens = self.gen_elems();
        let anchor = gens.iter().find(|g| is_nzd(&g.v)).cloned();
        let Some(anchor) = anchor else {
            return Err(Error::NoNzd);
        };
        let p = r.prime();
        let mut out = Vec::new();
        for g in gens {
            if is_nzd(&g.v) {
                out.push(g);
                continue;
            }
            let fixed = (1..p).find_map(|c| {
                let c = T::from_i64(p, c as i64);
                let v: Vec<T> = g.v.iter().zip(&anchor.v).map(|(a, b)| a.add(&b.mul(&c))).collect();
                is_nzd(&v).then_some(FracElem { shift: g.shift, v })
            });
            match fixed {
                Some(f) => {
                    if !out.contains(&anchor) {
                        out.push(anchor.clone());
                    }
                    out.push(f);
                }
                None => return Err(Error::NoNzd),
            }
        }
        Ok(out)
    }
}

/// Residue-class minima of a valuation set, shifted by -e·shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuations {
    pub e: u32,
    pub minima: Vec<i64>,
}

impl Valuations {
    pub fn contains(&self, v: i64) -> bool {
        let r = v.rem_euclid(self.e as i64) as usize;
        v >= self.minima[r]
    }

    pub fn min(&self) -> i64 {
        *self.minima.iter().min().unwrap()
    }
}

impl<T: Coeff> FracIdeal<T> {
    /// The set {v_t(x) : x ∈ I nonzero}, obtained from the lengths of
    /// L/(L ∩ t^v·A) for increasing v.
    pub fn valuations(&self) -> Result<Valuations> {
        let r = &self.ring;
        let e = r.scalar_exp().expect("curve ring");
        let n = e as usize;
        let p = r.prime();
        if local_smith(&self.lattice).rank() < n {
            return Err(Error::InfiniteLength("lattice is not of full rank".into()));
        }
        // count(v) = #(V ∩ [0, v)) = v - λ(A/(L + t^v A))
        let count = |v: u32| -> u64 {
            let tv: Vec<Vec<T>> = (0..e).map(|j| r.amb_t_pow(v + j)).collect();
            let m = self.lattice.hstack(&Matrix::from_cols(p, n, &tv));
            let c = cokernel_invariants(&m);
            v as u64 - c.torsion.iter().map(|&a| a as u64).sum::<u64>()
        };
        let mut minima: Vec<Option<i64>> = vec![None; n];
        let mut prev = 0u64;
        let mut v = 0u32;
        while minima.iter().any(|m| m.is_none()) {
            let c = count(v + 1);
            if c > prev {
                let slot = &mut minima[(v % e) as usize];
                if slot.is_none() {
                    *slot = Some(v as i64 - (e * self.shift) as i64);
                }
            }
            prev = c;
            v += 1;
        }
        Ok(Valuations {
            e,
            minima: minima.into_iter().map(|m| m.unwrap()).collect(),
        })
    }

    /// The monomial fractional ideal with the same valuation set.
    pub fn monomial_hull(&self) -> Result<Self> {
        let vals = self.valuations()?;
        Ok(Self::monomial(&self.ring, &vals.minima))
    }

    pub fn is_monomial(&self) -> Result<bool> {
        Ok(self.monomial_hull()?.equals(self))
    }

    /// x ∈ I with I^{n+1} = x·I^n, n ≤ n_max minimal.
    pub fn principal_reduction(&self, n_max: u32) -> Result<(FracElem<T>, u32)> {
        let r = &self.ring;
        let gens = self.gen_elems();
        let vals: Vec<Option<u32>> = gens.iter().map(|g| r.amb_val(&g.v)).collect();
        let vmin = vals.iter().flatten().min().copied().ok_or(Error::NoReductionFound(n_max))?;
        let low: Vec<FracElem<T>> = gens
            .iter()
            .zip(&vals)
            .filter(|(_, v)| **v == Some(vmin))
            .map(|(g, _)| g.clone())
            .collect();
        let mut candidates = low.clone();
        if low.len() > 1 {
            let mut acc = low[0].v.clone();
            for g in &low[1..] {
                acc = acc.iter().zip(&g.v).map(|(a, b)| a.add(b)).collect();
            }
            candidates.push(FracElem {
                shift: low[0].shift,
                v: acc,
            });
        }
        for x in candidates {
            let xr = FracIdeal::principal(r, &x);
            let mut pw = FracIdeal::unit(r);
            for n in 0..=n_max {
                let next = pw.product(self);
                if next.equals(&xr.product(&pw)) {
                    return Ok((x, n));
                }
                pw = next;
            }
        }
        Err(Error::NoReductionFound(n_max))
    }

    /// (R : I)·I.
    pub fn trace_ideal(&self) -> Result<Self> {
        Ok(FracIdeal::unit(&self.ring).colon(self)?.product(self))
    }

    /// B(I) = (I^n : I^n) once stable, with the stabilization index.
    pub fn blow_up_module(&self, budget: u32) -> Result<(Self, u32)> {
        let mut pw = self.clone();
        let mut cur = pw.colon(&pw)?;
        for n in 1..=budget {
            let next_pw = pw.product(self);
            let next = next_pw.colon(&next_pw)?;
            if next.equals(&cur) {
                return Ok((cur, n));
            }
            pw = next_pw;
            cur = next;
        }
        Err(Error::StabilizationBudget(format!("(I^n : I^n) not stable for n <= {budget}")))
    }
}

impl FracIdeal<Local> {
    /// B(I) as a ring over the same D (so B-modules are R-modules with the same
    /// coordinates), together with its R-module form.
    pub fn blow_up(&self, budget: u32) -> Result<(Arc<CurveRing>, Self)> {
        let (b, _) = self.blow_up_module(budget)?;
        let vals = b.valuations()?;
        if !b.is_monomial()? {
            return Err(Error::NonMonomial("blow-up algebra".into()));
        }
        let minima: Vec<u32> = vals.minima.iter().map(|&m| m as u32).collect();
        let sg = Semigroup::from_residue_minima(&minima)?;
        let ring = RingHandle::curve(self.ring.prime(), sg.gens(), self.ring.scalar_exp())?;
        Ok((Arc::new(ring.with_label(&format!("B({})", self.ring.label()))), b))
    }
}

/// ω = span of t^x with F - x outside S.
pub fn canonical_ideal<T: Coeff>(ring: &Arc<RingHandle<T>>) -> Result<FracIdeal<T>> {
    let sg = ring.semigroup().ok_or_else(|| Error::WrongFamily("canonical ideal needs a curve ring".into()))?;
    let e = ring.scalar_exp().unwrap();
    let f = sg.frobenius();
    let minima: Vec<i64> = (0..e as i64)
        .map(|r| (r..).step_by(e as usize).find(|&x| !sg.contains(f - x)).unwrap())
        .collect();
    Ok(FracIdeal::monomial(ring, &minima))
}
