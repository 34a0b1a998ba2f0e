use std::fmt;
use std::sync::{Arc, OnceLock};

use super::resolution::Resolution;
use crate::dcoeff::{span_basis, span_contains, subquotient, Coeff, Matrix, Subquotient};
use crate::rings::{lattice_index, FracIdeal, RingHandle};
use crate::{Error, Result};

/// A finitely generated R-module: a D-module D^f ⊕ ⊕ D/s^{a_i} (torsion generators
/// first, exponents ascending) with one action matrix per non-scalar ring generator.
pub struct CoeffModule<T> {
    ring: Arc<RingHandle<T>>,
    tors: Vec<u32>,
    free: usize,
    actions: Vec<Matrix<T>>,
    pub(crate) res: OnceLock<Arc<Resolution<T>>>,
}

impl<T: Coeff> Clone for CoeffModule<T> {
    fn clone(&self) -> Self {
        CoeffModule {
            ring: self.ring.clone(),
            tors: self.tors.clone(),
            free: self.free,
            actions: self.actions.clone(),
            res: OnceLock::new(),
        }
    }
}

impl<T: Coeff> fmt::Debug for CoeffModule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoeffModule")
            .field("tors", &self.tors)
            .field("free", &self.free)
            .finish()
    }
}

/// Module in canonical form together with its embedding data.
pub struct Built<T> {
    pub module: Arc<CoeffModule<T>>,
    pub sq: Subquotient<T>,
}

impl<T: Coeff> CoeffModule<T> {
    /// Canonical form of L/K ⊆ D^N, where `act(g, v)` is the action of the g-th
    /// non-scalar ring generator on ambient vectors of L.
    pub fn from_subquotient<F>(ring: &Arc<RingHandle<T>>, l: &Matrix<T>, k: &Matrix<T>, act: F) -> Built<T>
    where
        F: Fn(usize, &[T]) -> Vec<T>,
    {
        let sq = subquotient(l, k);
        let n = sq.gens();
        let p = ring.prime();
        let actions = (0..ring.gen_actions().len())
            .map(|g| {
                let cols: Vec<Vec<T>> = (0..n)
                    .map(|j| {
                        let w = act(g, &sq.emb.col(j));
                        sq.coords(&w).expect("action leaves the lattice")
                    })
                    .collect();
                Matrix::from_cols(p, n, &cols)
            })
            .collect();
        let module = CoeffModule {
            ring: ring.clone(),
            tors: sq.torsion.clone(),
            free: sq.free,
            actions,
            res: OnceLock::new(),
        };
        Built {
            module: Arc::new(module),
            sq,
        }
    }

    /// Direct construction; the caller guarantees canonical form.
    pub fn from_parts(ring: &Arc<RingHandle<T>>, tors: Vec<u32>, free: usize, actions: Vec<Matrix<T>>) -> Result<Self> {
        let n = tors.len() + free;
        if actions.len() != ring.gen_actions().len() || actions.iter().any(|a| a.rows() != n || a.cols() != n) {
            return Err(Error::Invalid("action matrices have the wrong shape".into()));
        }
        if tors.windows(2).any(|w| w[0] > w[1]) || tors.contains(&0) || (T::IS_FIELD && !tors.is_empty()) {
            return Err(Error::Invalid("torsion exponents must be positive and ascending".into()));
        }
        let m = CoeffModule {
            ring: ring.clone(),
            tors,
            free,
            actions,
            res: OnceLock::new(),
        };
        let mods = m.row_mods();
        let reduced = CoeffModule {
            actions: m.actions.iter().map(|a| a.reduce_rows(&mods)).collect(),
            ..m
        };
        reduced.validate()?;
        Ok(reduced)
    }

    pub fn zero(ring: &Arc<RingHandle<T>>) -> Arc<Self> {
        let p = ring.prime();
        Arc::new(CoeffModule {
            ring: ring.clone(),
            tors: Vec::new(),
            free: 0,
            actions: vec![Matrix::zeros(p, 0, 0); ring.gen_actions().len()],
            res: OnceLock::new(),
        })
    }

    /// R^k.
    pub fn free(ring: &Arc<RingHandle<T>>, k: usize) -> Arc<Self> {
        let p = ring.prime();
        let actions = ring
            .gen_actions()
            .iter()
            .map(|a| Matrix::block_diag(p, &vec![a; k]))
            .collect();
        Arc::new(CoeffModule {
            ring: ring.clone(),
            tors: Vec::new(),
            free: k * ring.rank(),
            actions,
            res: OnceLock::new(),
        })
    }

    /// A fractional ideal as an R-module.
    pub fn from_frac_ideal(i: &FracIdeal<T>) -> Arc<Self> {
        Self::from_frac_ideal_built(i).module
    }

    /// As `from_frac_ideal`, keeping the lattice coordinates (the ideal is s^{-shift}·emb).
    pub fn from_frac_ideal_built(i: &FracIdeal<T>) -> Built<T> {
        let ring = i.ring();
        let zero = Matrix::zeros(ring.prime(), ring.amb_rank(), 0);
        Self::from_subquotient(ring, i.lattice(), &zero, |g, v| {
            ring.amb_mul(&ring.to_ambient(&ring.gen_elems()[g]), v)
        })
    }

    /// J/I for fractional ideals I ⊆ J.
    pub fn from_ideal_quotient(j: &FracIdeal<T>, i: &FracIdeal<T>) -> Result<Arc<Self>> {
        if !j.contains(i) {
            return Err(Error::Invalid("quotient of non-nested ideals".into()));
        }
        let ring = j.ring();
        let sigma = j.shift().max(i.shift());
        let p = ring.prime();
        let lj = j.lattice().scale(&T::t_pow(p, sigma - j.shift()));
        let li = i.lattice().scale(&T::t_pow(p, sigma - i.shift()));
        Ok(Self::from_subquotient(ring, &lj, &li, |g, v| {
            ring.amb_mul(&ring.to_ambient(&ring.gen_elems()[g]), v)
        })
        .module)
    }

    /// R/I.
    pub fn from_quotient(i: &FracIdeal<T>) -> Result<Arc<Self>> {
        Self::from_ideal_quotient(&FracIdeal::unit(i.ring()), i)
    }

    /// k = R/m.
    pub fn residue_field(ring: &Arc<RingHandle<T>>) -> Arc<Self> {
        Self::from_quotient(&FracIdeal::maximal(ring)).expect("m ⊆ R")
    }

    /// Direct sum with canonical form restored; returns the injections
    /// (as matrices from each summand into the sum).
    pub fn direct_sum_with_maps(ring: &Arc<RingHandle<T>>, parts: &[Arc<Self>]) -> (Arc<Self>, Vec<Matrix<T>>, Vec<Matrix<T>>) {
        let p = ring.prime();
        let dims: Vec<usize> = parts.iter().map(|m| m.ngens()).collect();
        let total: usize = dims.iter().sum();
        let deltas: Vec<Matrix<T>> = parts.iter().map(|m| m.relations()).collect();
        let drefs: Vec<&Matrix<T>> = deltas.iter().collect();
        let k = Matrix::block_diag(p, &drefs);
        let acts: Vec<Matrix<T>> = (0..ring.gen_actions().len())
            .map(|g| {
                let b: Vec<&Matrix<T>> = parts.iter().map(|m| &m.actions[g]).collect();
                Matrix::block_diag(p, &b)
            })
            .collect();
        let built = Self::from_subquotient(ring, &Matrix::identity(p, total), &k, |g, v| acts[g].mul_vec(v));
        let mut inj = Vec::new();
        let mut proj = Vec::new();
        let mut off = 0;
        for d in &dims {
            let cols: Vec<Vec<T>> = (0..*d)
                .map(|j| {
                    let mut v = vec![T::zero(p); total];
                    v[off + j] = T::one(p);
                    built.sq.coords(&v).unwrap()
                })
                .collect();
            inj.push(Matrix::from_cols(p, built.module.ngens(), &cols));
            let sel: Vec<usize> = (off..off + d).collect();
            proj.push(built.sq.emb.select_rows(&sel).reduce_rows(&parts[proj.len()].row_mods()));
            off += d;
        }
        (built.module, inj, proj)
    }

    pub fn direct_sum(ring: &Arc<RingHandle<T>>, parts: &[Arc<Self>]) -> Arc<Self> {
        Self::direct_sum_with_maps(ring, parts).0
    }

    pub fn ring(&self) -> &Arc<RingHandle<T>> {
        &self.ring
    }

    pub fn prime(&self) -> u16 {
        self.ring.prime()
    }

    pub fn torsion(&self) -> &[u32] {
        &self.tors
    }

    pub fn free_rank(&self) -> usize {
        self.free
    }

    /// Number of D-generators.
    pub fn ngens(&self) -> usize {
        self.tors.len() + self.free
    }

    pub fn is_zero(&self) -> bool {
        self.ngens() == 0
    }

    pub fn actions(&self) -> &[Matrix<T>] {
        &self.actions
    }

    /// Per-coordinate reduction moduli.
    pub fn row_mods(&self) -> Vec<Option<u32>> {
        self.tors
            .iter()
            .map(|&a| Some(a))
            .chain(std::iter::repeat(None).take(self.free))
            .collect()
    }

    /// Columns s^{a_i} e_i generating the D-relations.
    pub fn relations(&self) -> Matrix<T> {
        let p = self.prime();
        let n = self.ngens();
        let mut d = Matrix::zeros(p, n, self.tors.len());
        for (i, &a) in self.tors.iter().enumerate() {
            d.set(i, i, T::t_pow(p, a));
        }
        d
    }

    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        v.iter()
            .zip(self.row_mods())
            .map(|(x, m)| x.reduce(m))
            .collect()
    }

    pub fn reduce_matrix(&self, a: &Matrix<T>) -> Matrix<T> {
        a.reduce_rows(&self.row_mods())
    }

    pub fn zero_vec(&self) -> Vec<T> {
        vec![T::zero(self.prime()); self.ngens()]
    }

    pub fn unit_vec(&self, i: usize) -> Vec<T> {
        let mut v = self.zero_vec();
        v[i] = T::one(self.prime());
        v
    }

    pub fn is_zero_elem(&self, v: &[T]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Matrices generating m·M: s·Id (curve rings) and the generator actions.
    pub fn m_actions(&self) -> Vec<Matrix<T>> {
        let p = self.prime();
        let mut out = Vec::new();
        if self.ring.is_curve() {
            out.push(Matrix::identity(p, self.ngens()).scale(&T::t_pow(p, 1)));
        }
        out.extend(self.actions.iter().cloned());
        out
    }

    /// Action of the i-th D-basis element of R.
    pub fn basis_action(&self, i: usize) -> Matrix<T> {
        let p = self.prime();
        let w = &self.ring.basis_words()[i];
        let mut acc = Matrix::identity(p, self.ngens());
        if w.scalar > 0 {
            acc = acc.scale(&T::t_pow(p, w.scalar));
        }
        for (g, &k) in w.exps.iter().enumerate() {
            for _ in 0..k {
                acc = self.actions[g].mul(&acc);
            }
        }
        self.reduce_matrix(&acc)
    }

    /// Action of a ring element (R coordinates).
    pub fn elem_action(&self, r: &[T]) -> Matrix<T> {
        let p = self.prime();
        let mut acc = Matrix::zeros(p, self.ngens(), self.ngens());
        for (i, c) in r.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.basis_action(i).scale(c));
            }
        }
        self.reduce_matrix(&acc)
    }

    /// D-span of the R-multiples of the given vectors, together with the relations.
    pub fn r_span(&self, vs: &Matrix<T>) -> Matrix<T> {
        let p = self.prime();
        let mut all = self.relations();
        for i in 0..self.ring.rank() {
            all = all.hstack(&self.basis_action(i).mul(vs));
        }
        if all.cols() == 0 {
            return Matrix::zeros(p, self.ngens(), 0);
        }
        span_basis(&all)
    }

    /// m·S for a submodule lattice S (which must contain the relations).
    pub fn m_times(&self, s: &Matrix<T>) -> Matrix<T> {
        let mut all = self.relations();
        for a in self.m_actions() {
            all = all.hstack(&a.mul(s));
        }
        span_basis(&all)
    }

    /// Whole-module lattice: the identity.
    pub fn full(&self) -> Matrix<T> {
        Matrix::identity(self.prime(), self.ngens())
    }

    /// λ(S/S') for submodule lattices S' ⊆ S.
    pub fn sub_length(&self, s: &Matrix<T>, s2: &Matrix<T>) -> Result<u64> {
        lattice_index(s, s2).ok_or_else(|| Error::InfiniteLength("subquotient has a free part".into()))
    }

    /// Submodule lattice as a module, with its inclusion matrix.
    pub fn submodule(self: &Arc<Self>, s: &Matrix<T>) -> (Arc<Self>, Matrix<T>) {
        let b = Self::from_subquotient(&self.ring, s, &self.relations(), |g, v| self.actions[g].mul_vec(v));
        let inc = self.reduce_matrix(&b.sq.emb);
        (b.module, inc)
    }

    /// M/S with the projection matrix.
    pub fn quotient(self: &Arc<Self>, s: &Matrix<T>) -> (Arc<Self>, Matrix<T>) {
        let p = self.prime();
        let k = span_basis(&s.hstack(&self.relations()));
        let b = Self::from_subquotient(&self.ring, &self.full(), &k, |g, v| self.actions[g].mul_vec(v));
        let cols: Vec<Vec<T>> = (0..self.ngens()).map(|j| b.sq.coords(&self.unit_vec(j)).unwrap()).collect();
        let proj = Matrix::from_cols(p, b.module.ngens(), &cols);
        (b.module, proj)
    }

    pub fn contains_sub(&self, big: &Matrix<T>, small: &Matrix<T>) -> bool {
        span_contains(big, small)
    }

    /// Checks commuting actions and the ring's multiplication table.
    pub fn validate(&self) -> Result<()> {
        let n = self.ngens();
        for a in &self.actions {
            if a.rows() != n || a.cols() != n {
                return Err(Error::Invalid("action shape".into()));
            }
            // well defined: torsion generator images are killed by the same power
            for (j, &e) in self.tors.iter().enumerate() {
                let img = a.col(j);
                let scaled: Vec<T> = img.iter().map(|x| x.mul(&T::t_pow(self.prime(), e))).collect();
                if !self.is_zero_elem(&scaled) {
                    return Err(Error::Invalid("action does not respect torsion".into()));
                }
            }
        }
        for a in &self.actions {
            for b in &self.actions {
                if self.reduce_matrix(&a.mul(b)) != self.reduce_matrix(&b.mul(a)) {
                    return Err(Error::Invalid("actions do not commute".into()));
                }
            }
        }
        let ring = &self.ring;
        let r = ring.rank();
        let ba: Vec<Matrix<T>> = (0..r).map(|i| self.basis_action(i)).collect();
        for i in 0..r {
            for j in 0..r {
                let prod = ring.basis_actions()[i].col(j);
                let mut rhs = Matrix::zeros(self.prime(), n, n);
                for (k, c) in prod.iter().enumerate() {
                    if !c.is_zero() {
                        rhs = rhs.add(&ba[k].scale(c));
                    }
                }
                if self.reduce_matrix(&ba[i].mul(&ba[j])) != self.reduce_matrix(&rhs) {
                    return Err(Error::Invalid("actions violate the ring relations".into()));
                }
            }
        }
        Ok(())
    }
}
