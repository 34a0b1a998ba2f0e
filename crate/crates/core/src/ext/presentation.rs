use std::sync::Arc;

use crate::dcoeff::{Coeff, Matrix, Subquotient};
use crate::modules::{CoeffModule, RMat, Resolution};
use crate::{Error, Result};

/// Default number of classes an enumeration may visit.
pub const ENUM_BUDGET: u64 = 1 << 20;

/// An element of Ext¹ in the canonical coordinates of its presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtClass<T> {
    pub coords: Vec<T>,
}

/// Matrix of Hom(F_a, N) → Hom(F_b, N), c ↦ c∘d, for d: F_b → F_a.
/// Hom(F, N) = N^{rank F} in concatenated coordinates.
pub fn hom_free_map<T: Coeff>(n: &CoeffModule<T>, d: &RMat<T>) -> Matrix<T> {
    let k = n.ngens();
    let mut out = Matrix::zeros(n.prime(), d.cols * k, d.rows * k);
    for i in 0..d.rows {
        for j in 0..d.cols {
            let e = d.get(i, j);
            if e.iter().any(|x| !x.is_zero()) {
                out.set_block(j * k, i * k, &n.elem_action(e));
            }
        }
    }
    out
}

fn span_or_zero<T: Coeff>(a: &Matrix<T>, rows: usize) -> Matrix<T> {
    if a.cols() == 0 {
        Matrix::zeros(a.prime(), rows, 0)
    } else {
        crate::dcoeff::span_basis(a)
    }
}

fn blocks<T: Coeff>(a: &Matrix<T>, k: usize) -> Matrix<T> {
    Matrix::block_diag(a.prime(), &vec![a; k])
}

/// H at Hom(F_i, N) of Hom(F_•, N): lattices Z ⊇ B in N^{β_i} and the module Z/B.
fn cohomology<T: Coeff>(n: &Arc<CoeffModule<T>>, res: &Resolution<T>, i: usize) -> (Arc<CoeffModule<T>>, Subquotient<T>) {
    let ring = n.ring();
    let p = n.prime();
    let delta = |b: usize| blocks(&n.relations(), b);
    let bi = res.betti[i];
    let dim = bi * n.ngens();
    let out = hom_free_map(n, &res.diffs[i]);
    let z = crate::dcoeff::preimage(&out, &delta(res.betti[i + 1])).hstack(&delta(bi));
    let z = if z.cols() == 0 { Matrix::zeros(p, dim, 0) } else { crate::dcoeff::span_basis(&z) };
    let b = if i == 0 {
        delta(bi)
    } else {
        hom_free_map(n, &res.diffs[i - 1]).hstack(&delta(bi))
    };
    let b = if b.cols() == 0 { Matrix::zeros(p, dim, 0) } else { crate::dcoeff::span_basis(&b) };
    let acts: Vec<Matrix<T>> = n.actions().iter().map(|a| blocks(a, bi)).collect();
    let built = CoeffModule::from_subquotient(ring, &z, &b, |g, v| acts[g].mul_vec(v));
    (built.module, built.sq)
}

/// Ext^i(M, N) as an R-module (i ≥ 0, with Ext^0 = Hom).
pub fn ext_module<T: Coeff>(m: &Arc<CoeffModule<T>>, n: &Arc<CoeffModule<T>>, i: usize) -> Result<Arc<CoeffModule<T>>> {
    if !Arc::ptr_eq(m.ring(), n.ring()) && m.ring().label() != n.ring().label() {
        return Err(Error::Invalid("modules over different rings".into()));
    }
    let res = m.resolution(i + 1);
    Ok(cohomology(n, &res, i).0)
}

/// Ext¹(M, N) computed from the minimal resolution of M, with cocycle lifts.
pub struct ExtPresentation<T> {
    pub m: Arc<CoeffModule<T>>,
    pub n: Arc<CoeffModule<T>>,
    pub res: Arc<Resolution<T>>,
    /// Ext¹ as an R-module.
    pub module: Arc<CoeffModule<T>>,
    sq: Subquotient<T>,
}

pub fn ext1<T: Coeff>(m: &Arc<CoeffModule<T>>, n: &Arc<CoeffModule<T>>) -> Result<ExtPresentation<T>> {
    if !Arc::ptr_eq(m.ring(), n.ring()) && m.ring().label() != n.ring().label() {
        return Err(Error::Invalid("modules over different rings".into()));
    }
    let res = m.presentation();
    let (module, sq) = cohomology(n, &res, 1);
    Ok(ExtPresentation {
        m: m.clone(),
        n: n.clone(),
        res,
        module,
        sq,
    })
}

impl<T: Coeff> ExtPresentation<T> {
    pub fn prime(&self) -> u16 {
        self.m.prime()
    }

    pub fn betti(&self) -> &[usize] {
        &self.res.betti
    }

    /// Torsion exponents of Ext¹ (over a field: empty, with `free_rank` counting dimension).
    pub fn invariants(&self) -> (Vec<u32>, usize) {
        (self.module.torsion().to_vec(), self.module.free_rank())
    }

    /// λ(Ext¹).
    pub fn length(&self) -> Result<u64> {
        self.module.length()
    }

    /// Number of classes, when finite and representable.
    pub fn size(&self) -> Option<u64> {
        let l = self.length().ok()?;
        (self.prime() as u64).checked_pow(u32::try_from(l).ok()?)
    }

    pub fn zero(&self) -> ExtClass<T> {
        ExtClass {
            coords: self.module.zero_vec(),
        }
    }

    pub fn class(&self, coords: Vec<T>) -> ExtClass<T> {
        ExtClass {
            coords: self.module.reduce(&coords),
        }
    }

    pub fn is_zero(&self, c: &ExtClass<T>) -> bool {
        self.module.is_zero_elem(&c.coords)
    }

    /// A cocycle in Hom(F1, N) = N^{β1} representing the class.
    pub fn lift(&self, c: &ExtClass<T>) -> Vec<T> {
        let v = self.sq.emb.mul_vec(&c.coords);
        let k = self.n.ngens();
        if k == 0 {
            return v;
        }
        v.chunks(k).flat_map(|ch| self.n.reduce(ch)).collect()
    }

    /// Class of a cocycle; LiftFailure when it is not one.
    pub fn class_of_cocycle(&self, c: &[T]) -> Result<ExtClass<T>> {
        self.sq
            .coords(c)
            .map(|x| self.class(x))
            .ok_or_else(|| Error::LiftFailure("vector is not a cocycle".into()))
    }

    pub fn add(&self, a: &ExtClass<T>, b: &ExtClass<T>) -> ExtClass<T> {
        self.class(a.coords.iter().zip(&b.coords).map(|(x, y)| x.add(y)).collect())
    }

    pub fn neg(&self, a: &ExtClass<T>) -> ExtClass<T> {
        self.class(a.coords.iter().map(|x| x.neg()).collect())
    }

    /// r·c for a ring element r (R coordinates), via the module structure of Ext¹.
    pub fn scalar(&self, r: &[T], c: &ExtClass<T>) -> ExtClass<T> {
        self.class(self.module.elem_action(r).mul_vec(&c.coords))
    }

    /// Every class exactly once, coordinate-lexicographically.
    pub fn enumerate(&self, budget: u64) -> Result<ClassIter<'_, T>> {
        let total = self
            .size()
            .filter(|&s| s <= budget)
            .ok_or_else(|| Error::ResourceBudget(format!("Ext¹ has more than {budget} classes")))?;
        let p = self.prime() as u64;
        let widths: Vec<u32> = if T::IS_FIELD {
            vec![1; self.module.ngens()]
        } else {
            self.module.torsion().to_vec()
        };
        Ok(ClassIter {
            pres: self,
            widths,
            p,
            next: 0,
            total,
        })
    }

    pub fn all_classes(&self, budget: u64) -> Result<Vec<ExtClass<T>>> {
        Ok(self.enumerate(budget)?.collect())
    }

    /// The D-generators of Ext¹ as classes.
    pub fn generators(&self) -> Vec<ExtClass<T>> {
        (0..self.module.ngens()).map(|j| self.class(self.module.unit_vec(j))).collect()
    }

    /// Coordinates (in D^{ngens}, relations included) of the classes whose cocycles
    /// take values in the submodule of N spanned by `sub`.
    pub fn classes_valued_in(&self, sub: &Matrix<T>) -> Matrix<T> {
        let target = blocks(&self.n.r_span(sub).hstack(&self.n.relations()), self.res.betti[1]);
        let g = self.module.ngens();
        let p = self.prime();
        if g == 0 {
            return Matrix::zeros(p, 0, 0);
        }
        span_or_zero(&crate::dcoeff::preimage(&self.sq.emb, &target).hstack(&self.module.relations()), g)
    }

    /// The D-span of Σ x_i·Ext¹ (relations included).
    pub fn ideal_lattice(&self, gens: &[Vec<T>]) -> Matrix<T> {
        let g = self.module.ngens();
        let mut cols = Vec::new();
        for x in gens {
            let a = self.module.elem_action(x);
            for j in 0..g {
                cols.push(a.mul_vec(&self.module.unit_vec(j)));
            }
        }
        let m = Matrix::from_cols(self.prime(), g, &cols).hstack(&self.module.relations());
        span_or_zero(&m, g)
    }

    pub fn in_lattice(&self, lat: &Matrix<T>, c: &ExtClass<T>) -> bool {
        c.coords.is_empty() || crate::dcoeff::in_span(lat, &c.coords)
    }

    /// Lattices with relations included, compared as submodules of Ext¹.
    pub fn same_lattice(&self, a: &Matrix<T>, b: &Matrix<T>) -> bool {
        crate::dcoeff::span_contains(a, b) && crate::dcoeff::span_contains(b, a)
    }

    /// Number of classes in a lattice containing the relations.
    pub fn lattice_length(&self, lat: &Matrix<T>) -> Result<u64> {
        let (sub, _) = self.module.submodule(lat);
        sub.length()
    }

    /// Full matrix N × F1 (D-coordinates) of the map F1 → N given by a cocycle.
    pub(crate) fn cocycle_matrix(&self, c: &[T]) -> Matrix<T> {
        let n = &self.n;
        let k = n.ngens();
        let r = n.ring().rank();
        let b1 = self.res.betti[1];
        let ba: Vec<Matrix<T>> = (0..r).map(|i| n.basis_action(i)).collect();
        let mut cols = Vec::with_capacity(b1 * r);
        for j in 0..b1 {
            let cj = &c[j * k..(j + 1) * k];
            for b in &ba {
                cols.push(n.reduce(&b.mul_vec(cj)));
            }
        }
        Matrix::from_cols(n.prime(), k, &cols)
    }
}

/// Iterator over all classes of a finite Ext¹.
pub struct ClassIter<'a, T> {
    pres: &'a ExtPresentation<T>,
    widths: Vec<u32>,
    p: u64,
    next: u64,
    total: u64,
}

impl<T: Coeff> Iterator for ClassIter<'_, T> {
    type Item = ExtClass<T>;

    fn next(&mut self) -> Option<ExtClass<T>> {
        if self.next >= self.total {
            return None;
        }
        let mut code = self.next;
        self.next += 1;
        let p = self.p;
        let prime = self.pres.prime();
        let mut coords = vec![T::zero(prime); self.widths.len()];
        // the last coordinate varies fastest
        for (i, &w) in self.widths.iter().enumerate().rev() {
            let mut digits = Vec::with_capacity(w as usize);
            for _ in 0..w {
                digits.push((code % p) as u16);
                code /= p;
            }
            coords[i] = T::from_digits(prime, &digits);
        }
        Some(ExtClass { coords })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = (self.total - self.next) as usize;
        (r, Some(r))
    }
}
