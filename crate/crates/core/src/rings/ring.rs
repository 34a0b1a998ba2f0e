use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::semigroup::Semigroup;
use crate::dcoeff::{is_prime, kernel_basis, Coeff, Fp, Local, Matrix, MAX_PRIME};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// F_p[vars] modulo a monomial ideal given by exponent vectors.
    Artin {
        vars: Vec<String>,
        ideal: Vec<Vec<u32>>,
    },
    Dvr,
    Semigroup {
        gens: Vec<u32>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    pub p: u16,
    pub family: Family,
    pub label: Option<String>,
}

#[derive(Clone, Debug)]
pub(crate) enum Shape {
    Artin {
        vars: Vec<String>,
        monos: Vec<Vec<u32>>,
        index: HashMap<Vec<u32>, usize>,
    },
    Curve {
        sg: Semigroup,
        e: u32,
        apery: Vec<u32>,
    },
}

/// A local ring R given as a free D-module with multiplication tables.
///
/// Elements are coordinate vectors in the D-basis of R: standard monomials for
/// Artinian rings, t^{w_r} (w_r the Apéry element of residue r) for curve rings.
/// For curve rings D = F_p[s]_(s) with s = t^e, and the generator t^e acts as the
/// scalar s; `gen_actions` lists only the remaining generators.
#[derive(Clone, Debug)]
pub struct RingHandle<T> {
    p: u16,
    label: String,
    pub(crate) shape: Shape,
    gen_names: Vec<String>,
    gen_elems: Vec<Vec<T>>,
    gen_actions: Vec<Matrix<T>>,
    basis_actions: Vec<Matrix<T>>,
    basis_words: Vec<Word>,
}

/// A basis element written as s^scalar · Π gen_i^{exps[i]}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub scalar: u32,
    pub exps: Vec<u32>,
}

pub type ArtinRing = RingHandle<Fp>;
pub type CurveRing = RingHandle<Local>;

fn check_prime(p: u16) -> Result<()> {
    if p > MAX_PRIME {
        return Err(Error::FieldTooLarge(p));
    }
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    Ok(())
}

impl RingHandle<Fp> {
    pub fn artin(p: u16, vars: &[&str], ideal: &[Vec<u32>]) -> Result<Self> {
        check_prime(p)?;
        let nv = vars.len();
        if ideal.iter().any(|m| m.len() != nv) {
            return Err(Error::Invalid("monomial arity differs from variable count".into()));
        }
        let mut bounds = Vec::with_capacity(nv);
        for i in 0..nv {
            let pure = ideal
                .iter()
                .filter(|m| m.iter().enumerate().all(|(j, &x)| j == i || x == 0))
                .map(|m| m[i])
                .min();
            match pure {
                Some(b) => bounds.push(b),
                None => return Err(Error::NotMPrimary(vars[i].to_string())),
            }
        }
        let in_ideal = |m: &[u32]| ideal.iter().any(|g| g.iter().zip(m).all(|(a, b)| a <= b));
        let mut monos = Vec::new();
        let mut cur = vec![0u32; nv];
        loop {
            if !in_ideal(&cur) {
                monos.push(cur.clone());
            }
            let mut k = 0;
            while k < nv {
                cur[k] += 1;
                if cur[k] < bounds[k] {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
            if k == nv {
                break;
            }
        }
        monos.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then(b.cmp(a))
        });
        let index: HashMap<Vec<u32>, usize> =
            monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let n = monos.len();
        let shift_action = |d: &[u32]| {
            let mut a = Matrix::zeros(p, n, n);
            for (j, m) in monos.iter().enumerate() {
                let prod: Vec<u32> = m.iter().zip(d).map(|(x, y)| x + y).collect();
                if let Some(&i) = index.get(&prod) {
                    a.set(i, j, Fp::new(p, 1));
                }
            }
            a
        };
        let basis_actions: Vec<Matrix<Fp>> = monos.iter().map(|m| shift_action(m)).collect();
        let basis_words = monos
            .iter()
            .map(|m| Word {
                scalar: 0,
                exps: m.clone(),
            })
            .collect();
        let mut gen_elems = Vec::new();
        let mut gen_actions = Vec::new();
        for i in 0..nv {
            let mut d = vec![0u32; nv];
            d[i] = 1;
            gen_actions.push(shift_action(&d));
            let mut v = vec![Fp::new(p, 0); n];
            if let Some(&j) = index.get(&d) {
                v[j] = Fp::new(p, 1);
            }
            gen_elems.push(v);
        }
        let ring = RingHandle {
            p,
            label: String::new(),
            shape: Shape::Artin {
                vars: vars.iter().map(|s| s.to_string()).collect(),
                monos,
                index,
            },
            gen_names: vars.iter().map(|s| s.to_string()).collect(),
            gen_elems,
            gen_actions,
            basis_actions,
            basis_words,
        };
        ring.validate()?;
        Ok(ring)
    }
}

impl RingHandle<Local> {
    pub fn dvr(p: u16) -> Result<Self> {
        Self::curve(p, &[1], None)
    }

    pub fn numerical(p: u16, gens: &[u32]) -> Result<Self> {
        Self::curve(p, gens, None)
    }

    /// F_p[[t^S]] over D = F_p[t^e]; `e` defaults to the multiplicity of S.
    pub fn curve(p: u16, gens: &[u32], e: Option<u32>) -> Result<Self> {
        check_prime(p)?;
        let sg = Semigroup::new(gens)?;
        let e = e.unwrap_or(sg.multiplicity());
        if e == 0 || !sg.contains(e as i64) {
            return Err(Error::Invalid(format!("{e} is not in the semigroup")));
        }
        let apery = sg.apery(e);
        let n = e as usize;
        let mono_action = |g: u32| {
            let mut a = Matrix::zeros(p, n, n);
            for (i, &w) in apery.iter().enumerate() {
                let v = w + g;
                let r = (v % e) as usize;
                let q = (v - apery[r]) / e;
                a.set(r, i, Local::t_pow(p, q));
            }
            a
        };
        let basis_actions: Vec<Matrix<Local>> = apery.iter().map(|&w| mono_action(w)).collect();
        let others: Vec<u32> = sg.gens().iter().copied().filter(|&g| g != e).collect();
        let gen_actions = others.iter().map(|&g| mono_action(g)).collect();
        let gen_elems = others
            .iter()
            .map(|&g| {
                let mut v = vec![Local::zero(p); n];
                let r = (g % e) as usize;
                v[r] = Local::t_pow(p, (g - apery[r]) / e);
                v
            })
            .collect();
        let ring = RingHandle {
            p,
            label: String::new(),
            gen_names: others.iter().map(|g| format!("t^{g}")).collect(),
            basis_words: curve_words(&sg, e, &apery, &others),
            shape: Shape::Curve { sg, e, apery },
            gen_elems,
            gen_actions,
            basis_actions,
        };
        ring.validate()?;
        Ok(ring)
    }
}

/// Writes each Apéry element as a sum of the generators.
fn curve_words(sg: &Semigroup, e: u32, apery: &[u32], others: &[u32]) -> Vec<Word> {
    let top = *apery.iter().max().unwrap() as usize;
    let mut rep: Vec<Option<Word>> = vec![None; top + 1];
    rep[0] = Some(Word {
        scalar: 0,
        exps: vec![0; others.len()],
    });
    for v in 1..=top {
        if !sg.contains(v as i64) {
            continue;
        }
        if v >= e as usize {
            if let Some(w) = &rep[v - e as usize] {
                let mut w = w.clone();
                w.scalar += 1;
                rep[v] = Some(w);
                continue;
            }
        }
        for (k, &g) in others.iter().enumerate() {
            if v >= g as usize {
                if let Some(w) = &rep[v - g as usize] {
                    let mut w = w.clone();
                    w.exps[k] += 1;
                    rep[v] = Some(w);
                    break;
                }
            }
        }
    }
    apery
        .iter()
        .map(|&w| rep[w as usize].clone().expect("Apéry elements lie in the semigroup"))
        .collect()
}

/// A validated ring of either coefficient type.
#[derive(Clone, Debug)]
pub enum AnyRing {
    Artin(Arc<ArtinRing>),
    Curve(Arc<CurveRing>),
}

impl AnyRing {
    pub fn label(&self) -> &str {
        match self {
            AnyRing::Artin(r) => r.label(),
            AnyRing::Curve(r) => r.label(),
        }
    }
}

pub fn build_ring(spec: &RingSpec) -> Result<AnyRing> {
    let label = spec.label.clone().unwrap_or_default();
    Ok(match &spec.family {
        Family::Artin { vars, ideal } => {
            let v: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
            AnyRing::Artin(Arc::new(RingHandle::artin(spec.p, &v, ideal)?.with_label(&label)))
        }
        Family::Dvr => AnyRing::Curve(Arc::new(RingHandle::dvr(spec.p)?.with_label(&label))),
        Family::Semigroup { gens } => {
            AnyRing::Curve(Arc::new(RingHandle::numerical(spec.p, gens)?.with_label(&label)))
        }
    })
}

impl<T: Coeff> RingHandle<T> {
    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    fn validate(&self) -> Result<()> {
        let acts = &self.gen_actions;
        for a in acts {
            for b in acts {
                if a.mul(b) != b.mul(a) {
                    return Err(Error::Internal("generator actions do not commute".into()));
                }
            }
        }
        // basis products must agree with the multiplication table
        let n = self.rank();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.basis_actions[i].mul(&self.basis_actions[j]);
                let prod = self.basis_actions[i].mul_vec(&self.unit_vec(j));
                if lhs != self.mul_matrix(&prod) {
                    return Err(Error::Internal("multiplication table is not associative".into()));
                }
            }
        }
        Ok(())
    }

    fn unit_vec(&self, j: usize) -> Vec<T> {
        let mut v = vec![T::zero(self.p); self.rank()];
        v[j] = T::one(self.p);
        v
    }

    pub fn prime(&self) -> u16 {
        self.p
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Rank of R over D.
    pub fn rank(&self) -> usize {
        self.basis_actions.len()
    }

    pub fn dim(&self) -> usize {
        match self.shape {
            Shape::Artin { .. } => 0,
            Shape::Curve { .. } => 1,
        }
    }

    pub fn is_curve(&self) -> bool {
        matches!(self.shape, Shape::Curve { .. })
    }

    pub fn semigroup(&self) -> Option<&Semigroup> {
        match &self.shape {
            Shape::Curve { sg, .. } => Some(sg),
            _ => None,
        }
    }

    /// Exponent e with s = t^e the uniformizer of D (curve rings).
    pub fn scalar_exp(&self) -> Option<u32> {
        match &self.shape {
            Shape::Curve { e, .. } => Some(*e),
            _ => None,
        }
    }

    pub fn apery(&self) -> Option<&[u32]> {
        match &self.shape {
            Shape::Curve { apery, .. } => Some(apery),
            _ => None,
        }
    }

    pub fn variables(&self) -> Option<&[String]> {
        match &self.shape {
            Shape::Artin { vars, .. } => Some(vars),
            _ => None,
        }
    }

    pub fn monomials(&self) -> Option<&[Vec<u32>]> {
        match &self.shape {
            Shape::Artin { monos, .. } => Some(monos),
            _ => None,
        }
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    /// Actions of the non-scalar generators on R.
    pub fn gen_actions(&self) -> &[Matrix<T>] {
        &self.gen_actions
    }

    pub fn gen_elems(&self) -> &[Vec<T>] {
        &self.gen_elems
    }

    pub fn basis_actions(&self) -> &[Matrix<T>] {
        &self.basis_actions
    }

    pub fn basis_words(&self) -> &[Word] {
        &self.basis_words
    }

    pub fn zero(&self) -> Vec<T> {
        vec![T::zero(self.p); self.rank()]
    }

    pub fn one(&self) -> Vec<T> {
        self.unit_vec(0)
    }

    pub fn scalar(&self, c: T) -> Vec<T> {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    /// Generators of the maximal ideal.
    pub fn mgens(&self) -> Vec<Vec<T>> {
        let mut out = Vec::new();
        if self.is_curve() {
            out.push(self.scalar(T::t_pow(self.p, 1)));
        }
        out.extend(self.gen_elems.iter().cloned());
        out
    }

    /// t^k for a curve ring, when k lies in the semigroup.
    pub fn t_pow(&self, k: u32) -> Option<Vec<T>> {
        match &self.shape {
            Shape::Curve { sg, e, apery } => {
                if !sg.contains(k as i64) {
                    return None;
                }
                let r = (k % e) as usize;
                let mut v = self.zero();
                v[r] = T::t_pow(self.p, (k - apery[r]) / e);
                Some(v)
            }
            _ => None,
        }
    }

    /// A monomial of an Artinian ring (zero when it lies in the ideal).
    pub fn monomial(&self, exps: &[u32]) -> Option<Vec<T>> {
        match &self.shape {
            Shape::Artin { vars, index, .. } => {
                if exps.len() != vars.len() {
                    return None;
                }
                let mut v = self.zero();
                if let Some(&j) = index.get(exps) {
                    v[j] = T::one(self.p);
                }
                Some(v)
            }
            _ => None,
        }
    }

    /// Matrix of multiplication by `a` on R.
    pub fn mul_matrix(&self, a: &[T]) -> Matrix<T> {
        let n = self.rank();
        let mut m = Matrix::zeros(self.p, n, n);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.basis_actions[i].scale(c));
            }
        }
        m
    }

    pub fn mul(&self, a: &[T], b: &[T]) -> Vec<T> {
        self.mul_matrix(a).mul_vec(b)
    }

    pub fn add(&self, a: &[T], b: &[T]) -> Vec<T> {
        a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
    }

    pub fn pow(&self, a: &[T], n: u32) -> Vec<T> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Image of `a` in k = R/m.
    pub fn residue(&self, a: &[T]) -> u16 {
        a[0].residue()
    }

    pub fn is_unit(&self, a: &[T]) -> bool {
        self.residue(a) != 0
    }

    pub fn is_nzd(&self, a: &[T]) -> bool {
        kernel_basis(&self.mul_matrix(a)).cols() == 0
    }

    /// Rank of the ambient D-module holding fractional ideals.
    pub fn amb_rank(&self) -> usize {
        self.rank()
    }

    /// Ambient coordinates: for curve rings the D-basis t^0..t^{e-1} of the
    /// integral closure, for Artinian rings R itself.
    pub fn to_ambient(&self, a: &[T]) -> Vec<T> {
        match &self.shape {
            Shape::Curve { e, apery, .. } => a
                .iter()
                .enumerate()
                .map(|(r, c)| c.mul(&T::t_pow(self.p, apery[r] / e)))
                .collect(),
            _ => a.to_vec(),
        }
    }

    /// Inverse of `to_ambient`, when the ambient vector lies in R.
    pub fn from_ambient(&self, v: &[T]) -> Option<Vec<T>> {
        match &self.shape {
            Shape::Curve { e, apery, .. } => v
                .iter()
                .enumerate()
                .map(|(r, c)| c.div_exact(&T::t_pow(self.p, apery[r] / e)))
                .collect(),
            _ => Some(v.to_vec()),
        }
    }

    /// R as a lattice in ambient coordinates.
    pub fn r_lattice(&self) -> Matrix<T> {
        let cols: Vec<Vec<T>> = (0..self.rank()).map(|i| self.to_ambient(&self.unit_vec(i))).collect();
        Matrix::from_cols(self.p, self.rank(), &cols)
    }

    /// Ambient vector of t^k, k >= 0 (curve rings).
    pub fn amb_t_pow(&self, k: u32) -> Vec<T> {
        let e = self.scalar_exp().expect("curve ring");
        let mut v = self.zero();
        v[(k % e) as usize] = T::t_pow(self.p, k / e);
        v
    }

    /// Multiplication by an ambient element on ambient coordinates.
    pub fn amb_mul_matrix(&self, v: &[T]) -> Matrix<T> {
        match &self.shape {
            Shape::Curve { e, .. } => {
                let n = *e as usize;
                let mut m: Matrix<T> = Matrix::zeros(self.p, n, n);
                for (k, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for r in 0..n {
                        let j = r + k;
                        let cur = m.get(j % n, r).add(&c.mul(&T::t_pow(self.p, (j / n) as u32)));
                        m.set(j % n, r, cur);
                    }
                }
                m
            }
            _ => self.mul_matrix(v),
        }
    }

    pub fn amb_mul(&self, a: &[T], b: &[T]) -> Vec<T> {
        self.amb_mul_matrix(a).mul_vec(b)
    }

    /// t-adic valuation of an ambient element (curve rings), `None` for zero.
    pub fn amb_val(&self, v: &[T]) -> Option<u32> {
        let e = self.scalar_exp()?;
        v.iter()
            .enumerate()
            .filter_map(|(r, c)| c.val().map(|q| q * e + r as u32))
            .min()
    }

    /// Human-readable form of a ring element.
    pub fn fmt_elem(&self, a: &[T]) -> String {
        let mut parts = Vec::new();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = self.p;
            let k = c.val().unwrap_or(0);
            let u = c.div_exact(&T::t_pow(p, k)).expect("valuation divides");
            let r = u.residue();
            let monomial = u.sub(&T::from_i64(p, r as i64)).is_zero();
            let base = match &self.shape {
                Shape::Curve { apery, e, .. } => {
                    let x = apery[i] + e * k;
                    if monomial {
                        let tp = if x == 0 { "1".to_string() } else { format!("t^{x}") };
                        parts.push(if r == 1 { tp } else { format!("{r}*{tp}") });
                        continue;
                    }
                    // D-coefficients are power series in s = t^e
                    let cs = format!("{c}").replace('t', "s");
                    parts.push(format!("({cs})*t^{}", apery[i]));
                    continue;
                }
                Shape::Artin { vars, monos, .. } => {
                    let f: Vec<String> = monos[i]
                        .iter()
                        .zip(vars)
                        .filter(|(e, _)| **e > 0)
                        .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                        .collect();
                    if f.is_empty() {
                        "1".into()
                    } else {
                        f.join("*")
                    }
                }
            };
            parts.push(if c.is_one() { base } else { format!("{c}*{base}") });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl<T: Coeff> fmt::Display for RingHandle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Artin { vars, .. } => {
                write!(f, "F_{}[{}]/I (dim_k = {})", self.p, vars.join(","), self.rank())
            }
            Shape::Curve { sg, e, .. } => {
                write!(f, "F_{}[[t^{:?}]] over F_{}[t^{}]", self.p, sg.gens(), self.p, e)
            }
        }
    }
}
