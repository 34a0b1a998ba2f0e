use std::sync::Arc;

use crate::dcoeff::{preimage, span_basis, span_contains, Coeff, Matrix};
use crate::modules::CoeffModule;
use crate::rings::{FracElem, FracIdeal, RingHandle, REDUCTION_BUDGET};
use crate::subfun::{stable_tail, STABLE_WINDOW};
use crate::{Error, Result};

/// Largest n used by the Hilbert-Samuel route.
pub const HILBERT_MAX_N: u32 = 24;

/// e(I, M) by two independent routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub e: u64,
    /// Dimension of M (0 or 1).
    pub dim: u8,
    /// λ(M/xM) − λ(0 :_M x) for a principal reduction x; λ(M) in dimension 0.
    pub by_reduction: u64,
    /// Stable value of λ(I^n M / I^{n+1} M) (dimension 1) or λ(M/I^{n+1} M) (dimension 0).
    pub by_hilbert: u64,
    pub hilbert_values: Vec<u64>,
    /// The reduction used, when one was needed.
    pub reduction: Option<String>,
}

pub fn module_dim<T: Coeff>(m: &CoeffModule<T>) -> u8 {
    u8::from(m.ring().is_curve() && m.free_rank() > 0)
}

/// M ∈ CM^s (the zero module belongs to every stratum).
pub fn in_cm<T: Coeff>(m: &CoeffModule<T>, s: u8) -> bool {
    if m.is_zero() {
        return true;
    }
    match (m.ring().is_curve(), s) {
        (false, 0) => true,
        (true, 0) => m.free_rank() == 0,
        (true, 1) => m.is_mcm(),
        _ => false,
    }
}

/// x as an element of R, when it lies in R.
pub fn frac_elem_in_r<T: Coeff>(ring: &RingHandle<T>, x: &FracElem<T>) -> Result<Vec<T>> {
    let d = T::t_pow(ring.prime(), x.shift);
    x.v.iter()
        .map(|c| c.div_exact(&d))
        .collect::<Option<Vec<T>>>()
        .and_then(|v| ring.from_ambient(&v))
        .ok_or_else(|| Error::Invalid("element is not in R".into()))
}

fn check_m_primary<T: Coeff>(i: &FracIdeal<T>) -> Result<()> {
    if !i.is_integral() {
        return Err(Error::NotMPrimary("ideal is not contained in R".into()));
    }
    match i.quotient_length() {
        Ok(0) => Err(Error::NotMPrimary("unit ideal".into())),
        Ok(_) => Ok(()),
        Err(_) => Err(Error::NotMPrimary("R/I has infinite length".into())),
    }
}

fn span_or_empty<T: Coeff>(m: &CoeffModule<T>, a: Matrix<T>) -> Matrix<T> {
    if a.cols() == 0 {
        Matrix::zeros(m.prime(), m.ngens(), 0)
    } else {
        span_basis(&a)
    }
}

/// A principal reduction of I as an element of R.
pub fn reduction_in_r<T: Coeff>(i: &FracIdeal<T>) -> Result<(Vec<T>, u32)> {
    let (x, n) = i.principal_reduction(REDUCTION_BUDGET)?;
    Ok((frac_elem_in_r(i.ring(), &x)?, n))
}

/// Lattice of x·M.
pub fn elem_times<T: Coeff>(m: &CoeffModule<T>, x: &[T]) -> Matrix<T> {
    span_or_empty(m, m.elem_action(x).hstack(&m.relations()))
}

pub fn multiplicity<T: Coeff>(i: &FracIdeal<T>, m: &Arc<CoeffModule<T>>) -> Result<MultiplicityReport> {
    check_m_primary(i)?;
    let dim = module_dim(m);
    let full = m.full();
    let mut values = Vec::new();
    if dim == 0 {
        let lm = m.length()?;
        let mut cur = full.clone();
        for _ in 0..=HILBERT_MAX_N {
            cur = m.lattice_times(&cur, i)?;
            values.push(m.sub_length(&full, &cur)?);
            if let Some(v) = stable_tail(&values) {
                if v != lm {
                    return Err(Error::Internal(format!("Hilbert-Samuel value {v} differs from λ(M) = {lm}")));
                }
                return Ok(MultiplicityReport {
                    e: lm,
                    dim,
                    by_reduction: lm,
                    by_hilbert: v,
                    hilbert_values: values,
                    reduction: None,
                });
            }
        }
        return Err(Error::StabilizationBudget(format!("λ(M/I^n M) = {values:?}")));
    }
    let (x, red) = reduction_in_r(i)?;
    let rel = m.relations();
    let xm = elem_times(m, &x);
    let ann = span_or_empty(m, preimage(&m.elem_action(&x), &rel).hstack(&rel));
    let by_reduction = m.sub_length(&full, &xm)? - m.sub_length(&ann, &rel)?;
    let mut prev = full;
    for _ in 0..=HILBERT_MAX_N {
        let next = m.lattice_times(&prev, i)?;
        values.push(m.sub_length(&prev, &next)?);
        prev = next;
        // differences are constant from the reduction number on, not before
        if values.len() < red as usize + STABLE_WINDOW {
            continue;
        }
        if let Some(v) = stable_tail(&values) {
            if v != by_reduction {
                return Err(Error::Internal(format!("multiplicity routes disagree: {by_reduction} vs {v}")));
            }
            return Ok(MultiplicityReport {
                e: v,
                dim,
                by_reduction,
                by_hilbert: v,
                hilbert_values: values,
                reduction: Some(i.ring().fmt_elem(&x)),
            });
        }
    }
    Err(Error::StabilizationBudget(format!("λ(I^n M/I^(n+1) M) = {values:?}")))
}

/// φ_I(M) = λ(M/IM) − e(I, M) for M ∈ CM^s.
pub fn phi_i<T: Coeff>(i: &FracIdeal<T>, m: &Arc<CoeffModule<T>>) -> Result<i64> {
    if !in_cm(m, module_dim(m)) {
        return Err(Error::NotCm);
    }
    let phi = m.nu(i)? as i64 - multiplicity(i, m)?.e as i64;
    if phi > 0 {
        return Err(Error::Internal(format!("φ_I = {phi} > 0")));
    }
    Ok(phi)
}

/// Membership in Ul^s_I without Hilbert functions: for M ∈ CM^s it is IM = xM
/// (x a principal reduction, s = 1) or IM = 0 (s = 0). The reduction is computed once.
#[derive(Clone)]
pub struct UlrichTest<T> {
    ideal: FracIdeal<T>,
    s: u8,
    x: Option<Vec<T>>,
}

impl<T: Coeff> UlrichTest<T> {
    pub fn new(i: &FracIdeal<T>, s: u8) -> Result<Self> {
        check_m_primary(i)?;
        let x = if s == 1 { Some(reduction_in_r(i)?.0) } else { None };
        Ok(UlrichTest { ideal: i.clone(), s, x })
    }

    pub fn test(&self, m: &Arc<CoeffModule<T>>) -> Result<bool> {
        if m.is_zero() {
            return Ok(true);
        }
        if !in_cm(m, self.s) {
            return Ok(false);
        }
        let im = m.ideal_times(&self.ideal)?;
        Ok(match (&self.x, module_dim(m)) {
            (Some(x), 1) => {
                let xm = elem_times(m, x);
                span_contains(&xm, &im) && span_contains(&im, &xm)
            }
            _ => m.sub_length(&m.full(), &im)? == m.length()?,
        })
    }
}

/// M ∈ Ul^s_I: M ∈ CM^s with λ(M/IM) = e(I, M).
pub fn is_ulrich<T: Coeff>(m: &Arc<CoeffModule<T>>, i: &FracIdeal<T>, s: u8) -> Result<bool> {
    if m.is_zero() {
        return Ok(true);
    }
    if !in_cm(m, s) {
        return Ok(false);
    }
    let by_phi = phi_i(i, m)? == 0;
    if s == 1 {
        let (x, _) = reduction_in_r(i)?;
        let im = m.ideal_times(i)?;
        let xm = elem_times(m, &x);
        let by_reduction = span_contains(&xm, &im) && span_contains(&im, &xm);
        if by_reduction != by_phi {
            return Err(Error::Internal("φ_I = 0 and IM = xM disagree".into()));
        }
    }
    Ok(by_phi)
}
