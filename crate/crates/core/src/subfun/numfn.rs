use std::fmt;
use std::sync::Arc;

use crate::dcoeff::Coeff;
use crate::ext::{tor, tor1, Ses};
use crate::modules::{hom, CoeffModule};
use crate::rings::FracIdeal;
use crate::{Error, Result};

/// Largest n tried when waiting for λ(Tor₁(M, R/I^{n+1})) to settle.
pub const ET_MAX_N: u32 = 24;
/// Number of consecutive equal values that count as stable.
pub const STABLE_WINDOW: usize = 3;

/// A numerical function on modules.
#[derive(Clone)]
pub enum NumFn<T> {
    Mu,
    Nu(FracIdeal<T>),
    LenHomFrom(Arc<CoeffModule<T>>),
    LenHomTo(Arc<CoeffModule<T>>),
    LenTensor(Arc<CoeffModule<T>>),
    Et(FracIdeal<T>),
}

impl<T: Coeff> fmt::Debug for NumFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn finite_length<T: Coeff>(c: &CoeffModule<T>) -> Result<()> {
    c.length().map(|_| ())
}

impl<T: Coeff> NumFn<T> {
    pub fn name(&self) -> String {
        match self {
            NumFn::Mu => "MU".into(),
            NumFn::Nu(i) => format!("NU({})", i.mu()),
            NumFn::LenHomFrom(c) => format!("LEN_HOM_FROM({:?})", c.torsion()),
            NumFn::LenHomTo(c) => format!("LEN_HOM_TO({:?})", c.torsion()),
            NumFn::LenTensor(c) => format!("LEN_TENSOR({:?})", c.torsion()),
            NumFn::Et(i) => format!("ET({})", i.mu()),
        }
    }

    pub fn eval(&self, m: &Arc<CoeffModule<T>>) -> Result<u64> {
        match self {
            NumFn::Mu => Ok(m.mu() as u64),
            NumFn::Nu(i) => m.nu(i),
            NumFn::LenHomFrom(c) => {
                finite_length(c)?;
                hom(c, m)?.module.length()
            }
            NumFn::LenHomTo(c) => {
                finite_length(c)?;
                hom(m, c)?.module.length()
            }
            NumFn::LenTensor(c) => {
                finite_length(c)?;
                tor(m, c, 0).length()
            }
            NumFn::Et(i) => et_value(i, m).map(|(v, _)| v),
        }
    }

    /// φ(X) = φ(N) + φ(M); subadditivity is checked on the way.
    pub fn is_additive(&self, s: &Ses<T>) -> Result<bool> {
        let (n, x, m) = (self.eval(&s.n)?, self.eval(&s.x)?, self.eval(&s.m)?);
        check_subadditive(self, n, x, m)?;
        Ok(x == n + m)
    }
}

pub(crate) fn check_subadditive<T: Coeff>(f: &NumFn<T>, n: u64, x: u64, m: u64) -> Result<()> {
    if x > n + m {
        return Err(Error::Internal(format!("{} is not subadditive: {x} > {n} + {m}", f.name())));
    }
    Ok(())
}

/// Stable value of n ↦ λ(Tor₁(M, R/I^{n+1})) and the values seen.
pub fn et_value<T: Coeff>(i: &FracIdeal<T>, m: &Arc<CoeffModule<T>>) -> Result<(u64, Vec<u64>)> {
    if !m.ring().is_curve() {
        return Err(Error::WrongFamily("ET is defined over one-dimensional rings".into()));
    }
    if !m.is_mcm() {
        return Err(Error::NotCm);
    }
    let mut seen = Vec::new();
    let mut pw = i.clone();
    for n in 0..=ET_MAX_N {
        if n > 0 {
            pw = pw.product(i);
        }
        seen.push(tor1(m, &pw)?.length()?);
        if let Some(v) = stable_tail(&seen) {
            return Ok((v, seen));
        }
    }
    Err(Error::StabilizationBudget(format!("ET values {seen:?} not stable for n <= {ET_MAX_N}")))
}

/// The common value of the last STABLE_WINDOW entries, if they agree.
pub fn stable_tail(v: &[u64]) -> Option<u64> {
    if v.len() < STABLE_WINDOW {
        return None;
    }
    let tail = &v[v.len() - STABLE_WINDOW..];
    tail.iter().all(|&x| x == tail[0]).then_some(tail[0])
}
