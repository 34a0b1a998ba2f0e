use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;

use super::numfn::{check_subadditive, NumFn};
use crate::dcoeff::{span_basis, Coeff, Matrix};
use crate::ext::{hom_post, hom_pre, ExtClass, ExtPresentation, Ses};
use crate::modules::{hom, CoeffModule, ModMap};
use crate::Result;

/// Pairs checked exhaustively by the closure certificate; beyond this, sums are
/// checked against a fixed prefix of the set.
pub const CERT_PAIR_BUDGET: usize = 1 << 16;
const CERT_PREFIX: usize = 64;

/// Closure evidence for a subset of Ext¹.
#[derive(Clone, Debug, Default)]
pub struct Certificate {
    pub sums_checked: u64,
    pub scalars_checked: u64,
    /// Number of classes in the R-span of the subset.
    pub span_size: u64,
    pub violations: Vec<String>,
}

impl Certificate {
    pub fn is_closed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A subset of Ext¹(M, N) given by a membership test on middle objects.
pub struct SubExt<T> {
    pub classes: Vec<ExtClass<T>>,
    /// |Ext¹(M, N)|.
    pub total: u64,
    /// The R-span of the subset, as a module.
    pub span: Arc<CoeffModule<T>>,
    pub certificate: Certificate,
    set: HashSet<ExtClass<T>>,
}

impl<T: Coeff> SubExt<T> {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, c: &ExtClass<T>) -> bool {
        self.set.contains(c)
    }

    /// Same class set.
    pub fn same_classes(&self, o: &SubExt<T>) -> bool {
        self.set == o.set
    }

    pub fn same_as(&self, o: &HashSet<ExtClass<T>>) -> bool {
        &self.set == o
    }

    /// Torsion exponents and rank of the span.
    pub fn invariants(&self) -> (Vec<u32>, usize) {
        (self.span.torsion().to_vec(), self.span.free_rank())
    }
}

/// Classes whose middle object passes `admit`, with a closure certificate.
pub fn ext1_subset<T, F>(pres: &ExtPresentation<T>, budget: u64, admit: F) -> Result<SubExt<T>>
where
    T: Coeff,
    F: Fn(&Ses<T>) -> Result<bool> + Sync,
{
    let all = pres.all_classes(budget)?;
    let keep: Vec<bool> = all.par_iter().map(|c| admit(&pres.middle(c))).collect::<Result<_>>()?;
    let classes: Vec<ExtClass<T>> = all.iter().zip(&keep).filter(|(_, &k)| k).map(|(c, _)| c.clone()).collect();
    let set: HashSet<ExtClass<T>> = classes.iter().cloned().collect();
    let (span, certificate) = certify(pres, &classes, &set);
    Ok(SubExt {
        classes,
        total: all.len() as u64,
        span,
        certificate,
        set,
    })
}

fn certify<T: Coeff>(pres: &ExtPresentation<T>, classes: &[ExtClass<T>], set: &HashSet<ExtClass<T>>) -> (Arc<CoeffModule<T>>, Certificate) {
    let ext = &pres.module;
    let ring = pres.m.ring();
    let pr = pres.prime();
    let mut cert = Certificate::default();
    let cols: Vec<Vec<T>> = classes.iter().map(|c| c.coords.clone()).collect();
    let lat = Matrix::from_cols(pr, ext.ngens(), &cols).hstack(&ext.relations());
    let lat = if lat.cols() == 0 { lat } else { span_basis(&ext.r_span(&lat)) };
    let span = ext.submodule(&lat).0;
    cert.span_size = span
        .length()
        .ok()
        .and_then(|l| (pr as u64).checked_pow(l as u32))
        .unwrap_or(u64::MAX);
    if cert.span_size != classes.len() as u64 {
        cert.violations.push(format!("span has {} classes, subset has {}", cert.span_size, classes.len()));
    }
    let partners: &[ExtClass<T>] = if classes.len() * classes.len() <= CERT_PAIR_BUDGET {
        classes
    } else {
        &classes[..CERT_PREFIX.min(classes.len())]
    };
    for a in classes {
        for b in partners {
            cert.sums_checked += 1;
            let c = pres.add(a, b);
            if !set.contains(&c) {
                cert.violations.push(format!("{:?} + {:?} = {:?} leaves the subset", a.coords, b.coords, c.coords));
            }
        }
    }
    let mut scalars: Vec<Vec<T>> = (0..ring.rank())
        .map(|i| {
            let mut e = ring.zero();
            e[i] = T::one(pr);
            e
        })
        .collect();
    scalars.push(ring.scalar(T::from_i64(pr, -1)));
    if !T::IS_FIELD {
        scalars.push(ring.scalar(T::t_pow(pr, 1)));
    }
    for a in classes {
        for r in &scalars {
            cert.scalars_checked += 1;
            let c = pres.scalar(r, a);
            if !set.contains(&c) {
                cert.violations.push(format!("{} · {:?} = {:?} leaves the subset", ring.fmt_elem(r), a.coords, c.coords));
            }
        }
    }
    (span, cert)
}

/// Ext¹(M, N)^{φ_1, …, φ_k}: classes on which every function is additive.
pub fn ext1_sub<T: Coeff>(pres: &ExtPresentation<T>, fns: &[NumFn<T>], budget: u64) -> Result<SubExt<T>> {
    let ends: Vec<(u64, u64)> = fns
        .iter()
        .map(|f| Ok((f.eval(&pres.n)?, f.eval(&pres.m)?)))
        .collect::<Result<_>>()?;
    ext1_subset(pres, budget, |s| {
        for (f, &(n, m)) in fns.iter().zip(&ends) {
            let x = f.eval(&s.x)?;
            check_subadditive(f, n, x, m)?;
            if x != n + m {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

/// Which side the test module sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomSide {
    /// Hom(C, σ)
    From,
    /// Hom(σ, C)
    To,
}

/// Exactness of Hom(C, σ) or Hom(σ, C), next to the λ-additivity it should match.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomExactness {
    pub exact: bool,
    pub additive: bool,
}

impl HomExactness {
    pub fn agree(&self) -> bool {
        self.exact == self.additive
    }
}

pub fn hom_exactness_subfunctor<T: Coeff>(c: &Arc<CoeffModule<T>>, side: HomSide, s: &Ses<T>) -> Result<HomExactness> {
    c.length()?;
    let (exact, f) = match side {
        HomSide::From => {
            let (hx, hm) = (hom(c, &s.x)?, hom(c, &s.m)?);
            let mat = hom_post(&hx, &hm, &s.p);
            let exact = ModMap::new_unchecked(&hx.module, &hm.module, mat).is_surjective();
            (exact, NumFn::LenHomFrom(c.clone()))
        }
        HomSide::To => {
            let (hx, hn) = (hom(&s.x, c)?, hom(&s.n, c)?);
            let mat = hom_pre(&hx, &hn, &s.i);
            let exact = ModMap::new_unchecked(&hx.module, &hn.module, mat).is_surjective();
            (exact, NumFn::LenHomTo(c.clone()))
        }
    };
    Ok(HomExactness {
        exact,
        additive: f.is_additive(s)?,
    })
}

/// Ext¹(M, N)^μ as a lattice: over a minimal presentation F1 → F0 → M, a class is
/// μ-additive exactly when its cocycle F1 → N lands in mN.
pub fn ext1_mu_lattice<T: Coeff>(pres: &ExtPresentation<T>) -> Matrix<T> {
    let n = &pres.n;
    pres.classes_valued_in(&n.m_times(&n.full()))
}
