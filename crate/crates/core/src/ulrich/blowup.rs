use std::collections::HashSet;
use std::sync::Arc;

use super::mult::{is_ulrich, UlrichTest};

/// Classes per Ext¹ on which `ext1_ul` reruns the full Ulrich test.
pub const FULL_ULRICH_CHECKS: usize = 4;
use crate::dcoeff::{Coeff, Local};
use crate::ext::{ext1, ExtClass, ExtPresentation, Ses};
use crate::modules::{CoeffModule, ModMap};
use crate::rings::{CurveRing, FracIdeal, RingHandle, REDUCTION_BUDGET};
use crate::subfun::{ext1_sub, ext1_subset, NumFn, SubExt};
use crate::{Error, Result};

/// Ext¹_{Ul}(M, N) next to Ext¹(M, N)^{ν_I}.
pub struct UlExt<T> {
    pub ul: SubExt<T>,
    pub nu: SubExt<T>,
}

impl<T: Coeff> UlExt<T> {
    pub fn agree(&self) -> bool {
        self.ul.same_classes(&self.nu)
    }
}

/// Classes with I-Ulrich middle object, compared with the ν_I-additive classes.
pub fn ext1_ul<T: Coeff>(pres: &ExtPresentation<T>, i: &FracIdeal<T>, s: u8, budget: u64) -> Result<UlExt<T>> {
    for (name, m) in [("M", &pres.m), ("N", &pres.n)] {
        if !is_ulrich(m, i, s)? {
            return Err(Error::NotUlrich(format!("{name} is not in Ul^{s}_I")));
        }
    }
    let ul = ext1_ul_classes(pres, i, s, budget)?;
    let nu = ext1_sub(pres, &[NumFn::Nu(i.clone())], budget)?;
    Ok(UlExt { ul, nu })
}

/// Classes of Ext¹(M, N) whose middle term lies in Ul^s_I. The first few classes
/// are rechecked with the full `is_ulrich`.
pub fn ext1_ul_classes<T: Coeff>(pres: &ExtPresentation<T>, i: &FracIdeal<T>, s: u8, budget: u64) -> Result<SubExt<T>> {
    let fast = UlrichTest::new(i, s)?;
    let ul = ext1_subset(pres, budget, |q| fast.test(&q.x))?;
    for c in pres.all_classes(budget)?.iter().take(FULL_ULRICH_CHECKS) {
        if is_ulrich(&pres.middle(c).x, i, s)? != ul.contains(c) {
            return Err(Error::Internal("Ulrich tests disagree on a middle term".into()));
        }
    }
    Ok(ul)
}

/// B(I) as a ring over the same D as R.
pub fn blowup_ring(i: &FracIdeal<Local>) -> Result<Arc<CurveRing>> {
    Ok(i.blow_up(REDUCTION_BUDGET)?.0)
}

/// The B-module structure on a torsion-free R-module stable under B: each
/// generator y of B acts as (s^k y acting on M)/s^k.
pub fn view_over(b: &Arc<CurveRing>, m: &Arc<CoeffModule<Local>>) -> Result<Arc<CoeffModule<Local>>> {
    let r = m.ring();
    if !m.is_mcm() {
        return Err(Error::NotUlrich("module has torsion".into()));
    }
    let p = r.prime();
    let mut acts = Vec::new();
    for g in b.gen_elems() {
        let y = b.to_ambient(g);
        let (mut k, mut scaled) = (0u32, y.clone());
        let elem = loop {
            if let Some(e) = r.from_ambient(&scaled) {
                break e;
            }
            k += 1;
            if k > 64 {
                return Err(Error::Internal("no power of s moves B into R".into()));
            }
            scaled = y.iter().map(|c| c.mul(&Local::t_pow(p, k))).collect();
        };
        let a = m.elem_action(&elem);
        let d = Local::t_pow(p, k);
        let mut out = a.clone();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let q = a
                    .get(i, j)
                    .div_exact(&d)
                    .ok_or_else(|| Error::NotUlrich("module is not stable under B(I)".into()))?;
                out.set(i, j, q);
            }
        }
        acts.push(out);
    }
    CoeffModule::from_parts(b, Vec::new(), m.free_rank(), acts)
        .map(Arc::new)
        .map_err(|_| Error::NotUlrich("extended actions do not define a B(I)-module".into()))
}

/// M restricted to R ⊆ B.
pub fn restrict_scalars(x: &Arc<CoeffModule<Local>>, r: &Arc<CurveRing>) -> Result<Arc<CoeffModule<Local>>> {
    let b = x.ring();
    let acts = r
        .gen_elems()
        .iter()
        .map(|g| {
            let e = b
                .from_ambient(&r.to_ambient(g))
                .ok_or_else(|| Error::Invalid("R is not contained in the ring of the module".into()))?;
            Ok(x.elem_action(&e))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Arc::new(CoeffModule::from_parts(r, x.torsion().to_vec(), x.free_rank(), acts)?))
}

pub fn restrict_to_blowup(m: &Arc<CoeffModule<Local>>, i: &FracIdeal<Local>) -> Result<Arc<CoeffModule<Local>>> {
    if !is_ulrich(m, i, 1)? {
        return Err(Error::NotUlrich("module is not I-Ulrich".into()));
    }
    view_over(&blowup_ring(i)?, m)
}

/// Ext¹ over B(I) and its comparison with the Ulrich classes over R.
pub struct BlowupExt {
    pub ring: Arc<RingHandle<Local>>,
    pub pres: ExtPresentation<Local>,
    pub b_classes: u64,
    pub ul_classes: u64,
    /// Restriction of scalars is injective on classes and hits exactly the Ulrich classes.
    pub bijection: bool,
}

pub fn ext1_over_blowup(m: &Arc<CoeffModule<Local>>, n: &Arc<CoeffModule<Local>>, i: &FracIdeal<Local>, budget: u64) -> Result<BlowupExt> {
    for x in [m, n] {
        if !is_ulrich(x, i, 1)? {
            return Err(Error::NotUlrich("module is not I-Ulrich".into()));
        }
    }
    let r = m.ring();
    let b = blowup_ring(i)?;
    let (mb, nb) = (view_over(&b, m)?, view_over(&b, n)?);
    let pb = ext1(&mb, &nb)?;
    let pr = ext1(m, n)?;
    let ul = ext1_ul_classes(&pr, i, 1, budget)?;
    let mut image: HashSet<ExtClass<Local>> = HashSet::new();
    let mut count = 0u64;
    for c in pb.all_classes(budget)? {
        count += 1;
        let s = pb.middle(&c);
        let xr = restrict_scalars(&s.x, r)?;
        let sr = Ses::new_unchecked(ModMap::new_unchecked(n, &xr, s.i.mat.clone()), ModMap::new_unchecked(&xr, m, s.p.mat.clone()));
        image.insert(pr.classify(&sr)?);
    }
    let bijection = image.len() as u64 == count && ul.same_as(&image);
    Ok(BlowupExt {
        ring: b,
        pres: pb,
        b_classes: count,
        ul_classes: ul.len() as u64,
        bijection,
    })
}
