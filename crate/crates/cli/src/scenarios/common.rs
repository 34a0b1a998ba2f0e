use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subext_core::dcoeff::{Coeff, Local, Matrix};
use subext_core::ext::{ExtClass, ExtPresentation};
use subext_core::modules::CoeffModule;
use subext_core::rings::{FracIdeal, RingHandle};
use subext_core::subfun::{ext1_sub, NumFn, SubExt};
use subext_core::ulrich::{blowup_ring, frac_elem_in_r};
use subext_core::{Error, Result};

use super::Ctx;
use crate::report::Instance;

pub type M<T> = Arc<CoeffModule<T>>;

/// Runs `f`; a core error becomes an errored instance carrying the same inputs.
pub fn guarded(base: Instance, f: impl FnOnce(Instance) -> Result<Instance>) -> Instance {
    let keep = base.clone();
    f(base).unwrap_or_else(|e| keep.error(&e))
}

pub fn rng(ctx: &Ctx, k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(ctx.sub_seed(k))
}

/// Enumeration of Ext¹ classes admitted by additivity of `fns`, charged to the run.
pub fn sub<T: Coeff>(ctx: &Ctx, e: &ExtPresentation<T>, fns: &[NumFn<T>]) -> Result<SubExt<T>> {
    let s = ext1_sub(e, fns, ctx.budget)?;
    ctx.charge(s.total);
    Ok(s)
}

/// Every class of a sub-lattice of Ext¹, without visiting the rest of Ext¹.
pub fn lattice_classes<T: Coeff>(ctx: &Ctx, e: &ExtPresentation<T>, lat: &Matrix<T>) -> Result<Vec<ExtClass<T>>> {
    let p = e.prime();
    let (s, inc) = e.module.submodule(lat);
    let len = s.length()?;
    let size = (p as u64).checked_pow(len as u32).filter(|&n| n <= ctx.budget);
    let Some(size) = size else {
        return Err(Error::ResourceBudget(format!("sub-lattice has {p}^{len} classes")));
    };
    ctx.charge(size);
    let widths: Vec<usize> = s.row_mods().iter().map(|m| if T::IS_FIELD { 1 } else { m.unwrap_or(0) as usize }).collect();
    let total: usize = widths.iter().sum();
    let mut digits = vec![0u16; total];
    let mut out = Vec::with_capacity(size as usize);
    loop {
        let mut at = 0;
        let v: Vec<T> = widths
            .iter()
            .map(|&w| {
                let x = T::from_digits(p, &digits[at..at + w]);
                at += w;
                x
            })
            .collect();
        out.push(e.class(inc.mul_vec(&v)));
        let mut i = 0;
        while i < total && digits[i] + 1 == p {
            digits[i] = 0;
            i += 1;
        }
        if i == total {
            break;
        }
        digits[i] += 1;
    }
    Ok(out)
}

/// The classes of a lattice, as a set.
pub fn lattice_set<T: Coeff>(ctx: &Ctx, e: &ExtPresentation<T>, lat: &Matrix<T>) -> Result<HashSet<ExtClass<T>>> {
    Ok(lattice_classes(ctx, e, lat)?.into_iter().collect())
}

/// `count` random classes (the zero class first).
pub fn random_classes<T: Coeff>(e: &ExtPresentation<T>, count: usize, rng: &mut ChaCha8Rng) -> Vec<ExtClass<T>> {
    let p = e.prime();
    let mods = e.module.row_mods();
    let mut out = vec![e.zero()];
    for _ in 1..count {
        let coords = mods
            .iter()
            .map(|m| {
                let d: Vec<u16> = (0..m.unwrap_or(3).max(1)).map(|_| rng.gen_range(0..p)).collect();
                T::from_digits(p, &d)
            })
            .collect();
        out.push(e.class(coords));
    }
    out
}

/// R-coordinates of the generators of an integral ideal.
pub fn gens_in_r<T: Coeff>(i: &FracIdeal<T>) -> Result<Vec<Vec<T>>> {
    i.gen_elems().iter().map(|g| frac_elem_in_r(i.ring(), g)).collect()
}

pub fn quot<T: Coeff>(i: &FracIdeal<T>) -> Result<M<T>> {
    CoeffModule::from_quotient(i)
}

pub fn ideal_mod<T: Coeff>(i: &FracIdeal<T>) -> M<T> {
    CoeffModule::from_frac_ideal(i)
}

pub fn k<T: Coeff>(r: &Arc<RingHandle<T>>) -> M<T> {
    CoeffModule::residue_field(r)
}

pub fn sum<T: Coeff>(r: &Arc<RingHandle<T>>, parts: &[M<T>]) -> M<T> {
    CoeffModule::direct_sum(r, parts)
}

/// R/(t^a) over a DVR, or R when a = 0.
pub fn dvr_quot(r: &Arc<RingHandle<Local>>, a: i64) -> Result<M<Local>> {
    if a == 0 {
        return Ok(CoeffModule::free(r, 1));
    }
    quot(&FracIdeal::monomial(r, &[a]))
}

/// The blow-up B(I) as an R-module.
pub fn blowup_mod(i: &FracIdeal<Local>) -> Result<M<Local>> {
    let (b, _) = i.blow_up_module(subext_core::rings::REDUCTION_BUDGET)?;
    Ok(ideal_mod(&b))
}

pub fn blowup_gorenstein(i: &FracIdeal<Local>) -> Result<bool> {
    let b = blowup_ring(i)?;
    Ok(b.semigroup().map(|s| s.is_symmetric()).unwrap_or(false))
}

/// A small pool of MCM modules over a curve ring: m, B(m), ω, a few monomial
/// fractional ideals and direct sums of two of them.
pub fn mcm_pool(r: &Arc<RingHandle<Local>>) -> Result<Vec<(String, M<Local>)>> {
    let m = FracIdeal::maximal(r);
    let mut out: Vec<(String, M<Local>)> = vec![
        ("m".into(), ideal_mod(&m)),
        ("B(m)".into(), blowup_mod(&m)?),
        ("ω".into(), CoeffModule::canonical_module(r)?),
    ];
    let sg = r.semigroup().expect("curve ring");
    let e = sg.multiplicity() as i64;
    let mut ideals: Vec<(i64, FracIdeal<Local>)> = Vec::new();
    for d in 1..e.min(4) {
        let i = FracIdeal::monomial(r, &[0, d]);
        if !ideals.iter().any(|(_, j)| j.equals(&i)) && !i.equals(&FracIdeal::unit(r)) {
            ideals.push((d, i));
        }
    }
    for (d, i) in ideals.iter().take(2) {
        out.push((format!("(1,t^{d})"), ideal_mod(i)));
    }
    let base = out.len();
    for a in 0..base.min(3) {
        let b = (a + 1) % base;
        let label = format!("{}⊕{}", out[a].0, out[b].0);
        let s = sum(r, &[out[a].1.clone(), out[b].1.clone()]);
        out.push((label, s));
    }
    Ok(out)
}

/// Small |Ext¹| only: cases over this size are not enumerated in sampling loops.
pub fn small<T: Coeff>(e: &ExtPresentation<T>, cap: u64) -> bool {
    e.size().map_or(false, |s| s <= cap)
}
