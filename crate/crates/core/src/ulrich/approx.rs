use std::sync::Arc;

use crate::dcoeff::{Coeff, Matrix};
use crate::ext::Ses;
use crate::modules::{hom, CoeffModule, ModMap};
use crate::rings::{canonical_ideal, FracIdeal, RingHandle};
use crate::{Error, Result};

fn singular_curve<T: Coeff>(r: &Arc<RingHandle<T>>) -> Result<()> {
    let sg = r
        .semigroup()
        .ok_or_else(|| Error::WrongFamily("needs a numerical semigroup ring".into()))?;
    if sg.multiplicity() == 1 {
        return Err(Error::Regular);
    }
    Ok(())
}

/// E = m† = Hom(m, ω) and the sequence 0 → ω → E → k → 0 obtained by dualizing
/// 0 → m → R → k → 0; ω → E sends w to multiplication by w.
pub fn min_mcm_approx_k<T: Coeff>(r: &Arc<RingHandle<T>>) -> Result<(Arc<CoeffModule<T>>, Ses<T>)> {
    singular_curve(r)?;
    let mi = FracIdeal::maximal(r);
    if mi.shift() != 0 {
        return Err(Error::Internal("maximal ideal stored with a shift".into()));
    }
    let mb = CoeffModule::from_frac_ideal_built(&mi);
    let wb = CoeffModule::from_frac_ideal_built(&canonical_ideal(r)?);
    let (mm, w) = (&mb.module, &wb.module);
    let e = hom(mm, w)?;
    let pr = r.prime();
    let mut cols = Vec::with_capacity(w.ngens());
    for j in 0..w.ngens() {
        let wj = wb.sq.emb.col(j);
        let f: Vec<Vec<T>> = (0..mm.ngens())
            .map(|l| {
                wb.sq
                    .coords(&r.amb_mul(&mb.sq.emb.col(l), &wj))
                    .ok_or_else(|| Error::Internal("m·ω ⊄ ω".into()))
            })
            .collect::<Result<_>>()?;
        let f = ModMap::new(mm, w, Matrix::from_cols(pr, w.ngens(), &f))?;
        cols.push(e.from_map(&f));
    }
    let i = ModMap::new(w, &e.module, Matrix::from_cols(pr, e.module.ngens(), &cols))?;
    let (k, proj) = e.module.quotient(&i.image());
    if k.length()? != 1 {
        return Err(Error::Internal(format!("coker(ω → m†) has length {}", k.length()?)));
    }
    let p = ModMap::new(&e.module, &k, proj)?;
    Ok((e.module.clone(), Ses::new(i, p)?))
}

/// 0 → R → ω^r → C → 0, dual to the minimal cover R^r → ω (1 ↦ the generators of ω);
/// C ≅ (Ω¹ω)†. Returns the sequence and (Ω¹ω)† computed directly.
pub fn mintype_sequence<T: Coeff>(r: &Arc<RingHandle<T>>) -> Result<(Ses<T>, Arc<CoeffModule<T>>)> {
    singular_curve(r)?;
    let w = CoeffModule::canonical_module(r)?;
    let gens = w.min_generators();
    let n = gens.cols();
    let (wn, inj, _) = CoeffModule::direct_sum_with_maps(r, &vec![w.clone(); n]);
    let mut v = wn.zero_vec();
    for (k, ik) in inj.iter().enumerate() {
        let add = ik.mul_vec(&gens.col(k));
        v = v.iter().zip(&add).map(|(a, b)| a.add(b)).collect();
    }
    let free = CoeffModule::free(r, 1);
    let cols: Vec<Vec<T>> = (0..r.rank()).map(|b| wn.reduce(&wn.basis_action(b).mul_vec(&v))).collect();
    let i = ModMap::new(&free, &wn, Matrix::from_cols(r.prime(), wn.ngens(), &cols))?;
    let (c, proj) = wn.quotient(&i.image());
    let p = ModMap::new(&wn, &c, proj)?;
    let dual = w.syzygy(1).dualize_omega()?.module;
    Ok((Ses::new(i, p)?, dual))
}
