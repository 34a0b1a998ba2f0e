use subext_core::ext::ext1;
use subext_core::modules::{is_isomorphic, CoeffModule};
use subext_core::rings::{artin_invariants, curve_invariants, FracIdeal};
use subext_core::subfun::NumFn;
use subext_core::ulrich::{min_mcm_approx_k, mintype_sequence};

use super::common::*;
use super::{Ctx, ScenarioError};
use crate::report::Instance;

type Out = Result<Vec<Instance>, ScenarioError>;

const CURVES: [&str; 3] = ["E2", "E3", "E25"];

pub fn artincan(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for label in ["A2", "A3"] {
        let r = ctx.artin(label)?;
        let base = Instance::new(label, "μ(ω) = e, Ω¹ω ≅ k^(e²−1)");
        out.push(guarded(base, |mut inst| {
            let inv = artin_invariants(&r)?;
            let m = FracIdeal::maximal(&r);
            let e = inv.embdim as usize;
            let w = CoeffModule::canonical_module(&r)?;
            let syz = w.syzygy(1);
            let want = e * e - 1;
            inst.set("e", e as u64);
            inst.set("mu_omega", w.mu() as u64);
            inst.set("mu_syzygy", syz.mu() as u64);
            inst.set("length_syzygy", syz.length()?);
            inst.set("loewy_syzygy", syz.loewy_length() as u64);
            // killed by m and of length e²−1: a k-vector space of that dimension
            let ok = m.power(2).is_zero()
                && !m.is_zero()
                && w.mu() == e
                && syz.mu() == want
                && syz.loewy_length() == 1
                && syz.length()? == want as u64;
            Ok(inst.verdict(ok))
        }));
    }
    Ok(out)
}

pub fn mintype_muadd(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for label in CURVES {
        let r = ctx.curve(label)?;
        let base = Instance::new(label, "μ((Ω¹ω)†) = r² − 1, sequence μ-additive");
        out.push(guarded(base, |mut inst| {
            let inv = curve_invariants(&r)?;
            let rt = inv.cm_type as usize;
            let (ses, dual) = mintype_sequence(&r)?;
            let w = CoeffModule::canonical_module(&r)?;
            let wr = sum(&r, &vec![w; rt]);
            inst.set("type", rt as u64);
            inst.set("minimal_multiplicity", inv.has_minimal_multiplicity);
            inst.set("mu_dual", dual.mu() as u64);
            let additive = NumFn::Mu.is_additive(&ses)?;
            inst.set("mu_additive", additive);
            let ok = inv.has_minimal_multiplicity
                && dual.mu() == rt * rt - 1
                && additive
                && ses.is_exact()
                && is_isomorphic(&ses.n, &CoeffModule::free(&r, 1))?
                && is_isomorphic(&ses.x, &wr)?
                && is_isomorphic(&ses.m, &dual)?;
            Ok(inst.verdict(ok))
        }));
    }
    Ok(out)
}

pub fn cano_d1(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for label in CURVES {
        let r = ctx.curve(label)?;
        let base = Instance::new(label, "E^R ≅ m†, μ(m†) = r + 1, non-split μ-additive");
        out.push(guarded(base, |mut inst| {
            let inv = curve_invariants(&r)?;
            let (mdag, ses) = min_mcm_approx_k(&r)?;
            let w = CoeffModule::canonical_module(&r)?;
            let e = ext1(&k(&r), &w)?;
            let len = e.length()?;
            let c = e.generators().into_iter().next().expect("Ext¹(k, ω) ≠ 0");
            let er = e.middle(&c);
            inst.set("type", inv.cm_type);
            inst.set("mu_mdag", mdag.mu() as u64);
            inst.set("ext_length", len);
            let split = ses.is_split()?;
            let additive = NumFn::Mu.is_additive(&ses)?;
            inst.set("split", split);
            inst.set("mu_additive", additive);
            let ok = len == 1
                && mdag.mu() as u64 == inv.cm_type + 1
                && is_isomorphic(&er.x, &mdag)?
                && is_isomorphic(&ses.x, &mdag)?
                && NumFn::Mu.is_additive(&er)?
                && !split
                && additive;
            Ok(inst.verdict(ok))
        }));
    }
    Ok(out)
}

pub fn injd_d1(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for label in CURVES {
        let r = ctx.curve(label)?;
        for (fname, rank) in [("ω", 1usize), ("ω^2", 2)] {
            let base = Instance::new(label, "Ext¹(k, N)^μ = Ext¹(k, N) ≠ 0").input("N", fname);
            out.push(guarded(base, |mut inst| {
                let w = CoeffModule::canonical_module(&r)?;
                let n = sum(&r, &vec![w; rank]);
                let e = ext1(&k(&r), &n)?;
                let s = sub(ctx, &e, &[NumFn::Mu])?;
                inst.set("ext_classes", s.total);
                inst.set("mu_classes", s.len() as u64);
                Ok(inst.verdict(s.len() as u64 == s.total && s.total > 1))
            }));
        }
    }
    Ok(out)
}
