use std::sync::Arc;

use rayon::prelude::*;
use subext_core::dcoeff::{Fp, Local};
use subext_core::ext::{engine_laws as run_laws, ext1};
use subext_core::rings::{FracIdeal, RingHandle};
use subext_core::subfun::{
    check_exact_axioms, check_exact_axioms_on, hom_exactness_subfunctor, sample_modules, Admissible, AxiomReport, HomSide,
    NumFn, SampleSpec, Sampled,
};
use subext_core::Result;

use super::common::*;
use super::{Ctx, ScenarioError};
use crate::report::Instance;
use crate::workspace::WsCoeff;

type Out = std::result::Result<Vec<Instance>, ScenarioError>;

/// Checks the axioms need in total, over all rings, per predicate.
pub const MIN_AXIOM_CHECKS: u64 = 200;
/// Presentations larger than this are not enumerated by `engine-laws`.
pub const ENGINE_CAP: u64 = 1 << 10;
pub const MIN_HALFEXACT_SES: u64 = 100;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Which {
    Mu,
    Nu,
    Ul,
    Broken,
}

fn predicate<T: WsCoeff>(which: Which, r: &Arc<RingHandle<T>>) -> (String, Admissible<T>) {
    let m = FracIdeal::maximal(r);
    match which {
        Which::Mu => ("μ".into(), Admissible::Additive(vec![NumFn::Mu])),
        Which::Nu if r.is_curve() => ("ν_(m^2)".into(), Admissible::Additive(vec![NumFn::Nu(m.power(2))])),
        Which::Nu => {
            let x = r.mgens()[0].clone();
            ("ν_(x)".into(), Admissible::Additive(vec![NumFn::Nu(FracIdeal::from_elems(r, &[x]))]))
        }
        Which::Ul => {
            let s = if r.is_curve() { 1 } else { 0 };
            (format!("Ul^{s}_m"), Admissible::Ulrich { ideal: m, s })
        }
        Which::Broken => ("even middle length".into(), Admissible::EvenMiddleLength),
    }
}

fn report_instance(label: &str, pname: &str, expected: &str, rep: &AxiomReport) -> Instance {
    let mut inst = Instance::new(label, expected)
        .input("predicate", pname)
        .value("checks", rep.checks)
        .value("skipped", rep.skipped)
        .value("violations", rep.violations.len() as u64);
    for (k, v) in &rep.by_kind {
        inst.set(&format!("checks_{k}"), *v);
    }
    if !rep.violations.is_empty() {
        let w: Vec<String> = rep.violations.iter().take(5).map(|v| format!("{}: {}", v.check, v.witness)).collect();
        inst.set("witnesses", w);
    }
    inst.verdict(rep.violations.is_empty())
}

fn axioms_on_ring<T: WsCoeff>(ctx: &Ctx, which: Which, label: &str, k: u64) -> std::result::Result<(Instance, u64), ScenarioError> {
    let r = ctx.ring::<T>(label)?;
    let (pname, pred) = predicate(which, &r);
    let base = Instance::new(label, "0 violations").input("predicate", &pname);
    Ok(match check_exact_axioms(&pred, &r, &SampleSpec::default(), ctx.sub_seed(k)) {
        Ok(rep) => (report_instance(label, &pname, "0 violations", &rep), rep.checks),
        Err(e) => (base.error(&e), 0),
    })
}

fn axioms_all(ctx: &Ctx, which: Which) -> Out {
    let mut labels: Vec<(String, bool)> = ctx.ws.ring_labels::<Local>().into_iter().map(|l| (l, true)).collect();
    labels.extend(ctx.ws.ring_labels::<Fp>().into_iter().map(|l| (l, false)));
    let res: Vec<std::result::Result<(Instance, u64), ScenarioError>> = labels
        .par_iter()
        .enumerate()
        .map(|(k, (l, curve))| {
            if *curve {
                axioms_on_ring::<Local>(ctx, which, l, k as u64)
            } else {
                axioms_on_ring::<Fp>(ctx, which, l, k as u64)
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut total = 0;
    for r in res {
        let (i, c) = r?;
        total += c;
        out.push(i);
    }
    out.push(
        Instance::new("all", format!("at least {MIN_AXIOM_CHECKS} checks in total"))
            .value("checks", total)
            .verdict(total >= MIN_AXIOM_CHECKS),
    );
    Ok(out)
}

pub fn axioms_mu(ctx: &Ctx) -> Out {
    axioms_all(ctx, Which::Mu)
}

pub fn axioms_nu(ctx: &Ctx) -> Out {
    axioms_all(ctx, Which::Nu)
}

pub fn axioms_ul(ctx: &Ctx) -> Out {
    axioms_all(ctx, Which::Ul)
}

/// The broken predicate is run like the others and held to the same standard,
/// so the scenario is expected to fail with witnesses.
pub fn negative_control(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for (k, label) in ["D2", "E2"].iter().enumerate() {
        out.push(axioms_on_ring::<Local>(ctx, Which::Broken, label, k as u64)?.0);
    }
    out.push(axioms_on_ring::<Fp>(ctx, Which::Broken, "A2", 2)?.0);
    Ok(out)
}

fn laws_on_ring<T: WsCoeff>(ctx: &Ctx, label: &str) -> Out {
    ctx.ring::<T>(label)?;
    let mods = ctx.ws.modules_over::<T>(label);
    let pairs: Vec<(usize, usize)> = (0..mods.len()).flat_map(|i| (0..mods.len()).map(move |j| (i, j))).collect();
    let mut out: Vec<Instance> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let base = Instance::new(label, "0 defects").input("M", &mods[i].0).input("N", &mods[j].0);
            guarded(base, |mut inst| {
                let e = ext1(&mods[i].1, &mods[j].1)?;
                let size = e.size();
                if size.map_or(true, |s| s > ENGINE_CAP.min(ctx.budget)) {
                    inst.set("ext_length", e.length().ok());
                    return Ok(inst.value("skipped", "Ext¹ too large to enumerate").verdict(true));
                }
                let rep = run_laws(&e, ctx.budget)?;
                ctx.charge(rep.classes);
                inst.set("classes", rep.classes);
                inst.set("checks", rep.checks);
                inst.set("defects", rep.defects.len() as u64);
                if !rep.defects.is_empty() {
                    inst.set("witnesses", rep.defects.iter().take(5).cloned().collect::<Vec<_>>());
                }
                Ok(inst.verdict(rep.defects.is_empty()))
            })
        })
        .collect();
    if out.is_empty() {
        out.push(Instance::new(label, "workspace has modules over the ring").verdict(true).value("modules", 0));
    }
    Ok(out)
}

pub fn engine_laws(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for l in ctx.ws.ring_labels::<Local>() {
        out.extend(laws_on_ring::<Local>(ctx, &l)?);
    }
    for l in ctx.ws.ring_labels::<Fp>() {
        out.extend(laws_on_ring::<Fp>(ctx, &l)?);
    }
    Ok(out)
}

fn halfexact_ring<T: WsCoeff>(ctx: &Ctx, label: &str, k: u64) -> std::result::Result<(Vec<Instance>, u64), ScenarioError> {
    let r = ctx.ring::<T>(label)?;
    let spec = SampleSpec {
        modules: 6,
        ..SampleSpec::default()
    };
    let base = Instance::new(label, "Hom exact iff λ∘Hom additive");
    let res = (|| -> Result<(Vec<Instance>, u64)> {
        let m = FracIdeal::maximal(&r);
        let tests: Vec<(String, M<T>)> = vec![("k".into(), subext_core::modules::CoeffModule::residue_field(&r)), ("R/m^2".into(), quot(&m.power(2))?)];
        let pool: Vec<Sampled<T>> = sample_modules(&r, &spec, ctx.sub_seed(k))?;
        let mut g = rng(ctx, 100 + k);
        let mut seqs = Vec::new();
        for a in &pool {
            for b in &pool {
                let e = ext1(&a.module, &b.module)?;
                if !small(&e, 1 << 8) {
                    continue;
                }
                for c in random_classes(&e, 3, &mut g) {
                    seqs.push((format!("{} by {} {:?}", b.label, a.label, c.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>()), e.middle(&c)));
                }
            }
        }
        let mut out = Vec::new();
        for (cname, c) in &tests {
            for (sname, side) in [("Hom(C, −)", HomSide::From), ("Hom(−, C)", HomSide::To)] {
                let results: Vec<Result<bool>> = seqs.par_iter().map(|(_, s)| hom_exactness_subfunctor(c, side, s).map(|h| h.agree())).collect();
                let mut bad = Vec::new();
                for (res, (name, _)) in results.into_iter().zip(&seqs) {
                    if !res? {
                        bad.push(name.clone());
                    }
                }
                let mut inst = base
                    .clone()
                    .input("C", cname)
                    .input("side", sname)
                    .value("sequences", seqs.len() as u64)
                    .value("disagreements", bad.len() as u64);
                if !bad.is_empty() {
                    inst.set("witnesses", bad.into_iter().take(5).collect::<Vec<_>>());
                    inst = inst.verdict(false);
                } else {
                    inst = inst.verdict(true);
                }
                out.push(inst);
            }
        }
        Ok((out, seqs.len() as u64))
    })();
    Ok(res.unwrap_or_else(|e| (vec![base.error(&e)], 0)))
}

pub fn halfexact(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    let mut total = 0;
    for (k, label) in ["D2", "E2"].iter().enumerate() {
        let (i, n) = halfexact_ring::<Local>(ctx, label, k as u64)?;
        out.extend(i);
        total += n;
    }
    let (i, n) = halfexact_ring::<Fp>(ctx, "A2", 2)?;
    out.extend(i);
    total += n;
    out.push(
        Instance::new("all", format!("at least {MIN_HALFEXACT_SES} sequences"))
            .value("sequences", total)
            .verdict(total >= MIN_HALFEXACT_SES),
    );
    Ok(out)
}

pub fn tony_et(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for (k, label) in ["E2", "E3"].iter().enumerate() {
        let r = ctx.curve(label)?;
        let m = FracIdeal::maximal(&r);
        let et = NumFn::Et(m.clone());
        let base = Instance::new(*label, "e^T_m subadditive; its additive classes are closed").input("I", "m");
        let pool = match mcm_pool(&r) {
            Ok(p) => p.into_iter().map(|(l, x)| Sampled::new(l, x)).collect::<Vec<_>>(),
            Err(e) => {
                out.push(base.error(&e));
                continue;
            }
        };
        let pred = Admissible::Additive(vec![et.clone()]);
        out.push(match check_exact_axioms_on(&pred, &pool, &SampleSpec::default(), ctx.sub_seed(k as u64)) {
            Ok(rep) => report_instance(label, "e^T_m", "0 violations", &rep),
            Err(e) => base.clone().input("part", "axioms").error(&e),
        });
        let pairs: Vec<(usize, usize)> = (0..pool.len()).flat_map(|i| (0..pool.len()).map(move |j| (i, j))).collect();
        let insts: Vec<Instance> = pairs
            .par_iter()
            .filter_map(|&(i, j)| {
                let b = base.clone().input("M", &pool[i].label).input("N", &pool[j].label);
                let e = match ext1(&pool[i].module, &pool[j].module) {
                    Ok(e) => e,
                    Err(err) => return Some(b.error(&err)),
                };
                if !small(&e, 1 << 9) {
                    return None;
                }
                Some(guarded(b, |mut inst| {
                    let s = sub(ctx, &e, &[et.clone()])?;
                    inst.set("ext_classes", s.total);
                    inst.set("et_classes", s.len() as u64);
                    Ok(inst.verdict(s.certificate.is_closed()))
                }))
            })
            .collect();
        out.extend(insts);
    }
    Ok(out)
}
