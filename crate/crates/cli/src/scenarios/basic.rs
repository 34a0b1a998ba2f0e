use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use subext_core::dcoeff::{Coeff, Local, Matrix};
use subext_core::ext::ext1;
use subext_core::modules::{is_isomorphic, ColonMode, CoeffModule};
use subext_core::rings::{artin_invariants, curve_invariants, FracIdeal, RingHandle};
use subext_core::subfun::{ext1_mu_lattice, NumFn};

use super::common::*;
use super::{Ctx, ScenarioError};
use crate::report::Instance;

type Out = Result<Vec<Instance>, ScenarioError>;

const DVRS: [&str; 3] = ["D2", "D3", "D5"];
const CURVES: [&str; 3] = ["E2", "E3", "E25"];
/// Ext¹ sizes up to this are cross-checked by brute-force enumeration.
const BRUTE_LIMIT: u64 = 1 << 7;
const SAMPLED_CLASSES: usize = 16;

fn dvr_modules(r: &Arc<RingHandle<Local>>) -> subext_core::Result<Vec<(String, M<Local>)>> {
    let mut base = Vec::new();
    for a in 0..=4 {
        let label = if a == 0 { "R".to_string() } else { format!("R/t^{a}") };
        base.push((label, dvr_quot(r, a)?));
    }
    let mut out = base.clone();
    for i in 0..base.len() {
        for j in i..base.len() {
            out.push((format!("{}⊕{}", base[i].0, base[j].0), sum(r, &[base[i].1.clone(), base[j].1.clone()])));
        }
    }
    Ok(out)
}

pub fn dvr_mu(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for (ri, label) in DVRS.iter().enumerate() {
        let r = ctx.curve(label)?;
        let mods = match dvr_modules(&r) {
            Ok(m) => m,
            Err(e) => {
                out.push(Instance::new(label, "module pool builds").error(&e));
                continue;
            }
        };
        let pairs: Vec<(usize, usize)> = (0..mods.len()).flat_map(|i| (0..mods.len()).map(move |j| (i, j))).collect();
        let insts: Vec<Instance> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let base = Instance::new(label, "Ext^μ = m·Ext¹")
                    .input("M", &mods[i].0)
                    .input("N", &mods[j].0);
                guarded(base, |mut inst| {
                    let e = ext1(&mods[i].1, &mods[j].1)?;
                    let mu = ext1_mu_lattice(&e);
                    let me = e.ideal_lattice(&r.mgens());
                    inst.set("ext_length", e.length()?);
                    inst.set("mu_length", e.lattice_length(&mu)?);
                    inst.set("m_ext_length", e.lattice_length(&me)?);
                    let mut ok = e.same_lattice(&mu, &me);
                    let size = e.size().unwrap_or(u64::MAX);
                    if size <= BRUTE_LIMIT.min(ctx.budget) {
                        let s = sub(ctx, &e, &[NumFn::Mu])?;
                        ok &= s.same_as(&lattice_set(ctx, &e, &me)?) && s.certificate.is_closed();
                        inst.set("method", "lattice, all classes enumerated");
                    } else {
                        let mut g = rng(ctx, (ri * 10_000 + i * 100 + j) as u64);
                        let mut agree = 0u64;
                        for c in random_classes(&e, SAMPLED_CLASSES, &mut g) {
                            let add = NumFn::Mu.is_additive(&e.middle(&c))?;
                            if add == e.in_lattice(&me, &c) {
                                agree += 1;
                            } else {
                                ok = false;
                            }
                        }
                        inst.set("method", "lattice, sampled middles");
                        inst.set("sampled_agree", agree);
                    }
                    Ok(inst.verdict(ok))
                })
            })
            .collect();
        out.extend(insts);
    }
    Ok(out)
}

pub fn cycquot(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    let mut cases: Vec<(String, i64, Vec<i64>)> = Vec::new();
    for l in DVRS {
        for a in 1..=4 {
            for b in a..=4 {
                cases.push((l.to_string(), a, vec![b]));
            }
        }
    }
    for (x, i) in [(2, vec![2, 3]), (3, vec![2, 3]), (2, vec![4, 5]), (3, vec![4, 5]), (2, vec![3]), (4, vec![2, 3])] {
        cases.push(("E2".into(), x, i));
    }
    for (x, i) in [(3, vec![3, 4, 5]), (4, vec![3, 4, 5]), (3, vec![4]), (5, vec![6, 7, 8])] {
        cases.push(("E3".into(), x, i));
    }
    for (label, a, gens) in cases {
        let r = ctx.curve(&label)?;
        let xi = FracIdeal::monomial(&r, &[a]);
        let i = FracIdeal::monomial(&r, &gens);
        let gl = gens.iter().map(|g| format!("t^{g}")).collect::<Vec<_>>().join(",");
        let base = Instance::new(&label, "Ext^μ = m·Ext ≅ m/(I + xR)")
            .input("x", format!("t^{a}"))
            .input("I", format!("({gl})"));
        out.push(guarded(base, |mut inst| {
            let e = ext1(&quot(&xi)?, &quot(&i)?)?;
            let s = sub(ctx, &e, &[NumFn::Mu])?;
            let me = e.ideal_lattice(&r.mgens());
            let m = FracIdeal::maximal(&r);
            let j = i.sum(&xi);
            let target = CoeffModule::from_ideal_quotient(&m, &j)?;
            let lam = m.index_of(&j)?;
            inst.set("mu_length", s.span.length()?);
            inst.set("quotient_length", lam);
            let ok = s.same_as(&lattice_set(ctx, &e, &me)?) && s.span.length()? == lam && is_isomorphic(&s.span, &target)?;
            Ok(inst.verdict(ok))
        }));
    }
    Ok(out)
}

pub fn regu_d1(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for label in DVRS {
        let r = ctx.curve(label)?;
        let targets: Vec<(String, subext_core::Result<M<Local>>)> = vec![
            ("R".into(), dvr_quot(&r, 0)),
            ("R/t".into(), dvr_quot(&r, 1)),
            ("R/t^2".into(), dvr_quot(&r, 2)),
            ("R/t^3".into(), dvr_quot(&r, 3)),
            ("R⊕R/t^2".into(), dvr_quot(&r, 2).map(|q| sum(&r, &[CoeffModule::free(&r, 1), q]))),
            ("R^2".into(), Ok(CoeffModule::free(&r, 2))),
        ];
        for (name, n) in targets {
            let base = Instance::new(label, "Ext¹(k, N)^μ = 0").input("N", &name);
            out.push(guarded(base, |mut inst| {
                let e = ext1(&k(&r), &n?)?;
                let s = sub(ctx, &e, &[NumFn::Mu])?;
                inst.set("ext_classes", s.total);
                inst.set("mu_classes", s.len() as u64);
                let lat_zero = e.lattice_length(&ext1_mu_lattice(&e))? == 0;
                Ok(inst.verdict(s.len() == 1 && lat_zero))
            }));
        }
    }
    Ok(out)
}

pub fn reg_depth1(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for label in DVRS.iter().chain(CURVES.iter()) {
        let r = ctx.curve(label)?;
        for rank in [1usize, 2] {
            let base = Instance::new(label, "regular iff Ext¹(k, F)^μ = 0").input("F", format!("R^{rank}"));
            out.push(guarded(base, |mut inst| {
                let inv = curve_invariants(&r)?;
                let e = ext1(&k(&r), &CoeffModule::free(&r, rank))?;
                let s = sub(ctx, &e, &[NumFn::Mu])?;
                let mu_zero = s.len() == 1;
                inst.set("regular", inv.is_regular);
                inst.set("mu_zero", mu_zero);
                inst.set("ext_classes", s.total);
                Ok(inst.verdict(inv.is_regular == mu_zero))
            }));
        }
    }
    Ok(out)
}

pub fn mr_minmult(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for label in CURVES {
        let r = ctx.curve(label)?;
        let pool = match (curve_invariants(&r), mcm_pool(&r)) {
            (Ok(inv), Ok(pool)) if inv.has_minimal_multiplicity => pool,
            (Ok(_), Ok(_)) => {
                out.push(Instance::new(label, "minimal multiplicity").verdict(false));
                continue;
            }
            (Err(e), _) | (_, Err(e)) => {
                out.push(Instance::new(label, "ring data").error(&e));
                continue;
            }
        };
        for (name, m) in &pool {
            for rank in [1usize, 2] {
                let base = Instance::new(label, "Ext¹(M, F)^μ = Ext¹(M, F)")
                    .input("M", name)
                    .input("F", format!("R^{rank}"));
                out.push(guarded(base, |mut inst| {
                    let e = ext1(m, &CoeffModule::free(&r, rank))?;
                    let lat_full = e.lattice_length(&ext1_mu_lattice(&e))? == e.length()?;
                    let ok = if small(&e, ctx.budget.min(1 << 12)) {
                        let s = sub(ctx, &e, &[NumFn::Mu])?;
                        inst.set("ext_classes", s.total);
                        inst.set("mu_classes", s.len() as u64);
                        s.len() as u64 == s.total && lat_full
                    } else {
                        inst.set("ext_length", e.length()?);
                        lat_full
                    };
                    Ok(inst.verdict(ok))
                }));
            }
        }
    }
    Ok(out)
}

/// R/ann_R(I) as a module; R itself when the annihilator vanishes.
fn mod_ann<T: Coeff>(i: &FracIdeal<T>) -> subext_core::Result<M<T>> {
    let ann = ideal_mod(i).annihilator();
    if ann.is_zero() {
        Ok(CoeffModule::free(i.ring(), 1))
    } else {
        quot(&ann)
    }
}

fn trk_case<T: Coeff>(ctx: &Ctx, label: &str, i_name: &str, i: &FracIdeal<T>, expect_all: Option<bool>) -> Instance {
    let base = Instance::new(label, "Ext¹(Tr R/I, R/ann I)^μ = m·Ext").input("I", i_name);
    guarded(base, |mut inst| {
        let r = i.ring();
        let tr = quot(i)?.transpose();
        let e = ext1(&tr, &mod_ann(i)?)?;
        let s = sub(ctx, &e, &[NumFn::Mu])?;
        let me = lattice_set(ctx, &e, &e.ideal_lattice(&r.mgens()))?;
        inst.set("ext_classes", s.total);
        inst.set("mu_classes", s.len() as u64);
        let mut ok = s.same_as(&me);
        if let Some(all) = expect_all {
            let ef = ext1(&tr, &CoeffModule::free(r, 1))?;
            let sf = sub(ctx, &ef, &[NumFn::Mu])?;
            inst.set("tr_k_R_classes", sf.total);
            inst.set("tr_k_R_mu_classes", sf.len() as u64);
            ok &= (sf.len() as u64 == sf.total) == all;
        }
        Ok(inst.verdict(ok))
    })
}

pub fn trk_depth(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for label in ["A2", "A3"] {
        let r = ctx.artin(label)?;
        out.push(trk_case(ctx, label, "m", &FracIdeal::maximal(&r), Some(true)));
        let x = r.mgens()[0].clone();
        out.push(trk_case(ctx, label, "(x)", &FracIdeal::from_elems(&r, &[x]), None));
    }
    for label in CURVES {
        let r = ctx.curve(label)?;
        let m = FracIdeal::maximal(&r);
        out.push(trk_case(ctx, label, "m", &m, Some(false)));
        out.push(trk_case(ctx, label, "m^2", &m.power(2), None));
    }
    Ok(out)
}

pub fn loewy(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for label in DVRS {
        let r = ctx.curve(label)?;
        let ls: Vec<(String, Vec<i64>)> = vec![
            ("R/t^2".into(), vec![2]),
            ("R/t^3".into(), vec![3]),
            ("R/t^2⊕R/t^3".into(), vec![2, 3]),
            ("R⊕R/t^2".into(), vec![0, 2]),
        ];
        for (name, parts) in ls {
            for rank in [1usize, 2] {
                let base = Instance::new(label, "Ext¹(L, F)^(μ, φ_L) = 0").input("L", &name).input("F", format!("R^{rank}"));
                out.push(guarded(base, |mut inst| {
                    let ms: Vec<M<Local>> = parts.iter().map(|&a| dvr_quot(&r, a)).collect::<subext_core::Result<_>>()?;
                    let l = sum(&r, &ms);
                    let c = l.torsion_part().loewy_length() as u32;
                    let phi = NumFn::Nu(FracIdeal::maximal(&r).power(c));
                    let e = ext1(&l, &CoeffModule::free(&r, rank))?;
                    inst.set("c", c);
                    inst.set("ext_length", e.length()?);
                    let count = if small(&e, ctx.budget) {
                        let both = sub(ctx, &e, &[NumFn::Mu, phi])?;
                        inst.set("method", "all classes enumerated");
                        both.len() as u64
                    } else {
                        // every (μ, φ_L)-class is a μ-class, so the μ-lattice suffices
                        let mut n = 0u64;
                        for cl in lattice_classes(ctx, &e, &ext1_mu_lattice(&e))? {
                            let s = e.middle(&cl);
                            if NumFn::Mu.is_additive(&s)? && phi.is_additive(&s)? {
                                n += 1;
                            }
                        }
                        inst.set("method", "μ-lattice classes enumerated");
                        n
                    };
                    inst.set("mu_phi_classes", count);
                    Ok(inst.verdict(count == 1))
                }));
            }
        }
    }
    Ok(out)
}

fn random_lattice<T: Coeff>(m: &CoeffModule<T>, gens: usize, g: &mut rand_chacha::ChaCha8Rng) -> Matrix<T> {
    let p = m.prime();
    let mods = m.row_mods();
    let cols: Vec<Vec<T>> = (0..gens)
        .map(|_| {
            let v: Vec<T> = mods
                .iter()
                .map(|md| {
                    let d: Vec<u16> = (0..md.unwrap_or(3).max(1)).map(|_| g.gen_range(0..p)).collect();
                    T::from_digits(p, &d)
                })
                .collect();
            m.reduce(&v)
        })
        .collect();
    m.r_span(&Matrix::from_cols(p, m.ngens(), &cols))
}

fn weakly_case<T: Coeff>(ctx: &Ctx, label: &str, mname: &str, m: &M<T>, nname: &str, n_lat: &Matrix<T>) -> Instance {
    let base = Instance::new(label, "Ext¹(k, N)^μ = 0 ⇒ (mN :_M m) = N + Soc(M)").input("M", mname).input("N", nname);
    guarded(base, |mut inst| {
        let r = m.ring();
        let (n, _) = m.submodule(n_lat);
        let e = ext1(&k(r), &n)?;
        let mu_zero = e.lattice_length(&ext1_mu_lattice(&e))? == 0;
        if small(&e, ctx.budget.min(1 << 10)) {
            let s = sub(ctx, &e, &[NumFn::Mu])?;
            if (s.len() == 1) != mu_zero {
                return Ok(inst.value("lattice_disagrees_with_enumeration", true).verdict(false));
            }
        }
        inst.set("hypothesis", mu_zero);
        if !mu_zero {
            return Ok(inst.verdict(true));
        }
        let colon = m.colon_in_module(n_lat, ColonMode::MTimesN);
        let rhs = m.r_span(&n_lat.hstack(&m.socle_lattice()));
        let mut ok = m.contains_sub(&colon, &rhs) && m.contains_sub(&rhs, &colon);
        if m.depth01() > 0 {
            let full = m.contains_sub(n_lat, &colon);
            inst.set("weakly_m_full", full);
            ok &= full;
        }
        Ok(inst.verdict(ok))
    })
}

pub fn weakly_mfull(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for (ri, label) in ["D2", "D3", "E2", "E3", "A2"].iter().enumerate() {
        let mut g = rng(ctx, ri as u64);
        macro_rules! run {
            ($r:expr, $mods:expr) => {{
                let r = $r;
                let mods: Vec<(String, subext_core::Result<M<_>>)> = $mods;
                for (mname, m) in mods {
                    let m = match m {
                        Ok(m) => m,
                        Err(e) => {
                            out.push(Instance::new(label, "module builds").input("M", &mname).error(&e));
                            continue;
                        }
                    };
                    let mut subs: Vec<(String, Matrix<_>)> = Vec::new();
                    let mi = FracIdeal::maximal(&r);
                    for (iname, i) in [("m", mi.clone()), ("m^2", mi.power(2))] {
                        match m.ideal_times(&i) {
                            Ok(l) => subs.push((format!("{iname}·M"), l)),
                            Err(e) => out.push(Instance::new(label, "I·M").input("M", &mname).error(&e)),
                        }
                    }
                    for gens in [1usize, 1, 2, 2] {
                        subs.push((format!("random span of {gens}"), random_lattice(&m, gens, &mut g)));
                    }
                    for (nname, lat) in subs {
                        out.push(weakly_case(ctx, label, &mname, &m, &nname, &lat));
                    }
                }
            }};
        }
        if label.starts_with('A') {
            let r = ctx.artin(label)?;
            let mods = vec![
                ("R".to_string(), Ok(CoeffModule::free(&r, 1))),
                ("R^2".to_string(), Ok(CoeffModule::free(&r, 2))),
                ("ω".to_string(), CoeffModule::canonical_module(&r)),
                ("R⊕k".to_string(), Ok(sum(&r, &[CoeffModule::free(&r, 1), k(&r)]))),
            ];
            run!(r, mods);
        } else {
            let r = ctx.curve(label)?;
            let mods = if label.starts_with('D') {
                vec![
                    ("R/t^3".to_string(), dvr_quot(&r, 3)),
                    ("R/t^2⊕R/t^3".to_string(), dvr_quot(&r, 2).and_then(|a| Ok(sum(&r, &[a, dvr_quot(&r, 3)?])))),
                    ("R⊕R/t^2".to_string(), dvr_quot(&r, 2).map(|a| sum(&r, &[CoeffModule::free(&r, 1), a]))),
                    ("R^2".to_string(), Ok(CoeffModule::free(&r, 2))),
                ]
            } else {
                let m = FracIdeal::maximal(&r);
                vec![
                    ("R".to_string(), Ok(CoeffModule::free(&r, 1))),
                    ("m".to_string(), Ok(ideal_mod(&m))),
                    ("R/m^2".to_string(), quot(&m.power(2))),
                    ("R⊕k".to_string(), Ok(sum(&r, &[CoeffModule::free(&r, 1), k(&r)]))),
                ]
            };
            run!(r, mods);
        }
    }
    Ok(out)
}

pub fn hyper(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for label in CURVES {
        let r = ctx.curve(label)?;
        let base = Instance::new(label, "minimal multiplicity and Ext¹(m, R)^μ = 0 ⇒ embdim ≤ 2");
        out.push(guarded(base, |mut inst| {
            let inv = curve_invariants(&r)?;
            let m = ideal_mod(&FracIdeal::maximal(&r));
            let e = ext1(&m, &CoeffModule::free(&r, 1))?;
            let s = sub(ctx, &e, &[NumFn::Mu])?;
            let mu_zero = s.len() == 1;
            inst.set("minimal_multiplicity", inv.has_minimal_multiplicity);
            inst.set("embdim", inv.embdim);
            inst.set("ext_classes", s.total);
            inst.set("mu_zero", mu_zero);
            let ok = !inv.has_minimal_multiplicity || !mu_zero || inv.embdim <= 2;
            Ok(inst.verdict(ok))
        }));
    }
    for label in ["A2", "A3"] {
        let r = ctx.artin(label)?;
        let base = Instance::new(label, "minimal multiplicity and Ext¹(m, R)^μ = 0 ⇒ embdim ≤ 1");
        out.push(guarded(base, |mut inst| {
            let inv = artin_invariants(&r)?;
            let e = ext1(&ideal_mod(&FracIdeal::maximal(&r)), &CoeffModule::free(&r, 1))?;
            let mu_zero = e.lattice_length(&ext1_mu_lattice(&e))? == 0;
            inst.set("ext_length", e.length()?);
            inst.set("embdim", inv.embdim);
            inst.set("mu_zero", mu_zero);
            Ok(inst.verdict(!inv.has_minimal_multiplicity || !mu_zero || inv.embdim <= 1))
        }));
    }
    Ok(out)
}
