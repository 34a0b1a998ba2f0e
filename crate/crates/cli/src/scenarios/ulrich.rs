use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use subext_core::dcoeff::{Coeff, Local};
use subext_core::ext::{ext1, ExtPresentation};
use subext_core::modules::CoeffModule;
use subext_core::rings::{curve_invariants, FracIdeal};
use subext_core::subfun::{NumFn, Sampled};
use subext_core::subfun::SubExt;
use subext_core::ulrich::{ext1_over_blowup, ext1_ul, ext1_ul_classes, in_add, is_ulrich, reduction_in_r, ul_sample};
use subext_core::Result;

use super::common::*;
use super::{Ctx, ScenarioError};
use crate::report::Instance;

type Out = std::result::Result<Vec<Instance>, ScenarioError>;

const CURVES: [&str; 3] = ["E2", "E3", "E25"];
/// Pairs with more Ext¹ classes than this are left out of the enumerating scenarios.
const PAIR_CAP: u64 = 1 << 9;
const POOL: usize = 4;

/// Runs `check` on every ordered pair of `pool` with a small enough Ext¹, plus one
/// summary instance recording how many pairs were checked and skipped.
fn over_pairs<T, F>(ctx: &Ctx, label: &str, ideal: &str, pool: &[Sampled<T>], expected: &str, check: F) -> Vec<Instance>
where
    T: Coeff,
    F: Fn(&ExtPresentation<T>, &mut Instance) -> Result<bool> + Sync,
{
    let skipped = AtomicU64::new(0);
    let pairs: Vec<(usize, usize)> = (0..pool.len()).flat_map(|i| (0..pool.len()).map(move |j| (i, j))).collect();
    let mut out: Vec<Instance> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let base = Instance::new(label, expected)
                .input("I", ideal)
                .input("M", &pool[i].label)
                .input("N", &pool[j].label);
            let e = match ext1(&pool[i].module, &pool[j].module) {
                Ok(e) => e,
                Err(err) => return Some(base.error(&err)),
            };
            if !small(&e, PAIR_CAP.min(ctx.budget)) {
                skipped.fetch_add(1, Ordering::Relaxed);
                return None;
            }
            Some(guarded(base, |mut inst| {
                let ok = check(&e, &mut inst)?;
                Ok(inst.verdict(ok))
            }))
        })
        .collect();
    let checked = out.len() as u64;
    out.push(
        Instance::new(label, "at least one pair checked")
            .input("I", ideal)
            .value("pairs_checked", checked)
            .value("pairs_skipped", skipped.load(Ordering::Relaxed))
            .verdict(checked > 0),
    );
    out
}

fn ul_sub<T: Coeff>(ctx: &Ctx, e: &ExtPresentation<T>, i: &FracIdeal<T>) -> Result<SubExt<T>> {
    let s = ext1_ul_classes(e, i, 1, ctx.budget)?;
    ctx.charge(s.total);
    Ok(s)
}

fn curve_ideals(r: &std::sync::Arc<subext_core::rings::CurveRing>) -> Vec<(&'static str, FracIdeal<Local>)> {
    let m = FracIdeal::maximal(r);
    vec![("m", m.clone()), ("m^2", m.power(2))]
}

fn pool_or_error<T: Coeff>(out: &mut Vec<Instance>, label: &str, iname: &str, p: Result<Vec<Sampled<T>>>) -> Option<Vec<Sampled<T>>> {
    match p {
        Ok(p) => Some(p),
        Err(e) => {
            out.push(Instance::new(label, "Ulrich sample builds").input("I", iname).error(&e));
            None
        }
    }
}

fn jane_check<'a, T: Coeff>(ctx: &'a Ctx, i: FracIdeal<T>) -> impl Fn(&ExtPresentation<T>, &mut Instance) -> Result<bool> + Sync + 'a {
    move |e, inst| {
        let s = sub(ctx, e, &[NumFn::Nu(i.clone())])?;
        let lat = e.ideal_lattice(&gens_in_r(&i)?);
        let ie = lattice_set(ctx, e, &lat)?;
        inst.set("ext_classes", s.total);
        inst.set("nu_classes", s.len() as u64);
        inst.set("i_ext_classes", ie.len() as u64);
        Ok(ie.iter().all(|c| s.contains(c)))
    }
}

pub fn jane(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    let expected = "I·Ext¹ ⊆ Ext¹^(ν_I)";
    for label in ["D2", "E2", "E3"] {
        let r = ctx.curve(label)?;
        let sample = mcm_pool(&r).map(|p| {
            let mut v: Vec<Sampled<Local>> = p.into_iter().map(|(l, m)| Sampled::new(l, m)).collect();
            v.push(Sampled::new("k", k(&r)));
            v.truncate(5);
            v
        });
        let pool = if label == "D2" {
            let mut v = Vec::new();
            for a in 0..3 {
                match dvr_quot(&r, a) {
                    Ok(m) => v.push(Sampled::new(if a == 0 { "R".to_string() } else { format!("R/t^{a}") }, m)),
                    Err(e) => out.push(Instance::new(label, "module builds").error(&e)),
                }
            }
            Some(v)
        } else {
            pool_or_error(&mut out, label, "m", sample)
        };
        let Some(pool) = pool else { continue };
        for (iname, i) in curve_ideals(&r) {
            out.extend(over_pairs(ctx, label, iname, &pool, expected, jane_check(ctx, i)));
        }
    }
    for label in ["A2"] {
        let r = ctx.artin(label)?;
        let pool = vec![
            Sampled::new("k", k(&r)),
            Sampled::new("R", CoeffModule::free(&r, 1)),
            Sampled::new("m", ideal_mod(&FracIdeal::maximal(&r))),
        ];
        let x = r.mgens()[0].clone();
        for (iname, i) in [("m", FracIdeal::maximal(&r)), ("(x)", FracIdeal::from_elems(&r, &[x]))] {
            out.extend(over_pairs(ctx, label, iname, &pool, expected, jane_check(ctx, i)));
        }
    }
    Ok(out)
}

pub fn uladd(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    let expected = "Ext¹^(ν_I) = Ext¹_(Ul^s_I)";
    for (ri, label) in CURVES.iter().enumerate() {
        let r = ctx.curve(label)?;
        for (ii, (iname, i)) in curve_ideals(&r).into_iter().enumerate() {
            let Some(pool) = pool_or_error(&mut out, label, iname, ul_sample(&i, POOL, ctx.sub_seed((ri * 10 + ii) as u64))) else {
                continue;
            };
            out.extend(over_pairs(ctx, label, iname, &pool, expected, |e, inst| {
                let u = ext1_ul(e, &i, 1, ctx.budget)?;
                ctx.charge(2 * u.ul.total);
                inst.set("s", 1);
                inst.set("ul_classes", u.ul.len() as u64);
                inst.set("nu_classes", u.nu.len() as u64);
                Ok(u.agree())
            }));
        }
    }
    let r = ctx.artin("A2")?;
    let m = FracIdeal::maximal(&r);
    let pool = vec![Sampled::new("k", k(&r)), Sampled::new("k^2", sum(&r, &[k(&r), k(&r)]))];
    out.extend(over_pairs(ctx, "A2", "m", &pool, expected, |e, inst| {
        let u = ext1_ul(e, &m, 0, ctx.budget)?;
        ctx.charge(2 * u.ul.total);
        inst.set("s", 0);
        inst.set("ul_classes", u.ul.len() as u64);
        inst.set("nu_classes", u.nu.len() as u64);
        Ok(u.agree())
    }));
    Ok(out)
}

pub fn prop1(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for (ri, label) in CURVES.iter().enumerate() {
        let r = ctx.curve(label)?;
        let m = FracIdeal::maximal(&r);
        let Some(pool) = pool_or_error(&mut out, label, "m", ul_sample(&m, POOL, ctx.sub_seed(ri as u64))) else {
            continue;
        };
        let x = match reduction_in_r(&m) {
            Ok((x, _)) => x,
            Err(e) => {
                out.push(Instance::new(label, "principal reduction of m").error(&e));
                continue;
            }
        };
        out.extend(over_pairs(ctx, label, "m", &pool, "m·Ext¹ = Ext¹_Ul = x·Ext¹", |e, inst| {
            let u = ext1_ul(e, &m, 1, ctx.budget)?;
            ctx.charge(2 * u.ul.total);
            let me = lattice_set(ctx, e, &e.ideal_lattice(&r.mgens()))?;
            let xe = lattice_set(ctx, e, &e.ideal_lattice(&[x.clone()]))?;
            inst.set("reduction", r.fmt_elem(&x));
            inst.set("ext_classes", u.ul.total);
            inst.set("ul_classes", u.ul.len() as u64);
            inst.set("m_ext_classes", me.len() as u64);
            inst.set("x_ext_classes", xe.len() as u64);
            Ok(u.agree() && u.ul.same_as(&me) && me == xe)
        }));
    }
    Ok(out)
}

pub fn trset(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for (ri, label) in CURVES.iter().enumerate() {
        let r = ctx.curve(label)?;
        for (ii, (iname, i)) in curve_ideals(&r).into_iter().enumerate() {
            let Some(pool) = pool_or_error(&mut out, label, iname, ul_sample(&i, POOL, ctx.sub_seed((ri * 10 + ii) as u64))) else {
                continue;
            };
            let tr = match i.trace_ideal().and_then(|t| gens_in_r(&t)) {
                Ok(t) => t,
                Err(e) => {
                    out.push(Instance::new(label, "trace ideal").input("I", iname).error(&e));
                    continue;
                }
            };
            out.extend(over_pairs(ctx, label, iname, &pool, "tr(I)·Ext¹ ⊆ Ext¹_(Ul_I)", |e, inst| {
                let ul = ul_sub(ctx, e, &i)?;
                let te = lattice_set(ctx, e, &e.ideal_lattice(&tr))?;
                inst.set("ul_classes", ul.len() as u64);
                inst.set("tr_ext_classes", te.len() as u64);
                Ok(te.iter().all(|c| ul.contains(c)))
            }));
        }
    }
    Ok(out)
}

pub fn uliso(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for (ri, label) in CURVES.iter().enumerate() {
        let r = ctx.curve(label)?;
        for (ii, (iname, i)) in curve_ideals(&r).into_iter().enumerate() {
            let Some(pool) = pool_or_error(&mut out, label, iname, ul_sample(&i, POOL, ctx.sub_seed((ri * 10 + ii) as u64))) else {
                continue;
            };
            out.extend(over_pairs(ctx, label, iname, &pool, "Ext¹_(Ul_I) ≅ Ext¹_(B(I))", |e, inst| {
                let b = ext1_over_blowup(&e.m, &e.n, &i, ctx.budget)?;
                ctx.charge(e.size().unwrap_or(0) + b.b_classes);
                inst.set("b_classes", b.b_classes);
                inst.set("ul_classes", b.ul_classes);
                inst.set("bijection", b.bijection);
                Ok(b.bijection && b.b_classes == b.ul_classes)
            }));
        }
    }
    Ok(out)
}

/// Whether `g` kills Ext¹(M, N), for g given by R-generators.
fn kills(e: &ExtPresentation<Local>, gens: &[Vec<Local>]) -> Result<bool> {
    Ok(e.lattice_length(&e.ideal_lattice(gens))? == 0)
}

pub fn projgor(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for (ri, label) in CURVES.iter().enumerate() {
        let r = ctx.curve(label)?;
        for (ii, (iname, i)) in curve_ideals(&r).into_iter().enumerate() {
            let seed = ctx.sub_seed((ri * 10 + ii) as u64);
            let base = Instance::new(label, "trace annihilation over B(I)").input("I", iname);
            let mut insts = Vec::new();
            let res = (|| -> Result<()> {
                let pool = ul_sample(&i, POOL, seed)?;
                let bmod = blowup_mod(&i)?;
                let gor = blowup_gorenstein(&i)?;
                let tr = gens_in_r(&i.trace_ideal()?)?;
                let mg = r.mgens();
                for mi in &pool {
                    let member = in_add(&mi.module, &bmod)?.member;
                    // (3): B(I) Gorenstein ⇒ tr(I) kills Ext¹(M, B(I))
                    let e = ext1(&mi.module, &bmod)?;
                    let k3 = kills(&e, &tr)?;
                    insts.push(
                        base.clone()
                            .input("M", &mi.label)
                            .input("part", "B(I) Gorenstein ⇒ tr(I)·Ext¹(M, B(I)) = 0")
                            .value("blowup_gorenstein", gor)
                            .value("kills", k3)
                            .verdict(!gor || k3),
                    );
                    // (1): M ∈ add B(I) ⇒ tr(I) kills Ext¹(M, N) for N Ulrich
                    let mut all_tr = true;
                    let mut all_m = true;
                    for ni in &pool {
                        let e = ext1(&mi.module, &ni.module)?;
                        all_tr &= kills(&e, &tr)?;
                        all_m &= kills(&e, &mg)?;
                    }
                    insts.push(
                        base.clone()
                            .input("M", &mi.label)
                            .input("part", "M ∈ add B(I) ⇒ tr(I)·Ext¹(M, Ul_I) = 0")
                            .value("in_add", member)
                            .value("kills_all", all_tr)
                            .verdict(!member || all_tr),
                    );
                    // (2), I = m only: M ∈ add B(m) iff m kills Ext¹(M, Ul(R))
                    if iname == "m" {
                        insts.push(
                            base.clone()
                                .input("M", &mi.label)
                                .input("part", "M ∈ add B(m) iff m·Ext¹(M, Ul(R)) = 0")
                                .value("in_add", member)
                                .value("m_kills_all", all_m)
                                .verdict(member == all_m),
                        );
                    }
                }
                Ok(())
            })();
            if let Err(e) = res {
                insts.push(base.error(&e));
            }
            out.extend(insts);
        }
    }
    Ok(out)
}

pub fn algor(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for (ri, label) in CURVES.iter().enumerate() {
        let r = ctx.curve(label)?;
        let base = Instance::new(label, "almost Gorenstein iff m·Ext¹(Ul(R), m) = 0");
        out.push(guarded(base, |mut inst| {
            let inv = curve_invariants(&r)?;
            let m = FracIdeal::maximal(&r);
            let pool = ul_sample(&m, 6, ctx.sub_seed(ri as u64))?;
            let mm = ideal_mod(&m);
            let mg = r.mgens();
            let mut all = true;
            let mut witness = None;
            for s in &pool {
                let e = ext1(&s.module, &mm)?;
                if !kills(&e, &mg)? {
                    all = false;
                    witness.get_or_insert(s.label.clone());
                }
            }
            let ag = inv.is_almost_gorenstein.unwrap_or(false);
            inst.set("minimal_multiplicity", inv.has_minimal_multiplicity);
            inst.set("almost_gorenstein", ag);
            inst.set("m_kills_all", all);
            inst.set("pool", pool.len() as u64);
            if let Some(w) = witness {
                inst.set("witness", w);
            }
            Ok(inst.verdict(inv.has_minimal_multiplicity && ag == all))
        }));
    }
    Ok(out)
}

pub fn redul(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    for label in CURVES {
        let r = ctx.curve(label)?;
        let sg = r.semigroup().expect("curve ring").clone();
        let elems: Vec<i64> = (1..=(sg.conductor() + 2 * sg.multiplicity()) as i64).filter(|&v| sg.contains(v)).collect();
        let mut ideals: Vec<(String, FracIdeal<Local>)> = Vec::new();
        let m = FracIdeal::maximal(&r);
        ideals.push(("m".into(), m.clone()));
        ideals.push(("m^2".into(), m.power(2)));
        for a in elems.iter().take(3) {
            for b in elems.iter().filter(|&&b| b > *a).take(3) {
                ideals.push((format!("(t^{a},t^{b})"), FracIdeal::monomial(&r, &[*a, *b])));
            }
        }
        let mut seen: Vec<FracIdeal<Local>> = Vec::new();
        for (iname, i) in ideals {
            if seen.iter().any(|j| j.equals(&i)) {
                continue;
            }
            seen.push(i.clone());
            let base = Instance::new(label, "m I-Ulrich iff m ⊆ (x) : I").input("I", &iname);
            out.push(guarded(base, |mut inst| {
                let (x, red) = reduction_in_r(&i)?;
                let xr = FracIdeal::from_elems(&r, &[x.clone()]);
                let rhs = xr.colon(&i)?.contains(&m);
                let lhs = is_ulrich(&ideal_mod(&m), &i, 1)?;
                inst.set("reduction", r.fmt_elem(&x));
                inst.set("reduction_number", red);
                inst.set("m_ulrich", lhs);
                inst.set("m_in_colon", rhs);
                Ok(inst.verdict(lhs == rhs))
            }));
        }
    }
    Ok(out)
}

pub fn ulfaith(ctx: &Ctx) -> Out {
    let mut out = Vec::new();
    let r = ctx.curve("D2")?;
    let m = FracIdeal::maximal(&r);
    if let Some(pool) = pool_or_error(&mut out, "D2", "m", ul_sample(&m, 3, ctx.sub_seed(0))) {
        out.extend(over_pairs(ctx, "D2", "m", &pool, "regular: every middle is Ulrich", |e, inst| {
            let ul = ul_sub(ctx, e, &m)?;
            inst.set("ul_classes", ul.len() as u64);
            Ok(ul.len() as u64 == ul.total)
        }));
    }
    for (ri, label) in CURVES.iter().enumerate() {
        let r = ctx.curve(label)?;
        let m = FracIdeal::maximal(&r);
        let Some(ul) = pool_or_error(&mut out, label, "m", ul_sample(&m, 3, ctx.sub_seed(1 + ri as u64))) else {
            continue;
        };
        out.extend(over_pairs(ctx, label, "m", &ul, "singular: N faithful, M ≠ 0 ⇒ some middle not Ulrich", |e, inst| {
            let faithful = e.n.annihilator().is_zero();
            inst.set("faithful_n", faithful);
            if !faithful || e.m.is_zero() {
                return Ok(true);
            }
            let ul = ul_sub(ctx, e, &m)?;
            inst.set("ext_classes", ul.total);
            inst.set("ul_classes", ul.len() as u64);
            Ok((ul.len() as u64) < ul.total)
        }));
    }
    Ok(out)
}
