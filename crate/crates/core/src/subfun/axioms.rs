use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::numfn::NumFn;
use super::sample::{sample_modules, SampleSpec, Sampled};
use crate::dcoeff::Coeff;
use crate::ext::{ext1, pullback_seq, pushout_seq, ExtClass, ExtPresentation, Ses};
use crate::modules::{hom, CoeffModule, ModMap};
use crate::rings::{FracIdeal, RingHandle};
use crate::ulrich::{is_ulrich, ul_sample};
use crate::{Error, Result};

/// The class of admissible sequences being tested.
#[derive(Clone)]
pub enum Admissible<T> {
    /// Every listed function is additive.
    Additive(Vec<NumFn<T>>),
    /// All three terms lie in Ul^s_I.
    Ulrich { ideal: FracIdeal<T>, s: u8 },
    /// Broken on purpose: λ(X) (or the D-rank of X) is even.
    EvenMiddleLength,
}

impl<T: Coeff> std::fmt::Debug for Admissible<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

impl<T: Coeff> Admissible<T> {
    pub fn name(&self) -> String {
        match self {
            Admissible::Additive(fs) => fs.iter().map(|f| f.name()).collect::<Vec<_>>().join("+"),
            Admissible::Ulrich { s, .. } => format!("UL(s={s})"),
            Admissible::EvenMiddleLength => "EVEN_MIDDLE".into(),
        }
    }

    pub fn admits(&self, s: &Ses<T>) -> Result<bool> {
        match self {
            Admissible::Additive(fs) => {
                for f in fs {
                    if !f.is_additive(s)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Admissible::Ulrich { ideal, s: d } => {
                for m in [&s.n, &s.x, &s.m] {
                    if !is_ulrich(m, ideal, *d)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Admissible::EvenMiddleLength => {
                let l = s.x.length().unwrap_or(s.x.free_rank() as u64);
                Ok(l % 2 == 0)
            }
        }
    }
}

/// A failed axiom instance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub check: String,
    pub witness: String,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub predicate: String,
    pub checks: u64,
    pub by_kind: BTreeMap<String, u64>,
    /// Cases abandoned on a resource budget.
    pub skipped: u64,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    fn record(&mut self, kind: &str, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        *self.by_kind.entry(kind.to_string()).or_default() += 1;
        if !ok {
            self.violations.push(Violation {
                check: kind.to_string(),
                witness: witness(),
            });
        }
    }

    fn merge(&mut self, o: AxiomReport) {
        self.checks += o.checks;
        for (k, v) in o.by_kind {
            *self.by_kind.entry(k).or_default() += v;
        }
        self.skipped += o.skipped;
        self.violations.extend(o.violations);
    }
}

fn describe<T: Coeff>(m: &CoeffModule<T>) -> String {
    format!("[tors={:?} free={} mu={}]", m.torsion(), m.free_rank(), m.mu())
}

fn random_map<T: Coeff>(a: &Arc<CoeffModule<T>>, b: &Arc<CoeffModule<T>>, rng: &mut ChaCha8Rng) -> Result<ModMap<T>> {
    let h = hom(a, b)?;
    let p = a.prime();
    let mut v = h.module.zero_vec();
    for x in v.iter_mut() {
        *x = T::from_i64(p, rng.gen_range(0..p as i64));
    }
    Ok(h.to_map(&v))
}

fn random_ring_elem<T: Coeff>(ring: &RingHandle<T>, rng: &mut ChaCha8Rng) -> Vec<T> {
    let p = ring.prime();
    (0..ring.rank()).map(|_| T::from_i64(p, rng.gen_range(0..p as i64))).collect()
}

fn budget_skip<T>(r: Result<T>, report: &mut AxiomReport) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::ResourceBudget(_)) | Err(Error::StabilizationBudget(_)) => {
            report.skipped += 1;
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn sampled_classes<T: Coeff>(pres: &ExtPresentation<T>, k: usize, max: u64, rng: &mut ChaCha8Rng) -> Result<Vec<ExtClass<T>>> {
    let mut all = pres.all_classes(max)?;
    let zero = all.remove(0);
    all.shuffle(rng);
    all.truncate(k.saturating_sub(1));
    all.insert(0, zero);
    Ok(all)
}

/// 0 → M → M → 0 → 0 and 0 → 0 → M → M → 0.
pub fn identity_sequences<T: Coeff>(m: &Arc<CoeffModule<T>>) -> [Ses<T>; 2] {
    let z = CoeffModule::zero(m.ring());
    [
        Ses::new_unchecked(ModMap::identity(m), ModMap::zero(m, &z)),
        Ses::new_unchecked(ModMap::zero(&z, m), ModMap::identity(m)),
    ]
}

/// 0 → ker(q) → X → Z → 0 for the composite q = p2∘p1 of two deflations.
pub fn composite_deflation<T: Coeff>(s1: &Ses<T>, s2: &Ses<T>) -> Result<Ses<T>> {
    let q = s2.p.compose(&s1.p);
    let (k, inc) = s1.x.submodule(&q.kernel());
    let s = Ses::new_unchecked(ModMap::new_unchecked(&k, &s1.x, inc), q);
    if !s.is_exact() {
        return Err(Error::Internal(format!("composite deflation not exact: {:?}", s.exactness_defects())));
    }
    Ok(s)
}

struct Case<'a, T> {
    pred: &'a Admissible<T>,
    pool: &'a [Sampled<T>],
    spec: &'a SampleSpec,
}

impl<T: Coeff> Case<'_, T> {
    fn run(&self, mi: usize, ni: usize, seed: u64) -> Result<AxiomReport> {
        let mut rep = AxiomReport::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ms, ns) = (&self.pool[mi], &self.pool[ni]);
        let tag = format!("M={} N={}", ms.label, ns.label);
        let pres = ext1(&ms.module, &ns.module)?;
        let Some(classes) = budget_skip(sampled_classes(&pres, self.spec.classes_per_pair, self.spec.max_classes, &mut rng), &mut rep)? else {
            return Ok(rep);
        };
        let mut admissible = Vec::new();
        for c in &classes {
            let s = pres.middle(c);
            let a = self.pred.admits(&s)?;
            let w = || format!("{tag} class={:?}", c.coords);
            let alt_n = pushout_seq(&s, &ModMap::identity(&s.n)).0;
            rep.record("iso", self.pred.admits(&alt_n)? == a, w);
            let alt_m = pullback_seq(&s, &ModMap::identity(&s.m)).0;
            rep.record("iso", self.pred.admits(&alt_m)? == a, w);
            if !a {
                continue;
            }
            for _ in 0..self.spec.maps_per_case {
                let t = &self.pool[rng.gen_range(0..self.pool.len())];
                if let Some(f) = budget_skip(random_map(&s.n, &t.module, &mut rng), &mut rep)? {
                    let po = pushout_seq(&s, &f).0;
                    rep.record("pushout", self.pred.admits(&po)?, || format!("{} along N → {} {}", w(), t.label, describe(&po.x)));
                }
                let u = &self.pool[rng.gen_range(0..self.pool.len())];
                if let Some(g) = budget_skip(random_map(&u.module, &s.m, &mut rng), &mut rep)? {
                    let pb = pullback_seq(&s, &g).0;
                    rep.record("pullback", self.pred.admits(&pb)?, || format!("{} along {} → M {}", w(), u.label, describe(&pb.x)));
                }
            }
            admissible.push((c.clone(), s));
        }
        for (a, _) in &admissible {
            for (b, _) in admissible.iter().take(3) {
                let c = pres.add(a, b);
                rep.record("sum", self.pred.admits(&pres.middle(&c))?, || {
                    format!("{tag} {:?} + {:?}", a.coords, b.coords)
                });
            }
            let r = random_ring_elem(ms.module.ring(), &mut rng);
            let c = pres.scalar(&r, a);
            rep.record("scalar", self.pred.admits(&pres.middle(&c))?, || {
                format!("{tag} {} · {:?}", ms.module.ring().fmt_elem(&r), a.coords)
            });
        }
        // composition: an admissible s1 ending in the middle of an admissible s2
        if let Some((_, s2)) = admissible.iter().find(|(c, _)| !pres.is_zero(c)).or(admissible.first()) {
            let top = &self.pool[rng.gen_range(0..self.pool.len())];
            let pres1 = ext1(&s2.x, &top.module)?;
            if let Some(cands) = budget_skip(sampled_classes(&pres1, self.spec.classes_per_pair, self.spec.max_classes, &mut rng), &mut rep)? {
                for c1 in cands.iter().rev() {
                    let s1 = pres1.middle(c1);
                    if self.pred.admits(&s1)? {
                        let comp = composite_deflation(&s1, s2)?;
                        rep.record("composition", self.pred.admits(&comp)?, || {
                            format!("{tag} then N1={} class={:?} kernel {}", top.label, c1.coords, describe(&comp.n))
                        });
                        break;
                    }
                }
            }
        }
        Ok(rep)
    }
}

/// Seeded empirical check of the exact-structure axioms for `pred` on a module pool.
pub fn check_exact_axioms_on<T: Coeff>(pred: &Admissible<T>, pool: &[Sampled<T>], spec: &SampleSpec, seed: u64) -> Result<AxiomReport> {
    let mut report = AxiomReport {
        predicate: pred.name(),
        ..Default::default()
    };
    if pool.is_empty() {
        return Ok(report);
    }
    for m in pool {
        for (k, s) in identity_sequences(&m.module).iter().enumerate() {
            report.record("identity", pred.admits(s)?, || format!("{} identity sequence {k}", m.label));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(usize, usize, u64)> = (0..spec.pairs)
        .map(|_| (rng.gen_range(0..pool.len()), rng.gen_range(0..pool.len()), rng.gen()))
        .collect();
    let case = Case { pred, pool, spec };
    let parts: Vec<AxiomReport> = cases
        .par_iter()
        .map(|&(mi, ni, s)| case.run(mi, ni, s))
        .collect::<Result<_>>()?;
    for p in parts {
        report.merge(p);
    }
    report.violations.sort();
    Ok(report)
}

/// As `check_exact_axioms_on`, with the pool drawn by `sample_modules`, or by
/// `ul_sample` (s = 1) / the Ulrich members of `sample_modules` (s = 0) for the
/// Ulrich predicate.
pub fn check_exact_axioms<T: Coeff>(pred: &Admissible<T>, ring: &Arc<RingHandle<T>>, spec: &SampleSpec, seed: u64) -> Result<AxiomReport> {
    let pool = match pred {
        Admissible::Ulrich { ideal, s: 1 } => ul_sample(ideal, spec.modules, seed)?,
        Admissible::Ulrich { ideal, s } => {
            let mut out = Vec::new();
            for m in sample_modules(ring, spec, seed)? {
                if is_ulrich(&m.module, ideal, *s)? {
                    out.push(m);
                }
            }
            out
        }
        _ => sample_modules(ring, spec, seed)?,
    };
    check_exact_axioms_on(pred, &pool, spec, seed)
}
