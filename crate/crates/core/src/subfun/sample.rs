use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dcoeff::Coeff;
use crate::modules::CoeffModule;
use crate::rings::{FracIdeal, RingHandle};
use crate::Result;

/// A labelled sample module.
#[derive(Clone)]
pub struct Sampled<T> {
    pub label: String,
    pub module: Arc<CoeffModule<T>>,
}

impl<T: Coeff> std::fmt::Debug for Sampled<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {:?}", self.label, self.module)
    }
}

impl<T> Sampled<T> {
    pub fn new(label: impl Into<String>, module: Arc<CoeffModule<T>>) -> Self {
        Sampled {
            label: label.into(),
            module,
        }
    }
}

/// Size caps for generated samples.
#[derive(Clone, Debug)]
pub struct SampleSpec {
    /// Number of modules in a generated pool.
    pub modules: usize,
    /// Largest λ(R/J) for cyclic quotients R/J.
    pub max_quotient_length: u64,
    /// Module pairs (M, N) visited by the axiom checker.
    pub pairs: usize,
    /// Classes drawn per pair.
    pub classes_per_pair: usize,
    /// Random maps drawn per admissible sequence.
    pub maps_per_case: usize,
    /// Largest |Ext¹| enumerated.
    pub max_classes: u64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            modules: 8,
            max_quotient_length: 4,
            pairs: 12,
            classes_per_pair: 4,
            maps_per_case: 2,
            max_classes: 1 << 10,
        }
    }
}

fn monomial_ideals<T: Coeff>(ring: &Arc<RingHandle<T>>, cap: u64, rng: &mut ChaCha8Rng) -> Vec<(String, FracIdeal<T>)> {
    let mut out = Vec::new();
    if let Some(sg) = ring.semigroup() {
        let c = sg.conductor() as i64 + sg.multiplicity() as i64 + cap as i64;
        let elems: Vec<i64> = (1..=c).filter(|&v| sg.contains(v)).collect();
        for &a in &elems {
            out.push((format!("(t^{a})"), FracIdeal::monomial(ring, &[a])));
        }
        for _ in 0..4 {
            let k = rng.gen_range(1..=2);
            let mut pick: Vec<i64> = elems.choose_multiple(rng, k).copied().collect();
            pick.sort_unstable();
            let name = pick.iter().map(|a| format!("t^{a}")).collect::<Vec<_>>().join(",");
            out.push((format!("({name})"), FracIdeal::monomial(ring, &pick)));
        }
    } else if let (Some(mons), Some(vars)) = (ring.monomials(), ring.variables()) {
        let nonunit: Vec<&Vec<u32>> = mons.iter().filter(|w| w.iter().any(|&e| e > 0)).collect();
        let show = |w: &Vec<u32>| {
            w.iter()
                .zip(vars)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect::<String>()
        };
        for w in &nonunit {
            let x = ring.monomial(w).expect("basis monomial");
            out.push((format!("({})", show(w)), FracIdeal::from_elems(ring, &[x])));
        }
        for _ in 0..4 {
            let k = rng.gen_range(1..=2.min(nonunit.len().max(1)));
            let pick: Vec<&&Vec<u32>> = nonunit.choose_multiple(rng, k).collect();
            let elems: Vec<Vec<T>> = pick.iter().map(|w| ring.monomial(w).unwrap()).collect();
            let name = pick.iter().map(|w| show(w)).collect::<Vec<_>>().join(",");
            out.push((format!("({name})"), FracIdeal::from_elems(ring, &elems)));
        }
    }
    out
}

/// Deterministic pool: k, R, m, ω (when defined), cyclic quotients R/J with
/// λ(R/J) ≤ cap, and direct sums of two earlier members.
pub fn sample_modules<T: Coeff>(ring: &Arc<RingHandle<T>>, spec: &SampleSpec, seed: u64) -> Result<Vec<Sampled<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = vec![
        Sampled::new("k", CoeffModule::residue_field(ring)),
        Sampled::new("R", CoeffModule::free(ring, 1)),
        Sampled::new("m", CoeffModule::from_frac_ideal(&FracIdeal::maximal(ring))),
    ];
    if let Ok(w) = CoeffModule::canonical_module(ring) {
        pool.push(Sampled::new("ω", w));
    }
    let mut quotients = Vec::new();
    let mut used: Vec<FracIdeal<T>> = Vec::new();
    for (name, j) in monomial_ideals(ring, spec.max_quotient_length, &mut rng) {
        if j.quotient_length().is_ok_and(|l| l >= 2 && l <= spec.max_quotient_length) && !used.iter().any(|u| u.equals(&j)) {
            quotients.push(Sampled::new(format!("R/{name}"), CoeffModule::from_quotient(&j)?));
            used.push(j);
        }
    }
    quotients.shuffle(&mut rng);
    pool.extend(quotients);
    pool.truncate((spec.modules * 3 / 4).max(2));
    let base = pool.len();
    let mut sums = 0;
    while pool.len() < spec.modules && sums < 4 * spec.modules {
        sums += 1;
        let (a, b) = (rng.gen_range(0..base), rng.gen_range(0..base));
        let label = format!("{} ⊕ {}", pool[a].label, pool[b].label);
        if pool.iter().any(|q| q.label == label) {
            continue;
        }
        let m = CoeffModule::direct_sum(ring, &[pool[a].module.clone(), pool[b].module.clone()]);
        pool.push(Sampled::new(label, m));
    }
    Ok(pool)
}
