use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mult::{is_ulrich, reduction_in_r};
use crate::dcoeff::Coeff;
use crate::modules::CoeffModule;
use crate::rings::{FracIdeal, REDUCTION_BUDGET};
use crate::subfun::Sampled;
use crate::{Error, Result};

/// Deterministic sample of I-Ulrich modules (s = 1): B(I), I^n for n at and just
/// above the reduction number, B(I)-multiples of monomial ideals, and direct sums.
/// Every member is checked with `is_ulrich`.
pub fn ul_sample<T: Coeff>(i: &FracIdeal<T>, count: usize, seed: u64) -> Result<Vec<Sampled<T>>> {
    let ring = i.ring();
    let sg = ring
        .semigroup()
        .ok_or_else(|| Error::WrongFamily("Ulrich samples need a one-dimensional ring".into()))?
        .clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (b, _) = i.blow_up_module(REDUCTION_BUDGET)?;
    let (_, r) = reduction_in_r(i)?;
    let mut ideals: Vec<(String, FracIdeal<T>)> = vec![("B(I)".into(), b.clone())];
    let r0 = r.max(1);
    let mut pw = i.power(r0);
    for n in r0..r0 + 2 {
        ideals.push((format!("I^{n}"), pw.clone()));
        pw = pw.product(i);
    }
    let top = (sg.conductor() + 2 * sg.multiplicity()) as i64;
    for _ in 0..4 * count {
        let k = rng.gen_range(1..=2);
        let mut exps: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=top)).collect();
        exps.sort_unstable();
        exps.dedup();
        let j = b.product(&FracIdeal::monomial(ring, &exps));
        let name = exps.iter().map(|a| format!("t^{a}")).collect::<Vec<_>>().join(",");
        ideals.push((format!("B(I)·({name})"), j));
    }
    let fixed = 3;
    let mut out: Vec<Sampled<T>> = Vec::new();
    let mut seen: Vec<Vec<i64>> = Vec::new();
    for (k, (label, j)) in ideals.into_iter().enumerate() {
        if out.len() >= count.saturating_sub(count / 4).max(fixed) {
            break;
        }
        // random members are kept only when new up to multiplication by t^k
        let v = j.valuations()?;
        let lo = v.min();
        let mut key: Vec<i64> = v.minima.iter().map(|m| m - lo).collect();
        key.sort_unstable();
        if k >= fixed && seen.contains(&key) {
            continue;
        }
        seen.push(key);
        out.push(Sampled::new(label, CoeffModule::from_frac_ideal(&j)));
    }
    let base = out.len();
    let mut tries = 0;
    while out.len() < count && tries < 4 * count {
        tries += 1;
        let (a, c) = (rng.gen_range(0..base), rng.gen_range(0..base));
        let label = format!("{} ⊕ {}", out[a].label, out[c].label);
        if out.iter().any(|s| s.label == label) {
            continue;
        }
        let m = CoeffModule::direct_sum(ring, &[out[a].module.clone(), out[c].module.clone()]);
        out.push(Sampled::new(label, m));
    }
    for s in &out {
        if !is_ulrich(&s.module, i, 1)? {
            return Err(Error::Internal(format!("sample member {} is not Ulrich", s.label)));
        }
    }
    Ok(out)
}
