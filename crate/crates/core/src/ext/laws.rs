use std::sync::Arc;

use super::presentation::{ExtClass, ExtPresentation};
use super::ses::{long_exact_defects, Ses};
use crate::dcoeff::Coeff;
use crate::modules::CoeffModule;
use crate::rings::RingHandle;
use crate::Result;

/// Classes whose pairwise laws are checked exhaustively; later ones only against a prefix.
const PAIR_PREFIX: usize = 48;
const DIAGRAM_PREFIX: usize = 4;
const LONG_EXACT_CLASSES: usize = 3;

/// Defect counts of one presentation under the engine laws.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub classes: u64,
    pub checks: u64,
    pub defects: Vec<String>,
}

/// 0, 1, -1, the generators of m and 1 + (first generator).
pub fn test_scalars<T: Coeff>(r: &RingHandle<T>) -> Vec<Vec<T>> {
    let mut out = vec![r.zero(), r.one(), r.scalar(T::from_i64(r.prime(), -1))];
    let mg = r.mgens();
    out.extend(mg.iter().cloned());
    if let Some(g) = mg.first() {
        out.push(r.add(&r.one(), g));
    }
    out
}

/// Baer group laws, middle/classify round trip, scalars through both diagrams,
/// Baer sums through the diagram, and long exactness of Hom/Ext along middles.
pub fn engine_laws<T: Coeff>(e: &ExtPresentation<T>, budget: u64) -> Result<LawReport> {
    let ring = e.m.ring().clone();
    let classes = e.all_classes(budget)?;
    let scalars = test_scalars(&ring);
    let mut rep = LawReport {
        classes: classes.len() as u64,
        ..Default::default()
    };
    let mut check = |ok: bool, what: String| {
        rep.checks += 1;
        if !ok {
            rep.defects.push(what);
        }
    };
    let fmt = |c: &ExtClass<T>| format!("{:?}", c.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    check(e.is_zero(&e.classify(&Ses::split(&e.n, &e.m))?), "split sequence is not zero".into());
    for c in &classes {
        let s = e.middle(c);
        check(s.is_exact(), format!("middle of {} not exact", fmt(c)));
        check(&e.classify(&s)? == c, format!("classify(middle({})) differs", fmt(c)));
        for r in &scalars {
            let direct = e.scalar(r, c);
            check(e.scalar_via_pullback(r, c)? == direct, format!("pullback scalar on {}", fmt(c)));
            check(e.scalar_via_pushout(r, c)? == direct, format!("pushout scalar on {}", fmt(c)));
        }
        check(e.add(c, &e.zero()) == *c, format!("zero is not neutral for {}", fmt(c)));
        check(e.is_zero(&e.add(c, &e.neg(c))), format!("no inverse for {}", fmt(c)));
    }
    for (ia, a) in classes.iter().enumerate() {
        for (ib, b) in classes.iter().enumerate() {
            if ia >= PAIR_PREFIX && ib >= PAIR_PREFIX {
                continue;
            }
            let s = e.add(a, b);
            check(s == e.add(b, a), format!("sum of {} and {} not commutative", fmt(a), fmt(b)));
            for r in &scalars {
                check(
                    e.scalar(r, &s) == e.add(&e.scalar(r, a), &e.scalar(r, b)),
                    format!("scalar not distributive on {} + {}", fmt(a), fmt(b)),
                );
            }
            for c in classes.iter().take(DIAGRAM_PREFIX) {
                check(e.add(&s, c) == e.add(a, &e.add(b, c)), format!("sum not associative at {}", fmt(a)));
            }
        }
    }
    for a in classes.iter().take(DIAGRAM_PREFIX) {
        for b in classes.iter().take(DIAGRAM_PREFIX) {
            check(e.baer_sum_via_diagram(a, b)? == e.add(a, b), format!("diagram Baer sum of {} and {}", fmt(a), fmt(b)));
        }
    }
    let tests: Vec<Arc<CoeffModule<T>>> = vec![e.m.clone(), e.n.clone(), CoeffModule::residue_field(&ring)];
    for c in classes.iter().filter(|c| !e.is_zero(c)).take(LONG_EXACT_CLASSES) {
        let s = e.middle(c);
        for a in &tests {
            let bad = long_exact_defects(&s, a)?;
            check(bad.is_empty(), format!("long exact sequence fails at {bad:?} for {}", fmt(c)));
        }
    }
    Ok(rep)
}
