use std::collections::HashSet;
use std::sync::Arc;

use subext_core::dcoeff::{Coeff, Local};
use subext_core::ext::*;
use subext_core::modules::*;
use subext_core::rings::*;
use subext_core::subfun::*;
use subext_core::ulrich::ul_sample;

type M<T> = Arc<CoeffModule<T>>;

fn dvr(p: u16) -> Arc<CurveRing> {
    Arc::new(RingHandle::dvr(p).unwrap())
}

fn curve(gens: &[u32]) -> Arc<CurveRing> {
    Arc::new(RingHandle::numerical(2, gens).unwrap())
}

fn quot_t<T: Coeff>(r: &Arc<RingHandle<T>>, exps: &[i64]) -> M<T> {
    CoeffModule::from_quotient(&FracIdeal::monomial(r, exps)).unwrap()
}

/// The additive closure of {g·c : g ∈ gens, c ∈ Ext¹}.
fn ideal_times_ext<T: Coeff>(e: &ExtPresentation<T>, gens: &[Vec<T>]) -> HashSet<ExtClass<T>> {
    let all = e.all_classes(ENUM_BUDGET).unwrap();
    let mut set: HashSet<ExtClass<T>> = HashSet::from([e.zero()]);
    for g in gens {
        for c in &all {
            set.insert(e.scalar(g, c));
        }
    }
    loop {
        let items: Vec<_> = set.iter().cloned().collect();
        let before = set.len();
        for a in &items {
            for b in &items {
                set.insert(e.add(a, b));
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

fn set_of<T: Coeff>(s: &SubExt<T>) -> HashSet<ExtClass<T>> {
    s.classes.iter().cloned().collect()
}

/// A class whose middle object is isomorphic to `x`.
fn class_with_middle<T: Coeff>(e: &ExtPresentation<T>, x: &M<T>) -> Ses<T> {
    e.all_classes(ENUM_BUDGET)
        .unwrap()
        .into_iter()
        .map(|c| e.middle(&c))
        .find(|s| is_isomorphic(&s.x, x).unwrap())
        .expect("no class with the requested middle")
}

#[test]
fn eval_examples() {
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    assert_eq!(NumFn::Mu.eval(&CoeffModule::free(&r, 2)).unwrap(), 2);
    assert_eq!(NumFn::Nu(m.clone()).eval(&CoeffModule::residue_field(&r)).unwrap(), 1);
    assert_eq!(NumFn::Et(m.clone()).eval(&CoeffModule::free(&r, 1)).unwrap(), 0);
    let k = CoeffModule::residue_field(&r);
    assert!(matches!(NumFn::Et(m.clone()).eval(&k), Err(subext_core::Error::NotCm)));
    let d = dvr(2);
    let c = quot_t(&d, &[2]);
    assert_eq!(NumFn::LenHomFrom(c.clone()).eval(&quot_t(&d, &[4])).unwrap(), 2);
    assert_eq!(NumFn::LenHomTo(c.clone()).eval(&quot_t(&d, &[1])).unwrap(), 1);
    assert_eq!(NumFn::LenTensor(c.clone()).eval(&CoeffModule::free(&d, 3)).unwrap(), 6);
    assert!(NumFn::LenTensor(CoeffModule::free(&d, 1)).eval(&c).is_err());
}

#[test]
fn et_matches_syzygy_formula() {
    // With 0 → Ω → F → M → 0: λ Tor₁(M, R/J) = ν_J(Ω) − μ(M)·λ(R/J) + ν_J(M).
    for gens in [&[2u32, 3][..], &[3, 4, 5], &[2, 5]] {
        let r = curve(gens);
        let m = FracIdeal::maximal(&r);
        let mods: Vec<M<Local>> = vec![
            CoeffModule::free(&r, 1),
            CoeffModule::from_frac_ideal(&m),
            CoeffModule::canonical_module(&r).unwrap(),
            CoeffModule::from_frac_ideal(&FracIdeal::monomial(&r, &[0, 1])),
        ];
        for x in &mods {
            let (v, seen) = et_value(&m, x).unwrap();
            let n = seen.len() as u32;
            let j = m.power(n);
            let omega = x.syzygy(1);
            let formula = omega.nu(&j).unwrap() as i64 - (x.mu() as i64) * j.quotient_length().unwrap() as i64 + x.nu(&j).unwrap() as i64;
            assert_eq!(v as i64, formula, "{gens:?}");
        }
    }
}

#[test]
fn additivity_examples() {
    let d = dvr(2);
    let q2 = quot_t(&d, &[2]);
    let e = ext1(&q2, &q2).unwrap();
    let s = class_with_middle(&e, &quot_t(&d, &[4]));
    assert!(!NumFn::Mu.is_additive(&s).unwrap());
    assert!(!NumFn::Nu(FracIdeal::monomial(&d, &[3])).is_additive(&s).unwrap());
    let split = Ses::split(&q2, &q2);
    let fns = [
        NumFn::Mu,
        NumFn::Nu(FracIdeal::maximal(&d)),
        NumFn::LenHomFrom(q2.clone()),
        NumFn::LenHomTo(q2.clone()),
        NumFn::LenTensor(q2.clone()),
    ];
    for f in &fns {
        assert!(f.is_additive(&split).unwrap(), "{f:?}");
    }
}

#[test]
fn dvr_mu_subfunctor_is_m_times_ext() {
    let d = dvr(2);
    let q2 = quot_t(&d, &[2]);
    let e = ext1(&q2, &q2).unwrap();
    let sub = ext1_sub(&e, &[NumFn::Mu], ENUM_BUDGET).unwrap();
    assert_eq!(sub.len(), 2);
    assert_eq!(set_of(&sub), ideal_times_ext(&e, &d.mgens()));
    assert!(sub.certificate.is_closed());
    assert_eq!(sub.invariants(), (vec![1], 0));
}

#[test]
fn loewy_pair_cuts_to_zero() {
    let d = dvr(2);
    let q2 = quot_t(&d, &[2]);
    let e = ext1(&q2, &CoeffModule::free(&d, 1)).unwrap();
    let both = ext1_sub(&e, &[NumFn::Mu, NumFn::LenTensor(q2.clone())], ENUM_BUDGET).unwrap();
    assert_eq!(both.classes, vec![e.zero()]);
    let mu = ext1_sub(&e, &[NumFn::Mu], ENUM_BUDGET).unwrap();
    let phi = ext1_sub(&e, &[NumFn::LenTensor(q2.clone())], ENUM_BUDGET).unwrap();
    let t_class = e.scalar(&d.mgens()[0], &e.generators()[0]);
    assert!(!e.is_zero(&t_class));
    assert!(mu.contains(&t_class));
    assert!(!phi.contains(&t_class));
}

#[test]
fn subsets_are_submodules_and_contain_zero() {
    for gens in [&[2u32, 3][..], &[3, 4, 5]] {
        let r = curve(gens);
        let m = FracIdeal::maximal(&r);
        let k = CoeffModule::residue_field(&r);
        let mm = CoeffModule::from_frac_ideal(&m);
        let w = CoeffModule::canonical_module(&r).unwrap();
        let rr = CoeffModule::free(&r, 1);
        for (a, b) in [(&k, &rr), (&mm, &rr), (&k, &mm), (&mm, &mm), (&w, &mm)] {
            let e = ext1(a, b).unwrap();
            for fns in [vec![NumFn::Mu], vec![NumFn::Nu(m.clone())], vec![NumFn::Mu, NumFn::Nu(m.power(2))]] {
                let sub = ext1_sub(&e, &fns, ENUM_BUDGET).unwrap();
                assert!(sub.contains(&e.zero()));
                assert!(sub.certificate.is_closed(), "{:?}", sub.certificate.violations);
                assert_eq!(sub.certificate.span_size, sub.len() as u64);
            }
        }
    }
}

#[test]
fn ideal_times_ext_is_nu_additive() {
    for gens in [&[2u32, 3][..], &[3, 4, 5]] {
        let r = curve(gens);
        let m = FracIdeal::maximal(&r);
        let mods = [
            CoeffModule::residue_field(&r),
            CoeffModule::from_frac_ideal(&m),
            CoeffModule::canonical_module(&r).unwrap(),
        ];
        for i in [m.clone(), m.power(2)] {
            let igens: Vec<Vec<Local>> = i.gens().iter().map(|g| r.from_ambient(g).unwrap()).collect();
            for a in &mods {
                for b in &mods {
                    let e = ext1(a, b).unwrap();
                    let nu = ext1_sub(&e, &[NumFn::Nu(i.clone())], ENUM_BUDGET).unwrap();
                    for c in ideal_times_ext(&e, &igens) {
                        assert!(nu.contains(&c));
                    }
                }
            }
        }
    }
}

#[test]
fn naturality_of_mu_subfunctor() {
    let r = curve(&[2, 3]);
    let k = CoeffModule::residue_field(&r);
    let mm = CoeffModule::from_frac_ideal(&FracIdeal::maximal(&r));
    let rr = CoeffModule::free(&r, 1);
    for (m, n, n2) in [(&k, &mm, &rr), (&k, &rr, &mm), (&mm, &mm, &rr)] {
        let src = ext1(m, n).unwrap();
        let dst = ext1(m, n2).unwrap();
        let sub_src = ext1_sub(&src, &[NumFn::Mu], ENUM_BUDGET).unwrap();
        let sub_dst = ext1_sub(&dst, &[NumFn::Mu], ENUM_BUDGET).unwrap();
        for f in hom(n, n2).unwrap().basis_maps() {
            let mat = ext_map_covariant(&src, &dst, &f).unwrap();
            for c in &sub_src.classes {
                assert!(sub_dst.contains(&dst.class(mat.mul_vec(&c.coords))));
            }
        }
    }
}

#[test]
fn hom_exactness_matches_length_additivity() {
    let d = dvr(2);
    let q2 = quot_t(&d, &[2]);
    let e = ext1(&q2, &q2).unwrap();
    let s = class_with_middle(&e, &quot_t(&d, &[4]));
    let h = hom_exactness_subfunctor(&q2, HomSide::From, &s).unwrap();
    assert!(!h.exact && h.agree());
    let split = Ses::split(&q2, &q2);
    for side in [HomSide::From, HomSide::To] {
        let h = hom_exactness_subfunctor(&q2, side, &split).unwrap();
        assert!(h.exact && h.additive);
    }
    let mut checked = 0;
    for gens in [&[1u32][..], &[2, 3]] {
        let r = curve(gens);
        let pool = sample_modules(&r, &SampleSpec::default(), 5).unwrap();
        let tests = [CoeffModule::residue_field(&r), quot_t(&r, &[gens[0] as i64])];
        for a in pool.iter().take(5) {
            for b in pool.iter().take(5) {
                let e = ext1(&a.module, &b.module).unwrap();
                let Ok(classes) = e.all_classes(64) else { continue };
                for c in classes.iter().take(6) {
                    let s = e.middle(c);
                    for t in &tests {
                        for side in [HomSide::From, HomSide::To] {
                            assert!(hom_exactness_subfunctor(t, side, &s).unwrap().agree());
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked >= 100, "{checked}");
}

#[test]
fn axioms_hold_for_mu_and_nu() {
    let d = dvr(2);
    let spec = SampleSpec::default();
    let pool: Vec<Sampled<Local>> = (1..=4).map(|a| Sampled::new(format!("R/t^{a}"), quot_t(&d, &[a]))).collect();
    let rep = check_exact_axioms_on(&Admissible::Additive(vec![NumFn::Mu]), &pool, &spec, 1).unwrap();
    assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    assert!(rep.checks > 20);
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    let ul = ul_sample(&m, 5, 3).unwrap();
    let rep = check_exact_axioms_on(&Admissible::Additive(vec![NumFn::Nu(m.clone())]), &ul, &spec, 2).unwrap();
    assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    let rep = check_exact_axioms(&Admissible::Ulrich { ideal: m.clone(), s: 1 }, &r, &spec, 4).unwrap();
    assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    assert!(rep.by_kind.contains_key("composition"));
}

#[test]
fn negative_control_is_caught() {
    let d = dvr(2);
    let rep = check_exact_axioms(&Admissible::EvenMiddleLength, &d, &SampleSpec::default(), 1).unwrap();
    assert!(!rep.violations.is_empty());
    assert!(rep.violations.iter().any(|v| v.check == "identity"));
}

#[test]
fn axiom_reports_are_deterministic() {
    let r = curve(&[2, 3]);
    let spec = SampleSpec::default();
    let a = check_exact_axioms(&Admissible::Additive(vec![NumFn::Mu]), &r, &spec, 9).unwrap();
    let b = check_exact_axioms(&Admissible::Additive(vec![NumFn::Mu]), &r, &spec, 9).unwrap();
    assert_eq!((a.checks, &a.by_kind, &a.violations), (b.checks, &b.by_kind, &b.violations));
}

#[test]
fn mu_lattice_matches_enumeration() {
    let r = curve(&[2, 3]);
    let d = dvr(3);
    let k = CoeffModule::residue_field(&r);
    let mm = CoeffModule::from_frac_ideal(&FracIdeal::maximal(&r));
    let q = quot_t(&r, &[2]);
    let dq: Vec<M<Local>> = vec![quot_t(&d, &[1]), quot_t(&d, &[2]), CoeffModule::direct_sum(&d, &[quot_t(&d, &[1]), quot_t(&d, &[3])])];
    let mut pairs = vec![(k.clone(), mm.clone()), (k.clone(), k.clone()), (mm.clone(), mm.clone()), (q.clone(), k.clone()), (q.clone(), q.clone())];
    for a in &dq {
        for b in &dq {
            pairs.push((a.clone(), b.clone()));
        }
    }
    for (a, b) in pairs {
        let e = ext1(&a, &b).unwrap();
        let sub = ext1_sub(&e, &[NumFn::Mu], ENUM_BUDGET).unwrap();
        let lat = ext1_mu_lattice(&e);
        let by_lat: HashSet<_> = e.all_classes(ENUM_BUDGET).unwrap().into_iter().filter(|c| e.in_lattice(&lat, c)).collect();
        assert!(sub.same_as(&by_lat));
        assert_eq!(e.lattice_length(&lat).unwrap(), sub.span.length().unwrap());
    }
}
