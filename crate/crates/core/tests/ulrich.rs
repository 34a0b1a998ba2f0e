use std::collections::HashSet;
use std::sync::Arc;

use subext_core::dcoeff::{Coeff, Local};
use subext_core::ext::*;
use subext_core::modules::*;
use subext_core::rings::*;
use subext_core::subfun::{ext1_sub, NumFn};
use subext_core::ulrich::*;
use subext_core::Error;

type M<T> = Arc<CoeffModule<T>>;

fn curve(gens: &[u32]) -> Arc<CurveRing> {
    Arc::new(RingHandle::numerical(2, gens).unwrap())
}

fn dvr() -> Arc<CurveRing> {
    Arc::new(RingHandle::dvr(2).unwrap())
}

fn ideal_mod(i: &FracIdeal<Local>) -> M<Local> {
    CoeffModule::from_frac_ideal(i)
}

fn blowup_mod(i: &FracIdeal<Local>) -> M<Local> {
    ideal_mod(&i.blow_up_module(REDUCTION_BUDGET).unwrap().0)
}

/// The additive closure of x·Ext¹ for a ring element x.
fn elem_times_ext<T: Coeff>(e: &ExtPresentation<T>, x: &[T]) -> HashSet<ExtClass<T>> {
    e.all_classes(ENUM_BUDGET).unwrap().iter().map(|c| e.scalar(x, c)).collect()
}

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

#[test]
fn multiplicity_examples() {
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    assert_eq!(multiplicity(&m, &CoeffModule::free(&r, 1)).unwrap().e, 2);
    let k = multiplicity(&m, &CoeffModule::residue_field(&r)).unwrap();
    assert_eq!((k.e, k.dim), (1, 0));
    assert_eq!(multiplicity(&m, &blowup_mod(&m)).unwrap().e, 2);
    assert!(matches!(multiplicity(&FracIdeal::unit(&r), &k_of(&r)), Err(Error::NotMPrimary(_))));
}

fn k_of(r: &Arc<CurveRing>) -> M<Local> {
    CoeffModule::residue_field(r)
}

#[test]
fn multiplicity_of_monomial_ideals_is_least_valuation() {
    // e(I, L) = rank(L)·min v(I) for monomial I over a semigroup ring
    for gens in [&[2u32, 3][..], &[3, 4, 5], &[2, 5], &[3, 5, 7], &[4, 5, 6, 7]] {
        let r = curve(gens);
        let sg = r.semigroup().unwrap().clone();
        let elems: Vec<i64> = (1..=sg.conductor() as i64 + 6).filter(|&v| sg.contains(v)).collect();
        for w in elems.windows(2).take(4) {
            let i = FracIdeal::monomial(&r, w);
            for (l, rank) in [(CoeffModule::free(&r, 1), 1), (ideal_mod(&FracIdeal::maximal(&r)), 1), (CoeffModule::free(&r, 2), 2)] {
                let rep = multiplicity(&i, &l).unwrap();
                assert_eq!(rep.e, rank * w[0] as u64, "{gens:?} {w:?}");
                assert_eq!(rep.by_reduction, rep.by_hilbert);
            }
        }
    }
}

#[test]
fn phi_examples_and_bounds() {
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    assert_eq!(phi_i(&m, &ideal_mod(&m)).unwrap(), 0);
    assert_eq!(phi_i(&m, &CoeffModule::free(&r, 1)).unwrap(), -1);
    assert_eq!(phi_i(&m.power(2), &k_of(&r)).unwrap(), 0);
    let torsion_mixed = CoeffModule::direct_sum(&r, &[k_of(&r), CoeffModule::free(&r, 1)]);
    assert!(matches!(phi_i(&m, &torsion_mixed), Err(Error::NotCm)));
    for gens in [&[3u32, 4, 5][..], &[2, 5]] {
        let r = curve(gens);
        let m = FracIdeal::maximal(&r);
        let a = ideal_mod(&m);
        let b = CoeffModule::canonical_module(&r).unwrap();
        let s = CoeffModule::direct_sum(&r, &[a.clone(), b.clone()]);
        let (pa, pb, ps) = (phi_i(&m, &a).unwrap(), phi_i(&m, &b).unwrap(), phi_i(&m, &s).unwrap());
        assert!(pa <= 0 && pb <= 0);
        assert_eq!(ps, pa + pb);
    }
}

#[test]
fn ulrich_examples() {
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    assert!(is_ulrich(&ideal_mod(&m), &m, 1).unwrap());
    assert!(!is_ulrich(&CoeffModule::free(&r, 1), &m, 1).unwrap());
    assert!(!is_ulrich(&ideal_mod(&m), &m, 0).unwrap());
    assert!(is_ulrich(&k_of(&r), &m, 0).unwrap());
    let d = dvr();
    let t = FracIdeal::maximal(&d);
    for x in [CoeffModule::free(&d, 1), CoeffModule::free(&d, 3), ideal_mod(&FracIdeal::monomial(&d, &[2]))] {
        assert!(is_ulrich(&x, &t, 1).unwrap());
    }
}

#[test]
fn ulrich_samples() {
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    let s = ul_sample(&m, 6, 1).unwrap();
    let labels: Vec<&str> = s.iter().map(|x| x.label.as_str()).collect();
    for want in ["B(I)", "I^1", "I^2"] {
        assert!(labels.contains(&want), "{labels:?}");
    }
    assert!(s.iter().any(|x| is_isomorphic(&x.module, &ideal_mod(&m)).unwrap()));
    let d = dvr();
    let s = ul_sample(&FracIdeal::maximal(&d), 4, 1).unwrap();
    assert!(s.iter().any(|x| is_isomorphic(&x.module, &CoeffModule::free(&d, 1)).unwrap()));
    let r = curve(&[3, 4, 5]);
    let s = ul_sample(&FracIdeal::maximal(&r), 5, 2).unwrap();
    assert!(s.len() >= 3);
    assert_eq!(ul_sample(&FracIdeal::maximal(&r), 5, 2).unwrap().iter().map(|x| x.label.clone()).collect::<Vec<_>>(), s.iter().map(|x| x.label.clone()).collect::<Vec<_>>());
}

#[test]
fn ulrich_ext_is_reduction_multiple() {
    for gens in [&[2u32, 3][..], &[3, 4, 5]] {
        let r = curve(gens);
        let m = FracIdeal::maximal(&r);
        let (x, _) = reduction_in_r(&m).unwrap();
        let mm = ideal_mod(&m);
        let e = ext1(&mm, &mm).unwrap();
        let ul = ext1_ul(&e, &m, 1, ENUM_BUDGET).unwrap();
        assert!(ul.agree());
        let set: HashSet<_> = ul.ul.classes.iter().cloned().collect();
        assert_eq!(set, ideal_times_ext(&e, &r.mgens()));
        assert_eq!(set, elem_times_ext(&e, &x));
    }
}

#[test]
fn residue_field_ulrich_zero() {
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    let k = k_of(&r);
    let e = ext1(&k, &k).unwrap();
    let ul = ext1_ul(&e, &m, 0, ENUM_BUDGET).unwrap();
    assert!(ul.agree());
    for c in e.all_classes(ENUM_BUDGET).unwrap() {
        let x = e.middle(&c).x;
        let killed = x.m_times(&x.full()).cols() == 0 || x.contains_sub(&x.relations(), &x.m_times(&x.full()));
        assert_eq!(ul.ul.contains(&c), killed);
    }
    assert!(matches!(ext1_ul(&ext1(&CoeffModule::free(&r, 1), &k).unwrap(), &m, 0, ENUM_BUDGET), Err(Error::NotUlrich(_))));
}

#[test]
fn blowup_views() {
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    let b = blowup_mod(&m);
    let eb = ext1_over_blowup(&b, &b, &m, ENUM_BUDGET).unwrap();
    assert_eq!(eb.b_classes, 1);
    assert_eq!(eb.ul_classes, 1);
    assert!(eb.bijection);
    let mm = ideal_mod(&m);
    let eb = ext1_over_blowup(&mm, &mm, &m, ENUM_BUDGET).unwrap();
    assert_eq!(eb.b_classes, eb.ul_classes);
    assert!(eb.bijection);
    let view = restrict_to_blowup(&mm, &m).unwrap();
    assert_eq!(view.ring().semigroup().unwrap().gens(), &[1]);
    assert!(matches!(restrict_to_blowup(&CoeffModule::free(&r, 1), &m), Err(Error::NotUlrich(_))));
    let d = dvr();
    let t = FracIdeal::maximal(&d);
    let rr = CoeffModule::free(&d, 1);
    let v = restrict_to_blowup(&rr, &t).unwrap();
    assert_eq!(v.actions(), rr.actions());
    let r = curve(&[3, 4, 5]);
    let m = FracIdeal::maximal(&r);
    let mm = ideal_mod(&m);
    let w = ideal_mod(&FracIdeal::monomial(&r, &[3, 4]));
    if is_ulrich(&w, &m, 1).unwrap() {
        assert!(ext1_over_blowup(&mm, &w, &m, ENUM_BUDGET).unwrap().bijection);
    }
    assert!(ext1_over_blowup(&mm, &mm, &m, ENUM_BUDGET).unwrap().bijection);
}

#[test]
fn add_membership() {
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    let mm = ideal_mod(&m);
    let b = blowup_mod(&m);
    assert!(in_add(&mm, &mm).unwrap().member);
    assert!(in_add(&b, &b).unwrap().member);
    assert!(in_add(&mm, &b).unwrap().member);
    assert!(!in_add(&k_of(&r), &CoeffModule::free(&r, 1)).unwrap().member);
    assert!(!in_add(&CoeffModule::free(&r, 1), &mm).unwrap().member);
    let two = CoeffModule::direct_sum(&r, &[mm.clone(), CoeffModule::free(&r, 1)]);
    assert!(in_add(&mm, &two).unwrap().member);
}

#[test]
fn residue_field_approximation() {
    for (gens, r_type) in [(&[2u32, 3][..], 1usize), (&[3, 4, 5], 2), (&[2, 5], 1), (&[3, 5, 7], 2)] {
        let r = curve(gens);
        let (e, s) = min_mcm_approx_k(&r).unwrap();
        assert_eq!(e.mu(), r_type + 1, "{gens:?}");
        assert!(!s.is_split().unwrap());
        assert!(NumFn::Mu.is_additive(&s).unwrap());
        let mdual = ideal_mod(&FracIdeal::maximal(&r)).dualize_omega().unwrap().module;
        assert!(is_isomorphic(&e, &mdual).unwrap());
        // the middle of a nonzero class of Ext¹(k, ω)
        let w = CoeffModule::canonical_module(&r).unwrap();
        let ext = ext1(&k_of(&r), &w).unwrap();
        assert_eq!(ext.length().unwrap(), 1);
        let x = ext.middle(&ext.generators()[0]).x;
        assert!(is_isomorphic(&x, &e).unwrap());
    }
    assert!(matches!(min_mcm_approx_k(&dvr()), Err(Error::Regular)));
    let a = Arc::new(RingHandle::artin(2, &["x"], &[vec![2]]).unwrap());
    assert!(matches!(min_mcm_approx_k(&a), Err(Error::WrongFamily(_))));
}

#[test]
fn minimal_multiplicity_type_sequence() {
    let r = curve(&[3, 4, 5]);
    let (s, dual) = mintype_sequence(&r).unwrap();
    assert_eq!(dual.mu(), 3);
    assert!(is_isomorphic(&s.m, &dual).unwrap());
    assert!(NumFn::Mu.is_additive(&s).unwrap());
    assert_eq!(s.x.mu(), 4);
}

#[test]
fn artinian_canonical_syzygy() {
    for vars in [&["x", "y"][..], &["x", "y", "z"]] {
        let n = vars.len();
        let mut ideal = Vec::new();
        for i in 0..n {
            for j in i..n {
                let mut w = vec![0u32; n];
                w[i] += 1;
                w[j] += 1;
                ideal.push(w);
            }
        }
        let a = Arc::new(RingHandle::artin(2, vars, &ideal).unwrap());
        let w = CoeffModule::canonical_module(&a).unwrap();
        assert_eq!(w.mu(), n);
        // killed by m, so a k-vector space of the given length
        let syz = w.syzygy(1);
        assert_eq!(syz.loewy_length(), 1);
        assert_eq!(syz.length().unwrap(), (n * n - 1) as u64);
    }
}

#[test]
fn nu_additive_iff_ulrich_middle() {
    for gens in [&[2u32, 3][..], &[3, 4, 5]] {
        let r = curve(gens);
        let m = FracIdeal::maximal(&r);
        let pool = ul_sample(&m, 3, 7).unwrap();
        for a in &pool {
            for b in &pool {
                let e = ext1(&a.module, &b.module).unwrap();
                let Ok(ul) = ext1_ul(&e, &m, 1, 1 << 8) else { continue };
                assert!(ul.agree());
                let nu = ext1_sub(&e, &[NumFn::Nu(m.clone())], 1 << 12).unwrap();
                assert!(ul.ul.same_classes(&nu));
            }
        }
    }
}
