use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subext_core::rings::*;
use subext_core::Error;

fn curve(gens: &[u32]) -> Arc<CurveRing> {
    Arc::new(RingHandle::numerical(2, gens).unwrap())
}

fn dvr(p: u16) -> Arc<CurveRing> {
    Arc::new(RingHandle::dvr(p).unwrap())
}

/// Exponent sets of monomial ideals, computed by plain set arithmetic up to a bound.
const BOUND: i64 = 60;

fn members(gens: &[u32]) -> BTreeSet<i64> {
    let mut s = BTreeSet::from([0i64]);
    for v in 1..=BOUND {
        if gens.iter().any(|&a| v >= a as i64 && s.contains(&(v - a as i64))) {
            s.insert(v);
        }
    }
    s
}

fn ideal_set(sg: &BTreeSet<i64>, exps: &[i64]) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    for &a in exps {
        for &s in sg {
            if a + s <= BOUND {
                out.insert(a + s);
            }
        }
    }
    out
}

fn vals_up_to(v: &Valuations, bound: i64) -> BTreeSet<i64> {
    (v.min()..=bound).filter(|&x| v.contains(x)).collect()
}

#[test]
fn build_examples() {
    let r = RingHandle::artin(2, &["x", "y"], &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap();
    assert_eq!(r.rank(), 3);
    let r = Arc::new(r);
    let inv = artin_invariants(&r).unwrap();
    assert_eq!(inv.embdim, 2);
    assert_eq!(inv.cm_type, 2);
    assert_eq!(inv.multiplicity, 3);
    assert_eq!(inv.depth, 0);

    let e2 = curve(&[2, 3]);
    assert_eq!(e2.rank(), 2);
    assert_eq!(e2.apery().unwrap(), &[0, 3]);

    let d = dvr(5);
    assert_eq!(d.rank(), 1);
}

#[test]
fn build_errors() {
    assert!(matches!(
        RingHandle::artin(2, &["x", "y"], &[vec![2, 0], vec![1, 1]]),
        Err(Error::NotMPrimary(_))
    ));
    assert!(matches!(RingHandle::numerical(2, &[2, 4]), Err(Error::BadSemigroup(_))));
    assert!(matches!(RingHandle::dvr(263), Err(Error::FieldTooLarge(263))));
}

#[test]
fn semigroup_actions_are_additive() {
    for gens in [&[2u32, 3][..], &[3, 4, 5], &[2, 5], &[4, 6, 9]] {
        let r = curve(gens);
        let sg = r.semigroup().unwrap();
        for a in 0..20u32 {
            for b in 0..20u32 {
                if !sg.contains(a as i64) || !sg.contains(b as i64) {
                    continue;
                }
                let (x, y) = (r.t_pow(a).unwrap(), r.t_pow(b).unwrap());
                assert_eq!(r.mul(&x, &y), r.t_pow(a + b).unwrap());
            }
        }
    }
}

#[test]
fn colon_examples() {
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    let x = FracIdeal::monomial(&r, &[2]);
    assert!(x.colon_in_r(&m).unwrap().equals(&m));
    assert_eq!(m.index_of(&x).unwrap(), 1);
    let rm = FracIdeal::unit(&r).colon(&m).unwrap();
    assert!(rm.equals(&FracIdeal::monomial(&r, &[0, 1])));

    let d = dvr(2);
    let t = FracIdeal::monomial(&d, &[1]);
    assert!(t.colon(&t).unwrap().equals(&FracIdeal::unit(&d)));

    let a = Arc::new(RingHandle::artin(2, &["x", "y"], &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap());
    let ma = FracIdeal::maximal(&a);
    assert!(matches!(ma.colon(&ma), Err(Error::DimensionMismatch(_))));
    let zero = FracIdeal::from_elems(&a, &[]);
    assert!(zero.colon_in_r(&ma).unwrap().equals(&ma));
}

#[test]
fn colon_matches_exponent_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for gens in [&[2u32, 3][..], &[3, 4, 5], &[2, 5], &[3, 5, 7]] {
        let r = curve(gens);
        let sg = members(gens);
        for _ in 0..12 {
            let a: Vec<i64> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(-2..8)).collect();
            let b: Vec<i64> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(-2..8)).collect();
            let (i, j) = (FracIdeal::monomial(&r, &a), FracIdeal::monomial(&r, &b));
            let c = i.colon(&j).unwrap();
            let iset = ideal_set(&sg, &a);
            let jset = ideal_set(&sg, &b);
            let want: BTreeSet<i64> = (-30..25)
                .filter(|&y| jset.iter().filter(|&&v| v + y <= BOUND && v < 30).all(|&v| iset.contains(&(v + y))))
                .collect();
            let got = vals_up_to(&c.valuations().unwrap(), 24);
            let want: BTreeSet<i64> = want.into_iter().filter(|&y| y <= 24).collect();
            assert_eq!(got, want, "colon of {a:?} by {b:?} over {gens:?}");
            assert!(c.product(&j).intersect(&i).equals(&c.product(&j)));
        }
    }
}

#[test]
fn quotient_lengths() {
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    assert_eq!(m.quotient_length().unwrap(), 1);
    assert_eq!(m.power(2).quotient_length().unwrap(), 3);
    let d = dvr(3);
    for a in 0..6 {
        assert_eq!(FracIdeal::monomial(&d, &[a]).quotient_length().unwrap(), a as u64);
    }
    let a = Arc::new(RingHandle::artin(3, &["x", "y"], &[vec![3, 0], vec![0, 2]]).unwrap());
    assert_eq!(FracIdeal::maximal(&a).quotient_length().unwrap(), 1);
    let x = a.monomial(&[1, 0]).unwrap();
    assert!(!a.is_nzd(&x));
    assert!(matches!(
        FracIdeal::from_elems(&r, &[]).quotient_length(),
        Err(Error::InfiniteLength(_))
    ));
}

#[test]
fn quotient_length_monotone_on_random_monomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for gens in [&[2u32, 3][..], &[3, 4, 5], &[2, 5]] {
        let r = curve(gens);
        let sg = members(gens);
        let elems: Vec<i64> = sg.iter().copied().filter(|&v| v > 0 && v < 12).collect();
        for _ in 0..10 {
            let pick = |rng: &mut ChaCha8Rng| -> Vec<i64> {
                (0..rng.gen_range(1..3)).map(|_| elems[rng.gen_range(0..elems.len())]).collect()
            };
            let (a, b) = (pick(&mut rng), pick(&mut rng));
            let (i, j) = (FracIdeal::monomial(&r, &a), FracIdeal::monomial(&r, &b));
            let li = i.quotient_length().unwrap();
            let want = sg.iter().filter(|&&v| v < 40 && !ideal_set(&sg, &a).contains(&v)).count();
            assert_eq!(li, want as u64);
            assert!(i.product(&j).quotient_length().unwrap() >= li);
        }
    }
}

#[test]
fn nzd_examples() {
    let r = curve(&[2, 3]);
    assert!(r.is_nzd(&r.t_pow(2).unwrap()));
    let unit = r.add(&r.one(), &r.t_pow(3).unwrap());
    assert!(r.is_nzd(&unit));
    let g = FracIdeal::maximal(&r).nzd_generators().unwrap();
    assert_eq!(g.len(), 2);
    let a = Arc::new(RingHandle::artin(2, &["x", "y"], &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap());
    assert!(matches!(FracIdeal::maximal(&a).nzd_generators(), Err(Error::NoNzd)));
}

#[test]
fn reductions() {
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    let (x, n) = m.principal_reduction(8).unwrap();
    assert_eq!(r.amb_val(&x.v), Some(2));
    assert_eq!(n, 1);
    let d = dvr(2);
    let (x, n) = FracIdeal::monomial(&d, &[3]).principal_reduction(8).unwrap();
    assert_eq!((d.amb_val(&x.v), n), (Some(3), 0));
    let r = curve(&[3, 4, 5]);
    let m = FracIdeal::maximal(&r);
    let (x, n) = m.principal_reduction(8).unwrap();
    assert_eq!((r.amb_val(&x.v), n), (Some(3), 1));
    // x is not in mI
    let xi = FracIdeal::principal(&r, &x);
    assert!(!m.product(&m).contains(&xi));
}

#[test]
fn traces_and_blowups() {
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    assert!(m.trace_ideal().unwrap().equals(&m));
    let d = dvr(2);
    let t = FracIdeal::monomial(&d, &[1]);
    assert!(t.trace_ideal().unwrap().equals(&FracIdeal::unit(&d)));

    let (b, bm) = m.blow_up(16).unwrap();
    assert_eq!(b.semigroup().unwrap().gens(), &[1]);
    assert!(bm.equals(&FracIdeal::monomial(&r, &[0, 1])));
    // B is idempotent: blowing up the unit ideal of B gives B again
    let (bb, _) = FracIdeal::unit(&b).blow_up(16).unwrap();
    assert_eq!(bb.semigroup(), b.semigroup());

    let r = curve(&[3, 4, 5]);
    let (b, _) = FracIdeal::maximal(&r).blow_up(16).unwrap();
    assert_eq!(b.semigroup().unwrap().gens(), &[1]);
    let r = curve(&[2, 5]);
    let (b, _) = FracIdeal::maximal(&r).blow_up(16).unwrap();
    assert_eq!(b.semigroup().unwrap().gens(), &[2, 3]);
    let (b, _) = FracIdeal::monomial(&d, &[1]).blow_up(16).unwrap();
    assert_eq!(b.semigroup().unwrap().gens(), &[1]);
}

#[test]
fn canonical_ideals() {
    let r = curve(&[2, 3]);
    let w = canonical_ideal(&r).unwrap();
    assert!(w.equals(&FracIdeal::unit(&r)));
    let r = curve(&[3, 4, 5]);
    let w = canonical_ideal(&r).unwrap();
    assert!(w.equals(&FracIdeal::monomial(&r, &[0, 1])));
    assert_eq!(w.mu(), 2);
    assert!(w.colon(&w).unwrap().equals(&FracIdeal::unit(&r)));
    let inv = curve_invariants(&r).unwrap();
    assert_eq!(inv.cm_type, w.mu());
    let d = dvr(3);
    assert!(canonical_ideal(&d).unwrap().equals(&FracIdeal::unit(&d)));
    for gens in [&[2u32, 5][..], &[3, 5, 7], &[4, 5, 6, 7]] {
        let r = curve(gens);
        let w = canonical_ideal(&r).unwrap();
        assert!(w.colon(&w).unwrap().equals(&FracIdeal::unit(&r)));
        assert_eq!(w.mu(), curve_invariants(&r).unwrap().cm_type, "{gens:?}");
    }
}

#[test]
fn invariant_records() {
    let inv = curve_invariants(&curve(&[2, 3])).unwrap();
    assert_eq!(
        (inv.dim, inv.multiplicity, inv.embdim, inv.cm_type),
        (1, 2, 2, 1)
    );
    assert!(inv.is_gorenstein && inv.has_minimal_multiplicity && !inv.is_regular);
    let inv = curve_invariants(&dvr(2)).unwrap();
    assert!(inv.is_regular);
    assert_eq!(inv.multiplicity, 1);
    let inv = curve_invariants(&curve(&[3, 4, 5])).unwrap();
    assert_eq!((inv.multiplicity, inv.cm_type), (3, 2));
    assert!(inv.has_minimal_multiplicity && !inv.is_gorenstein);
    assert_eq!(inv.is_almost_gorenstein, Some(true));
    // compare with the almost-symmetric criterion on pseudo-Frobenius numbers
    let r = curve(&[4, 5, 11]);
    let inv = curve_invariants(&r).unwrap();
    let sg = r.semigroup().unwrap();
    let f = sg.frobenius();
    let pf: Vec<i64> = sg.gaps().iter().map(|&g| g as i64).filter(|&g| sg.gens().iter().all(|&a| sg.contains(g + a as i64))).collect();
    let nak = pf.iter().all(|&x| x == f || pf.contains(&(f - x)));
    assert_eq!(inv.is_almost_gorenstein, Some(nak));
}

#[test]
fn monomial_valuations_match_sets() {
    for gens in [&[2u32, 3][..], &[3, 4, 5], &[2, 5]] {
        let r = curve(gens);
        let v = FracIdeal::unit(&r).valuations().unwrap();
        let sg = members(gens);
        let got = vals_up_to(&v, 30);
        let want: BTreeSet<i64> = sg.into_iter().filter(|&x| x <= 30).collect();
        assert_eq!(got, want);
    }
    let r = curve(&[2, 3]);
    let i = FracIdeal::monomial(&r, &[-3, 1]);
    assert_eq!(i.valuations().unwrap().min(), -3);
    assert!(i.is_monomial().unwrap());
    let x = r.add(&r.t_pow(2).unwrap(), &r.t_pow(3).unwrap());
    let nm = FracIdeal::from_elems(&r, &[x]);
    assert!(!nm.is_monomial().unwrap());
}
