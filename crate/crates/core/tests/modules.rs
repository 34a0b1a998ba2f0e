use std::sync::Arc;

use subext_core::dcoeff::{preimage, span_basis, subquotient, Coeff, Matrix};
use subext_core::modules::*;
use subext_core::rings::*;

type M<T> = Arc<CoeffModule<T>>;

fn curve(gens: &[u32]) -> Arc<CurveRing> {
    Arc::new(RingHandle::numerical(2, gens).unwrap())
}

fn dvr() -> Arc<CurveRing> {
    Arc::new(RingHandle::dvr(2).unwrap())
}

fn artin_sq() -> Arc<ArtinRing> {
    Arc::new(RingHandle::artin(2, &["x", "y"], &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap())
}

fn quot_t<T: Coeff>(r: &Arc<RingHandle<T>>, exps: &[i64]) -> M<T> {
    CoeffModule::from_quotient(&FracIdeal::monomial(r, exps)).unwrap()
}

fn ideal_t<T: Coeff>(r: &Arc<RingHandle<T>>, exps: &[i64]) -> M<T> {
    CoeffModule::from_frac_ideal(&FracIdeal::monomial(r, exps))
}

fn iso<T: Coeff>(a: &M<T>, b: &M<T>) -> bool {
    is_isomorphic(a, b).unwrap()
}

/// λ(H_j(M ⊗ F)) for a resolution F of k, working in raw coordinates of M^β.
fn tor_with_k<T: Coeff>(m: &M<T>, j: usize) -> u64 {
    let ring = m.ring().clone();
    let p = ring.prime();
    let k = CoeffModule::residue_field(&ring);
    let res = k.resolution(j + 1);
    let n = m.ngens();
    let tensor = |d: &RMat<T>| {
        let mut out = Matrix::zeros(p, d.rows * n, d.cols * n);
        for a in 0..d.rows {
            for b in 0..d.cols {
                out.set_block(a * n, b * n, &m.elem_action(d.get(a, b)));
            }
        }
        out
    };
    let rel = |b: usize| {
        let r = m.relations();
        Matrix::block_diag(p, &vec![&r; b])
    };
    let bj = res.betti[j];
    let src_rel = rel(bj);
    let ker = if j == 0 {
        Matrix::identity(p, bj * n)
    } else {
        preimage(&tensor(&res.diffs[j - 1]), &rel(res.betti[j - 1]))
    };
    let ker = span_basis(&ker.hstack(&src_rel));
    let im = tensor(&res.diffs[j]).hstack(&src_rel);
    let im = if im.cols() == 0 { im } else { span_basis(&im) };
    let sq = subquotient(&ker, &im);
    assert!(T::IS_FIELD || sq.free == 0);
    sq.torsion.iter().map(|&a| a as u64).sum::<u64>() + if T::IS_FIELD { sq.free as u64 } else { 0 }
}

fn check_resolution<T: Coeff>(m: &M<T>, len: usize) {
    let ring = m.ring().clone();
    let res = m.resolution(len);
    assert_eq!(res.betti[0], m.mu());
    for d in &res.diffs {
        assert!(d.is_minimal(&ring), "differential entry outside m");
    }
    for w in res.diffs.windows(2) {
        assert!(w[0].expand(&ring).mul(&w[1].expand(&ring)).is_zero());
    }
    for j in 0..len {
        assert_eq!(res.betti[j] as u64, tor_with_k(m, j), "β_{j} vs Tor_{j}(M,k)");
    }
}

#[test]
fn constructors() {
    let r = curve(&[2, 3]);
    let k = CoeffModule::residue_field(&r);
    assert_eq!((k.length().unwrap(), k.mu()), (1, 1));
    let b = ideal_t(&r, &[0, 1]);
    assert_eq!((b.free_rank(), b.torsion().len(), b.mu()), (2, 0, 2));
    let kk = CoeffModule::direct_sum(&r, &[k.clone(), k.clone()]);
    assert_eq!((kk.length().unwrap(), kk.mu()), (2, 2));
    let q = quot_t(&r, &[4, 5]);
    assert_eq!(q.length().unwrap(), 3);
    assert_eq!(q.length().unwrap(), FracIdeal::monomial(&r, &[4, 5]).quotient_length().unwrap());
    assert!(CoeffModule::free(&r, 1).length().is_err());

    let a = artin_sq();
    let ka = CoeffModule::residue_field(&a);
    assert_eq!((ka.length().unwrap(), ka.mu()), (1, 1));
    let ra = CoeffModule::free(&a, 1);
    assert_eq!((ra.length().unwrap(), ra.mu()), (3, 1));
    assert_eq!(ka.nu(&FracIdeal::maximal(&a)).unwrap(), 1);
    assert_eq!(ra.nu(&FracIdeal::maximal(&a)).unwrap(), 1);
}

#[test]
fn invariants_additive_on_sums() {
    let r = curve(&[3, 4, 5]);
    let mods = vec![
        CoeffModule::residue_field(&r),
        quot_t(&r, &[3, 4]),
        quot_t(&r, &[6, 7, 8]),
        ideal_t(&r, &[0, 1]),
        CoeffModule::from_ideal_quotient(&FracIdeal::monomial(&r, &[0, 1]), &FracIdeal::monomial(&r, &[3, 4, 5])).unwrap(),
    ];
    for a in &mods {
        for b in &mods {
            let s = CoeffModule::direct_sum(&r, &[a.clone(), b.clone()]);
            assert_eq!(s.mu(), a.mu() + b.mu());
            if let (Ok(x), Ok(y)) = (a.length(), b.length()) {
                assert_eq!(s.length().unwrap(), x + y);
            }
        }
    }
}

#[test]
fn hom_examples() {
    for gens in [vec![1u32], vec![2, 3], vec![3, 4, 5]] {
        let r = curve(&gens);
        let rr = CoeffModule::free(&r, 1);
        let e = gens[0] as i64;
        for n in [CoeffModule::residue_field(&r), ideal_t(&r, &[0, 1]), quot_t(&r, &[e, e + 1])] {
            let h = hom(&rr, &n).unwrap();
            assert!(iso(&h.module, &n));
        }
    }
    // hom(m, R) ≅ (R : m)
    let r = curve(&[2, 3]);
    let m = FracIdeal::maximal(&r);
    let h = hom(&CoeffModule::from_frac_ideal(&m), &CoeffModule::free(&r, 1)).unwrap();
    let colon = FracIdeal::unit(&r).colon(&m).unwrap();
    assert!(iso(&h.module, &CoeffModule::from_frac_ideal(&colon)));
    assert_eq!(h.module.mu(), 2);
    // hom(k, R/t²) ≅ k over the DVR
    let d = dvr();
    let h = hom(&CoeffModule::residue_field(&d), &quot_t(&d, &[2])).unwrap();
    assert!(iso(&h.module, &CoeffModule::residue_field(&d)));
}

#[test]
fn hom_of_ideals_matches_colon() {
    let r = curve(&[3, 4, 5]);
    let ideals: Vec<FracIdeal<_>> = [vec![0i64], vec![3, 4, 5], vec![0, 1], vec![0, 1, 2], vec![-1, 0], vec![4, 5]]
        .iter()
        .map(|e| FracIdeal::monomial(&r, e))
        .collect();
    for i in &ideals {
        for j in &ideals {
            let h = hom(&CoeffModule::from_frac_ideal(i), &CoeffModule::from_frac_ideal(j)).unwrap();
            let c = CoeffModule::from_frac_ideal(&j.colon(i).unwrap());
            assert_eq!(h.module.free_rank(), c.free_rank());
            assert_eq!(h.module.mu(), c.mu());
            assert!(iso(&h.module, &c));
        }
    }
}

#[test]
fn hom_maps_are_linear_and_dvr_lengths() {
    let d = dvr();
    for a in 1..4i64 {
        for b in 1..4i64 {
            let h = hom(&quot_t(&d, &[a]), &quot_t(&d, &[b])).unwrap();
            assert_eq!(h.module.length().unwrap(), a.min(b) as u64);
            for f in h.basis_maps() {
                assert!(f.is_well_defined() && f.is_r_linear());
                assert_eq!(h.to_map(&h.from_map(&f)).mat, f.mat);
            }
        }
    }
    let a = artin_sq();
    let k = CoeffModule::residue_field(&a);
    let ra = CoeffModule::free(&a, 1);
    assert_eq!(hom(&k, &ra).unwrap().module.length().unwrap(), 2);
    assert_eq!(hom(&ra, &k).unwrap().module.length().unwrap(), 1);
}

#[test]
fn resolution_examples() {
    let r = curve(&[2, 3]);
    let k = CoeffModule::residue_field(&r);
    let res = k.resolution(2);
    assert_eq!(&res.betti[..2], &[1, 2]);
    let entries: Vec<String> = (0..2).map(|j| r.fmt_elem(res.diffs[0].get(0, j))).collect();
    assert!(entries.contains(&"t^2".to_string()) && entries.contains(&"t^3".to_string()), "{entries:?}");
    assert!(iso(&k.syzygy(1), &CoeffModule::from_frac_ideal(&FracIdeal::maximal(&r))));

    let d = dvr();
    let q = quot_t(&d, &[2]);
    assert_eq!(q.resolution(2).betti, vec![1, 1, 0]);

    let a = artin_sq();
    let ka = CoeffModule::residue_field(&a);
    assert_eq!(ka.resolution(3).betti, vec![1, 2, 4, 8]);
    assert!(iso(&ka.syzygy(1), &CoeffModule::direct_sum(&a, &[ka.clone(), ka.clone()])));
}

#[test]
fn resolutions_match_tor() {
    let r = curve(&[3, 4, 5]);
    for m in [CoeffModule::residue_field(&r), quot_t(&r, &[4, 5]), ideal_t(&r, &[0, 1])] {
        check_resolution(&m, 3);
    }
    let r = curve(&[2, 5]);
    check_resolution(&quot_t(&r, &[2]), 3);
    let a = artin_sq();
    check_resolution(&CoeffModule::residue_field(&a), 3);
    let a2 = Arc::new(RingHandle::artin(3, &["x", "y"], &[vec![2, 0], vec![0, 2]]).unwrap());
    check_resolution(&CoeffModule::residue_field(&a2), 3);
    let xm = CoeffModule::from_quotient(&FracIdeal::from_elems(&a2, &[a2.monomial(&[1, 0]).unwrap()])).unwrap();
    check_resolution(&xm, 3);
}

#[test]
fn transpose_examples() {
    let r = curve(&[2, 3]);
    assert!(CoeffModule::free(&r, 1).transpose().is_zero());
    let tk = CoeffModule::residue_field(&r).transpose();
    assert_eq!(tk.mu(), 2);
    assert!(iso(&tk.syzygy(1), &CoeffModule::free(&r, 1)));
    let d = dvr();
    for a in 1..4 {
        let q = quot_t(&d, &[a]);
        assert!(iso(&q.transpose(), &q));
    }
}

#[test]
fn socle_loewy_torsion() {
    let a = artin_sq();
    let ra = CoeffModule::free(&a, 1);
    let soc = ra.socle();
    assert_eq!(soc.length().unwrap(), 2);
    assert_eq!(ra.loewy_length(), 2);
    let d = dvr();
    assert_eq!(quot_t(&d, &[3]).loewy_length(), 3);
    let s = CoeffModule::direct_sum(&d, &[CoeffModule::free(&d, 1), quot_t(&d, &[2])]);
    assert!(iso(&s.torsion_part(), &quot_t(&d, &[2])));
    assert_eq!(s.loewy_length(), 2);
    assert_eq!(CoeffModule::free(&d, 1).loewy_length(), 0);
}

#[test]
fn module_colons() {
    let a = artin_sq();
    let ra = CoeffModule::free(&a, 1);
    let zero = Matrix::zeros(2, ra.ngens(), 0);
    assert_eq!(ra.colon_in_module(&zero, ColonMode::N), ra.socle_lattice());
    // N = xM: (mN :_M m) = m
    let x = Matrix::from_cols(2, 3, &[a.monomial(&[1, 0]).unwrap()]);
    let c = ra.colon_in_module(&x, ColonMode::MTimesN);
    assert_eq!(c.cols(), 2);
    assert_eq!(ra.sub_length(&ra.full(), &c).unwrap(), 1);

    // over the DVR: (m·t²R :_R m) = t²R
    let d = dvr();
    let rd = CoeffModule::free(&d, 1);
    let t2 = Matrix::from_cols(2, 1, &[d.t_pow(2).unwrap()]);
    let c = rd.colon_in_module(&t2, ColonMode::MTimesN);
    assert_eq!(c, rd.r_span(&t2));
}

#[test]
fn annihilators() {
    let r = curve(&[2, 3]);
    let k = CoeffModule::residue_field(&r);
    assert!(k.annihilator().equals(&FracIdeal::maximal(&r)));
    let i = FracIdeal::monomial(&r, &[4, 5]);
    assert!(CoeffModule::from_quotient(&i).unwrap().annihilator().equals(&i));
    assert!(CoeffModule::free(&r, 1).annihilator().is_zero());
}

#[test]
fn depth_and_mcm() {
    let r = curve(&[2, 3]);
    let m = CoeffModule::from_frac_ideal(&FracIdeal::maximal(&r));
    assert!(m.is_mcm() && m.depth01() == 1);
    let k = CoeffModule::residue_field(&r);
    assert!(!k.is_mcm() && k.depth01() == 0);
    let d = dvr();
    let s = CoeffModule::direct_sum(&d, &[CoeffModule::free(&d, 1), CoeffModule::residue_field(&d)]);
    assert_eq!(s.depth01(), 0);
}

#[test]
fn isomorphism_relation() {
    let d = dvr();
    assert!(!iso(&quot_t(&d, &[2]), &quot_t(&d, &[3])));
    let r = curve(&[3, 4, 5]);
    let sample = vec![
        CoeffModule::residue_field(&r),
        ideal_t(&r, &[0, 1]),
        ideal_t(&r, &[1, 2]),
        ideal_t(&r, &[3, 4]),
        ideal_t(&r, &[0, 2]),
        CoeffModule::from_frac_ideal(&FracIdeal::maximal(&r)),
        quot_t(&r, &[4, 5, 6]),
    ];
    let rel: Vec<Vec<bool>> = sample.iter().map(|a| sample.iter().map(|b| iso(a, b)).collect()).collect();
    for i in 0..sample.len() {
        assert!(rel[i][i]);
        for j in 0..sample.len() {
            assert_eq!(rel[i][j], rel[j][i]);
            for k in 0..sample.len() {
                if rel[i][j] && rel[j][k] {
                    assert!(rel[i][k]);
                }
            }
        }
    }
    // t·⟨0,1⟩ = ⟨1,2⟩ and t³·⟨0,1⟩ = ⟨3,4⟩, while ⟨0,2⟩ is a different class
    assert!(rel[1][2] && rel[1][3] && !rel[1][4]);
    assert!(!rel[1][5]);
}

#[test]
fn omega_duals() {
    let r = curve(&[3, 4, 5]);
    let w = CoeffModule::canonical_module(&r).unwrap();
    let rr = CoeffModule::free(&r, 1);
    assert!(iso(&rr.dualize_omega().unwrap().module, &w));
    assert!(iso(&w.dualize_omega().unwrap().module, &rr));
    let m = CoeffModule::from_frac_ideal(&FracIdeal::maximal(&r));
    assert_eq!(m.dualize_omega().unwrap().module.mu(), 3);

    let a = artin_sq();
    let wa = CoeffModule::canonical_module(&a).unwrap();
    assert_eq!(wa.mu(), 2);
    assert_eq!(wa.socle().length().unwrap(), 1);
    let ra = CoeffModule::free(&a, 1);
    assert!(iso(&wa.dualize_omega().unwrap().module, &ra));
}
