use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subext_core::dcoeff::*;

fn l(p: u16, c: &[u16]) -> Local {
    Local::poly(p, c)
}

fn t(p: u16, k: u32) -> Local {
    Local::t_pow(p, k)
}

fn is_diag_form<T: Coeff>(d: &Matrix<T>, exps: &[u32]) -> bool {
    let p = d.prime();
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            let want = if i == j && i < exps.len() {
                T::t_pow(p, exps[i])
            } else {
                T::zero(p)
            };
            if *d.get(i, j) != want {
                return false;
            }
        }
    }
    true
}

fn det<T: Coeff>(m: &Matrix<T>) -> T {
    let n = m.rows();
    let p = m.prime();
    if n == 0 {
        return T::one(p);
    }
    let mut acc = T::zero(p);
    for j in 0..n {
        let minor_rows: Vec<usize> = (1..n).collect();
        let minor_cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let minor = m.select_rows(&minor_rows).select_cols(&minor_cols);
        let term = m.get(0, j).mul(&det(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Rank over F_p of digit vectors, by plain elimination.
fn fp_rank(rows: &mut Vec<Vec<u16>>, p: u16) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len());
    for c in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = (1..p).find(|&x| (x as u32 * rows[rank][c] as u32) % p as u32 == 1).unwrap();
        for x in rows[rank].iter_mut() {
            *x = (*x as u32 * inv as u32 % p as u32) as u16;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c] as u32;
                for k in 0..width {
                    let sub = f * rows[rank][k] as u32 % p as u32;
                    rows[r][k] = ((rows[r][k] as u32 + p as u32 - sub) % p as u32) as u16;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn smith_identity() {
    let m: Matrix<Local> = Matrix::identity(2, 2);
    let s = local_smith(&m);
    assert_eq!(s.exps, vec![0, 0]);
}

#[test]
fn smith_unit_entry() {
    let p = 2;
    let a = Matrix::from_rows(p, vec![vec![t(p, 1), l(p, &[0])], vec![l(p, &[0]), l(p, &[1, 1])]]);
    let s = local_smith(&a);
    assert_eq!(s.exps, vec![0, 1]);
    assert!(is_diag_form(&s.u.mul(&a).mul(&s.v), &s.exps));
    assert!(s.u.mul(&s.u_inv) == Matrix::identity(p, 2));
    assert!(s.v.mul(&s.v_inv) == Matrix::identity(p, 2));
}

#[test]
fn smith_random_det_valuation() {
    let p = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let rows: Vec<Vec<Local>> = (0..3)
            .map(|_| {
                (0..3)
                    .map(|_| {
                        let c: Vec<u16> = (0..3).map(|_| rng.gen_range(0..p)).collect();
                        l(p, &c)
                    })
                    .collect()
            })
            .collect();
        let a = Matrix::from_rows(p, rows);
        let s = local_smith(&a);
        assert!(is_diag_form(&s.u.mul(&a).mul(&s.v), &s.exps));
        let d = det(&a);
        match d.val() {
            None => assert!(s.rank() < 3),
            Some(v) => {
                assert_eq!(s.rank(), 3);
                assert_eq!(s.exps.iter().sum::<u32>(), v);
            }
        }
        assert!(s.exps.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn kernel_examples() {
    let a: Matrix<Fp> = Matrix::from_rows(2, vec![vec![Fp::new(2, 1)]]);
    assert_eq!(kernel_basis(&a).cols(), 0);

    let p = 2;
    let a = Matrix::from_rows(p, vec![vec![t(p, 2), t(p, 3)]]);
    let k = kernel_basis(&a);
    assert_eq!(k.cols(), 1);
    assert!(a.mul(&k).is_zero());
    assert!(local_smith(&k).exps.iter().all(|&e| e == 0));
    let ratio = k.get(0, 0).div_exact(k.get(1, 0)).unwrap();
    assert_eq!(ratio, t(p, 1).neg());

    let z: Matrix<Local> = Matrix::zeros(p, 2, 2);
    assert_eq!(kernel_basis(&z), Matrix::identity(p, 2));
}

#[test]
fn solve_examples() {
    let p = 2;
    let id: Matrix<Local> = Matrix::identity(p, 2);
    let b = vec![l(p, &[1, 1]), t(p, 3)];
    assert_eq!(solve(&id, &b), Some(b.clone()));
    let a = Matrix::from_rows(p, vec![vec![t(p, 1)]]);
    assert_eq!(solve(&a, &[l(p, &[1])]), None);
    assert_eq!(solve(&a, &[t(p, 3)]), Some(vec![t(p, 2)]));
}

#[test]
fn cokernel_examples() {
    let p = 2;
    let a = Matrix::from_rows(p, vec![vec![t(p, 2)]]);
    assert_eq!(
        cokernel_invariants(&a),
        CokerInvariants {
            free_rank: 0,
            torsion: vec![2]
        }
    );
    let e: Matrix<Local> = Matrix::zeros(p, 2, 0);
    assert_eq!(cokernel_invariants(&e).free_rank, 2);
    let a = Matrix::from_rows(p, vec![vec![t(p, 1), t(p, 2)], vec![l(p, &[0]), t(p, 3)]]);
    let c = cokernel_invariants(&a);
    let s = local_smith(&a);
    assert_eq!(c.torsion, s.exps);
    assert_eq!(c.torsion.iter().sum::<u32>(), 4);
}

#[test]
fn fraction_arithmetic() {
    let p = 5;
    let u = l(p, &[1, 1]);
    let inv = u.unit_inv();
    assert!(inv.mul(&u).is_one());
    let x = t(p, 3).div_exact(&t(p, 1).mul(&u)).unwrap();
    assert_eq!(x.mul(&t(p, 1)).mul(&u), t(p, 3));
    assert_eq!(x.val(), Some(2));
    // 1/(1+t) = 1 - t + t^2 - ...
    assert_eq!(inv.digits(4), vec![1, 4, 1, 4]);
    assert!(t(p, 1).div_exact(&t(p, 2)).is_none());
}

fn fp_coker_by_enumeration(a: &Matrix<Fp>) -> usize {
    let p = a.prime();
    let n = a.cols();
    let mut image = std::collections::HashSet::new();
    let total = (p as usize).pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let x: Vec<Fp> = (0..n)
            .map(|_| {
                let d = c % p as usize;
                c /= p as usize;
                Fp::new(p, d as i64)
            })
            .collect();
        let y: Vec<u16> = a.mul_vec(&x).iter().map(|v| v.value()).collect();
        image.insert(y);
    }
    let mut dim = 0;
    let mut size = 1usize;
    while size < image.len() {
        size *= p as usize;
        dim += 1;
    }
    a.rows() - dim
}

proptest! {
    #[test]
    fn field_cokernel_matches_enumeration(
        r in 1usize..5, c in 1usize..5,
        seed in any::<u64>(), pi in 0usize..2
    ) {
        let p = [2u16, 3][pi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<Fp>> = (0..r)
            .map(|_| (0..c).map(|_| Fp::new(p, rng.gen_range(0..p) as i64)).collect())
            .collect();
        let a = Matrix::from_rows(p, rows);
        let inv = cokernel_invariants(&a);
        prop_assert!(inv.torsion.is_empty());
        prop_assert_eq!(inv.free_rank, fp_coker_by_enumeration(&a));
    }

    #[test]
    fn local_cokernel_length_matches_truncation(seed in any::<u64>(), n in 1usize..4) {
        let p = 2u16;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a: Matrix<Local> = Matrix::zeros(p, n, n);
        for i in 0..n {
            for j in 0..n {
                let c: Vec<u16> = (0..3).map(|_| rng.gen_range(0..p)).collect();
                a.set(i, j, l(p, &c));
            }
            let d = a.get(i, i).add(&t(p, rng.gen_range(0..3)));
            a.set(i, i, d);
        }
        let inv = cokernel_invariants(&a);
        prop_assume!(inv.free_rank == 0);
        let big = inv.torsion.iter().copied().max().unwrap_or(0) as usize + 1;
        // span over F_p of t^k·A_j modulo t^big, inside F_p^{n·big}
        let mut rows = Vec::new();
        for j in 0..n {
            for k in 0..big {
                let mut v = vec![0u16; n * big];
                for i in 0..n {
                    let e = a.get(i, j).mul(&t(p, k as u32));
                    let d = e.digits(big as u32);
                    v[i * big..(i + 1) * big].copy_from_slice(&d);
                }
                rows.push(v);
            }
        }
        let rank = fp_rank(&mut rows, p);
        let len: u32 = inv.torsion.iter().sum();
        prop_assert_eq!((n * big - rank) as u32, len);
    }

    #[test]
    fn kernel_is_saturated(seed in any::<u64>()) {
        let p = 3u16;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a: Matrix<Local> = Matrix::zeros(p, 2, 4);
        for i in 0..2 {
            for j in 0..4 {
                let c: Vec<u16> = (0..3).map(|_| rng.gen_range(0..p)).collect();
                a.set(i, j, l(p, &c));
            }
        }
        let k = kernel_basis(&a);
        prop_assert!(a.mul(&k).is_zero());
        prop_assert!(local_smith(&k).exps.iter().all(|&e| e == 0));
        let s = local_smith(&a);
        prop_assert_eq!(k.cols(), 4 - s.rank());
    }
}

#[test]
fn subquotient_of_torsion() {
    let p = 2;
    // L = D^2, K = span{(t^2, 0), (t, t^3)}
    let lmat: Matrix<Local> = Matrix::identity(p, 2);
    let k = Matrix::from_rows(p, vec![vec![t(p, 2), t(p, 1)], vec![l(p, &[0]), t(p, 3)]]);
    let sq = subquotient(&lmat, &k);
    assert_eq!(sq.free, 0);
    assert_eq!(sq.torsion.iter().sum::<u32>(), 5);
    for j in 0..sq.gens() {
        let c = sq.coords(&sq.emb.col(j)).unwrap();
        for (i, x) in c.iter().enumerate() {
            assert_eq!(x.is_one(), i == j);
        }
    }
    let zero = sq.coords(&k.col(1)).unwrap();
    assert!(zero.iter().all(|x| x.is_zero()));
}
