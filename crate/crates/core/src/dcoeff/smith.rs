use super::matrix::Matrix;
use super::scalar::Coeff;

/// Which transforms to accumulate during reduction.
#[derive(Clone, Copy, Debug)]
pub struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Track {
    pub const ALL: Track = Track {
        u: true,
        u_inv: true,
        v: true,
        v_inv: true,
    };
    pub const NONE: Track = Track {
        u: false,
        u_inv: false,
        v: false,
        v_inv: false,
    };
}

/// U·A·V = diag(t^{exps[0]}, …, t^{exps[r-1]}, 0, …).
/// Untracked transforms are left as empty matrices.
#[derive(Clone, Debug)]
pub struct Smith<T> {
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub v: Matrix<T>,
    pub v_inv: Matrix<T>,
    pub exps: Vec<u32>,
}

impl<T: Coeff> Smith<T> {
    pub fn rank(&self) -> usize {
        self.exps.len()
    }
}

pub fn local_smith<T: Coeff>(a: &Matrix<T>) -> Smith<T> {
    smith_with(a, Track::ALL)
}

/// Local Smith normal form. Pivots have minimal valuation, ties broken by
/// smallest row then smallest column.
pub fn smith_with<T: Coeff>(a: &Matrix<T>, track: Track) -> Smith<T> {
    let p = a.prime();
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mk = |on: bool, k: usize| {
        if on {
            Matrix::identity(p, k)
        } else {
            Matrix::zeros(p, 0, 0)
        }
    };
    let mut u = mk(track.u, m);
    let mut u_inv = mk(track.u_inv, m);
    let mut v = mk(track.v, n);
    let mut v_inv = mk(track.v_inv, n);
    let mut exps = Vec::new();

    for k in 0..m.min(n) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                if let Some(val) = w.get(i, j).val() {
                    if best.map_or(true, |b| val < b.0) {
                        best = Some((val, i, j));
                        if val == 0 {
                            break;
                        }
                    }
                }
            }
            if matches!(best, Some((0, _, _))) {
                break;
            }
        }
        let Some((val, pi, pj)) = best else { break };
        if pi != k {
            w.swap_rows(k, pi);
            if track.u {
                u.swap_rows(k, pi);
            }
            if track.u_inv {
                u_inv.swap_cols(k, pi);
            }
        }
        if pj != k {
            w.swap_cols(k, pj);
            if track.v {
                v.swap_cols(k, pj);
            }
            if track.v_inv {
                v_inv.swap_rows(k, pj);
            }
        }
        let piv = w.get(k, k).clone();
        for i in (k + 1)..m {
            if w.get(i, k).is_zero() {
                continue;
            }
            let c = w.get(i, k).div_exact(&piv).expect("pivot valuation is minimal");
            let negc = c.neg();
            for j in k..n {
                let s = w.get(k, j);
                if s.is_zero() {
                    continue;
                }
                let nv = w.get(i, j).add(&negc.mul(s));
                w.set(i, j, nv);
            }
            if track.u {
                u.row_axpy(i, k, &negc);
            }
            if track.u_inv {
                u_inv.col_axpy(k, i, &c);
            }
        }
        for j in (k + 1)..n {
            if w.get(k, j).is_zero() {
                continue;
            }
            let c = w.get(k, j).div_exact(&piv).expect("pivot valuation is minimal");
            w.set(k, j, T::zero(p));
            if track.v {
                v.col_axpy(j, k, &c.neg());
            }
            if track.v_inv {
                v_inv.row_axpy(k, j, &c);
            }
        }
        let tp = T::t_pow(p, val);
        let unit = piv.div_exact(&tp).expect("unit part");
        if !unit.is_one() {
            let ui = unit.unit_inv();
            w.set(k, k, tp);
            if track.u {
                u.scale_row(k, &ui);
            }
            if track.u_inv {
                u_inv.scale_col(k, &unit);
            }
        }
        exps.push(val);
    }
    Smith {
        u,
        u_inv,
        v,
        v_inv,
        exps,
    }
}

/// Columns generate {x : A·x = 0}; the basis is saturated.
pub fn kernel_basis<T: Coeff>(a: &Matrix<T>) -> Matrix<T> {
    let s = smith_with(
        a,
        Track {
            u: false,
            u_inv: false,
            v: true,
            v_inv: false,
        },
    );
    let r = s.rank();
    let idx: Vec<usize> = (r..a.cols()).collect();
    s.v.select_cols(&idx)
}

/// Some x with A·x = b, if b lies in the column span.
pub fn solve<T: Coeff>(a: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    let s = smith_with(
        a,
        Track {
            u: true,
            u_inv: false,
            v: true,
            v_inv: false,
        },
    );
    solve_with(&s, a.prime(), b)
}

pub(crate) fn solve_with<T: Coeff>(s: &Smith<T>, p: u16, b: &[T]) -> Option<Vec<T>> {
    let w = s.u.mul_vec(b);
    let r = s.rank();
    if w[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![T::zero(p); s.v.rows()];
    for i in 0..r {
        y[i] = w[i].div_exact(&T::t_pow(p, s.exps[i]))?;
    }
    Some(s.v.mul_vec(&y))
}

/// coker(A) ≅ D^{free} ⊕ ⊕ D/t^{a_i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokerInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u32>,
}

impl CokerInvariants {
    /// Length of the cokernel; `None` when a free part makes it infinite.
    /// Over a field every free generator counts once.
    pub fn length<T: Coeff>(&self) -> Option<u64> {
        let t: u64 = self.torsion.iter().map(|&a| a as u64).sum();
        if T::IS_FIELD {
            Some(t + self.free_rank as u64)
        } else if self.free_rank == 0 {
            Some(t)
        } else {
            None
        }
    }
}

pub fn cokernel_invariants<T: Coeff>(a: &Matrix<T>) -> CokerInvariants {
    let s = smith_with(a, Track::NONE);
    CokerInvariants {
        free_rank: a.rows() - s.rank(),
        torsion: s.exps.iter().copied().filter(|&e| e > 0).collect(),
    }
}

/// A D-basis of the column span.
pub fn span_basis<T: Coeff>(a: &Matrix<T>) -> Matrix<T> {
    let p = a.prime();
    let s = smith_with(
        a,
        Track {
            u: false,
            u_inv: true,
            v: false,
            v_inv: false,
        },
    );
    let r = s.rank();
    let mut b = s.u_inv.select_cols(&(0..r).collect::<Vec<_>>());
    for (i, &e) in s.exps.iter().enumerate() {
        if e > 0 {
            b.scale_col(i, &T::t_pow(p, e));
        }
    }
    b
}

/// Generators of {x : A·x ∈ span(S)}.
pub fn preimage<T: Coeff>(a: &Matrix<T>, s: &Matrix<T>) -> Matrix<T> {
    let n = a.cols();
    let k = kernel_basis(&a.hstack(&s.neg()));
    let top = k.select_rows(&(0..n).collect::<Vec<_>>());
    span_basis(&top)
}

/// Basis of span(A) ∩ span(B).
pub fn intersect_spans<T: Coeff>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let x = preimage(a, b);
    span_basis(&a.mul(&x))
}

pub fn in_span<T: Coeff>(a: &Matrix<T>, v: &[T]) -> bool {
    solve(a, v).is_some()
}

/// True when every column of `small` lies in span(big).
pub fn span_contains<T: Coeff>(big: &Matrix<T>, small: &Matrix<T>) -> bool {
    if small.cols() == 0 {
        return true;
    }
    let s = smith_with(
        big,
        Track {
            u: true,
            u_inv: false,
            v: true,
            v_inv: false,
        },
    );
    (0..small.cols()).all(|j| solve_with(&s, big.prime(), &small.col(j)).is_some())
}

/// Canonical form of a subquotient L/K of D^n (span K ⊆ span L).
///
/// Generators come torsion first (exponents ascending), then free.
#[derive(Clone, Debug)]
pub struct Subquotient<T> {
    pub torsion: Vec<u32>,
    pub free: usize,
    /// n × g; column j is an ambient representative of canonical generator j.
    pub emb: Matrix<T>,
    l_u: Matrix<T>,
    l_exps: Vec<u32>,
    k_u: Matrix<T>,
    keep: Vec<usize>,
}

impl<T: Coeff> Subquotient<T> {
    pub fn gens(&self) -> usize {
        self.torsion.len() + self.free
    }

    pub fn modulus(&self, i: usize) -> Option<u32> {
        self.torsion.get(i).copied()
    }

    /// Canonical coordinates of an ambient vector lying in L.
    pub fn coords(&self, v: &[T]) -> Option<Vec<T>> {
        let p = self.emb.prime();
        let w = self.l_u.mul_vec(v);
        let r = self.l_exps.len();
        if w[r..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let y: Vec<T> = (0..r)
            .map(|i| w[i].div_exact(&T::t_pow(p, self.l_exps[i])))
            .collect::<Option<_>>()?;
        let z = self.k_u.mul_vec(&y);
        Some(
            self.keep
                .iter()
                .enumerate()
                .map(|(g, &row)| z[row].reduce(self.modulus(g)))
                .collect(),
        )
    }
}

pub fn subquotient<T: Coeff>(l: &Matrix<T>, k: &Matrix<T>) -> Subquotient<T> {
    let p = l.prime();
    let n = l.rows();
    let sl = smith_with(
        l,
        Track {
            u: true,
            u_inv: true,
            v: false,
            v_inv: false,
        },
    );
    let r = sl.rank();
    let mut basis = sl.u_inv.select_cols(&(0..r).collect::<Vec<_>>());
    for (i, &e) in sl.exps.iter().enumerate() {
        if e > 0 {
            basis.scale_col(i, &T::t_pow(p, e));
        }
    }
    let mut kc = Matrix::zeros(p, r, k.cols());
    for j in 0..k.cols() {
        let w = sl.u.mul_vec(&k.col(j));
        debug_assert!(w[r..].iter().all(|x| x.is_zero()), "relation outside lattice");
        for i in 0..r {
            let y = w[i]
                .div_exact(&T::t_pow(p, sl.exps[i]))
                .expect("relation outside lattice");
            kc.set(i, j, y);
        }
    }
    let sk = smith_with(
        &kc,
        Track {
            u: true,
            u_inv: true,
            v: false,
            v_inv: false,
        },
    );
    let mut keep = Vec::new();
    let mut torsion = Vec::new();
    for (i, &e) in sk.exps.iter().enumerate() {
        if e > 0 {
            keep.push(i);
            torsion.push(e);
        }
    }
    let free = r - sk.rank();
    keep.extend(sk.rank()..r);
    let emb = if keep.is_empty() {
        Matrix::zeros(p, n, 0)
    } else {
        basis.mul(&sk.u_inv.select_cols(&keep))
    };
    Subquotient {
        torsion,
        free,
        emb,
        l_u: sl.u,
        l_exps: sl.exps,
        k_u: sk.u,
        keep,
    }
}
