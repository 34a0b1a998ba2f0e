use std::sync::Arc;

use super::map::ModMap;
use super::module::CoeffModule;
use crate::dcoeff::{preimage, Coeff, Matrix, Subquotient};
use crate::{Error, Result};

/// Largest number of unknowns accepted in a Hom constraint system.
pub const HOM_VAR_BUDGET: usize = 4096;

/// Hom_R(M, N) as a module, with conversions between its elements and maps.
///
/// A map F: M → N is stored through unknowns y with F_ij = s^{c_ij}·y, where the
/// shift c_ij is forced by well-definedness on torsion generators.
pub struct HomModule<T> {
    pub module: Arc<CoeffModule<T>>,
    pub src: Arc<CoeffModule<T>>,
    pub dst: Arc<CoeffModule<T>>,
    vars: Vec<(usize, usize, u32)>,
    sq: Subquotient<T>,
}

impl<T: Coeff> HomModule<T> {
    fn y_to_matrix(&self, y: &[T]) -> Matrix<T> {
        let p = self.src.prime();
        let mut f = Matrix::zeros(p, self.dst.ngens(), self.src.ngens());
        for (k, &(i, j, c)) in self.vars.iter().enumerate() {
            f.set(i, j, y[k].mul(&T::t_pow(p, c)));
        }
        f
    }

    fn matrix_to_y(&self, f: &Matrix<T>) -> Vec<T> {
        let p = self.src.prime();
        let f = self.dst.reduce_matrix(f);
        self.vars
            .iter()
            .map(|&(i, j, c)| f.get(i, j).div_exact(&T::t_pow(p, c)).expect("map violates torsion shift"))
            .collect()
    }

    /// The map attached to an element of Hom.
    pub fn to_map(&self, h: &[T]) -> ModMap<T> {
        let y = self.sq.emb.mul_vec(h);
        ModMap::new_unchecked(&self.src, &self.dst, self.y_to_matrix(&y))
    }

    /// Coordinates in Hom of an R-linear map.
    pub fn from_map(&self, f: &ModMap<T>) -> Vec<T> {
        self.sq
            .coords(&self.matrix_to_y(&f.mat))
            .expect("map is not R-linear")
    }

    /// Maps for the canonical D-generators of Hom.
    pub fn basis_maps(&self) -> Vec<ModMap<T>> {
        (0..self.module.ngens()).map(|j| self.to_map(&self.module.unit_vec(j))).collect()
    }
}

pub fn hom<T: Coeff>(m: &Arc<CoeffModule<T>>, n: &Arc<CoeffModule<T>>) -> Result<HomModule<T>> {
    let ring = m.ring();
    let p = ring.prime();
    let (mm, nm) = (m.row_mods(), n.row_mods());
    let mut vars = Vec::new();
    let mut var_mods = Vec::new();
    for (i, b) in nm.iter().enumerate() {
        for (j, a) in mm.iter().enumerate() {
            match (a, b) {
                (Some(_), None) => {}
                (Some(a), Some(b)) => {
                    vars.push((i, j, b.saturating_sub(*a)));
                    var_mods.push(Some(*a.min(b)));
                }
                (None, b) => {
                    vars.push((i, j, 0));
                    var_mods.push(*b);
                }
            }
        }
    }
    let nv = vars.len();
    if nv > HOM_VAR_BUDGET {
        return Err(Error::ResourceBudget(format!("Hom needs {nv} unknowns")));
    }
    let (rm, rn) = (m.ngens(), n.ngens());
    let ng = ring.gen_actions().len();
    // constraint rows (g, i, j) of G_N F - F G_M
    let mut c: Matrix<T> = Matrix::zeros(p, ng * rn * rm, nv);
    for (k, &(i, j, sh)) in vars.iter().enumerate() {
        let y = T::t_pow(p, sh);
        for g in 0..ng {
            let (gm, gn) = (&m.actions()[g], &n.actions()[g]);
            // G_N · (y E_ij) has column j equal to y·G_N[:, i]
            for r in 0..rn {
                let v = gn.get(r, i);
                if !v.is_zero() {
                    let row = (g * rn + r) * rm + j;
                    let cur = c.get(row, k).add(&v.mul(&y));
                    c.set(row, k, cur);
                }
            }
            // (y E_ij) · G_M has row i equal to y·G_M[j, :]
            for col in 0..rm {
                let v = gm.get(j, col);
                if !v.is_zero() {
                    let row = (g * rn + i) * rm + col;
                    let cur = c.get(row, k).sub(&v.mul(&y));
                    c.set(row, k, cur);
                }
            }
        }
    }
    let finite_rows: Vec<(usize, u32)> = (0..ng * rn * rm)
        .filter_map(|row| nm[(row / rm) % rn].map(|b| (row, b)))
        .collect();
    let mut delta = Matrix::zeros(p, ng * rn * rm, finite_rows.len());
    for (col, &(row, b)) in finite_rows.iter().enumerate() {
        delta.set(row, col, T::t_pow(p, b));
    }
    let l = preimage(&c, &delta);
    let kcols: Vec<usize> = (0..nv).filter(|&k| var_mods[k].is_some()).collect();
    let mut k = Matrix::zeros(p, nv, kcols.len());
    for (col, &v) in kcols.iter().enumerate() {
        k.set(v, col, T::t_pow(p, var_mods[v].unwrap()));
    }
    let proto = HomModule {
        module: CoeffModule::zero(ring),
        src: m.clone(),
        dst: n.clone(),
        vars,
        sq: crate::dcoeff::subquotient(&Matrix::zeros(p, nv, 0), &Matrix::zeros(p, nv, 0)),
    };
    let built = CoeffModule::from_subquotient(ring, &l, &k, |g, y| {
        let f = proto.y_to_matrix(y);
        proto.matrix_to_y(&n.actions()[g].mul(&f))
    });
    Ok(HomModule {
        module: built.module,
        sq: built.sq,
        ..proto
    })
}
