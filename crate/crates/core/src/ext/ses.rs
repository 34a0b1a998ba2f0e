use std::sync::Arc;

use super::presentation::{ext1, ExtClass, ExtPresentation};
use crate::dcoeff::{solve, span_contains, Coeff, Matrix};
use crate::modules::{hom, CoeffModule, HomModule, ModMap, RMat, RawSum};
use crate::{Error, Result};

/// A short exact sequence 0 → N →i X →p M → 0.
#[derive(Clone)]
pub struct Ses<T> {
    pub n: Arc<CoeffModule<T>>,
    pub x: Arc<CoeffModule<T>>,
    pub m: Arc<CoeffModule<T>>,
    pub i: ModMap<T>,
    pub p: ModMap<T>,
}

impl<T: Coeff> std::fmt::Debug for Ses<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ses").field("n", &self.n).field("x", &self.x).field("m", &self.m).finish()
    }
}

/// Column j of an RMat as a vector of the free module R^rows.
fn rmat_col<T: Coeff>(d: &RMat<T>, j: usize) -> Vec<T> {
    (0..d.rows).flat_map(|k| d.get(k, j).to_vec()).collect()
}

/// Solves a·x ≡ b modulo the span of `rel`.
fn solve_mod<T: Coeff>(a: &Matrix<T>, rel: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    let x = solve(&a.hstack(rel), b)?;
    Some(x[..a.cols()].to_vec())
}

impl<T: Coeff> Ses<T> {
    pub fn new_unchecked(i: ModMap<T>, p: ModMap<T>) -> Self {
        Ses {
            n: i.src.clone(),
            x: i.dst.clone(),
            m: p.dst.clone(),
            i,
            p,
        }
    }

    /// Checks maps and exactness.
    pub fn new(i: ModMap<T>, p: ModMap<T>) -> Result<Self> {
        let s = Self::new_unchecked(i, p);
        let d = s.exactness_defects();
        if d.is_empty() {
            Ok(s)
        } else {
            Err(Error::Invalid(format!("not a short exact sequence: {}", d.join(", "))))
        }
    }

    /// Failed exactness conditions (empty for a short exact sequence).
    pub fn exactness_defects(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.i.mat.cols() != self.n.ngens() || self.p.mat.rows() != self.m.ngens() || self.i.mat.rows() != self.p.mat.cols() {
            out.push("shapes");
            return out;
        }
        if !self.i.is_well_defined() || !self.i.is_r_linear() || !self.p.is_well_defined() || !self.p.is_r_linear() {
            out.push("maps not R-linear");
        }
        if !self.i.is_injective() {
            out.push("i not injective");
        }
        if !self.p.is_surjective() {
            out.push("p not surjective");
        }
        if !self.p.compose(&self.i).is_zero() {
            out.push("p∘i ≠ 0");
        }
        if !span_contains(&self.i.image(), &self.p.kernel()) {
            out.push("ker p ⊄ im i");
        }
        out
    }

    pub fn is_exact(&self) -> bool {
        self.exactness_defects().is_empty()
    }

    /// 0 → N → N ⊕ M → M → 0.
    pub fn split(n: &Arc<CoeffModule<T>>, m: &Arc<CoeffModule<T>>) -> Self {
        let (x, inj, proj) = CoeffModule::direct_sum_with_maps(n.ring(), &[n.clone(), m.clone()]);
        let i = ModMap::new_unchecked(n, &x, inj[0].clone());
        let p = ModMap::new_unchecked(&x, m, proj[1].clone());
        Self::new_unchecked(i, p)
    }

    /// A section σ of p (p∘σ = id), if one exists.
    pub fn section(&self) -> Result<Option<ModMap<T>>> {
        right_inverse(&self.p)
    }

    /// Splitness, decided both by the Ext class and by a section search.
    pub fn is_split(&self) -> Result<bool> {
        let pres = ext1(&self.m, &self.n)?;
        let by_class = pres.is_zero(&pres.classify(self)?);
        let by_section = self.section()?.is_some();
        if by_class != by_section {
            return Err(Error::Internal("class and section disagree on splitness".into()));
        }
        Ok(by_class)
    }
}

impl<T: Coeff> ExtPresentation<T> {
    /// The extension X = (N ⊕ F0)/⟨(−c(e_j), d1 e_j)⟩ attached to a class.
    pub fn middle(&self, c: &ExtClass<T>) -> Ses<T> {
        let ring = self.m.ring();
        let pr = self.prime();
        let b0 = self.res.betti[0];
        let d1 = &self.res.diffs[0];
        let f0 = CoeffModule::free(ring, b0);
        let raw = RawSum::new(ring, &[self.n.clone(), f0]);
        let k = self.n.ngens();
        let cyc = self.lift(c);
        let cols: Vec<Vec<T>> = (0..d1.cols)
            .map(|j| {
                cyc[j * k..(j + 1) * k]
                    .iter()
                    .map(|x| x.neg())
                    .chain(rmat_col(d1, j))
                    .collect()
            })
            .collect();
        let q = raw.quotient(&Matrix::from_cols(pr, raw.dim(), &cols));
        let proj = q.coords_matrix(&Matrix::identity(pr, raw.dim())).expect("quotient of the whole sum");
        let x = q.module.clone();
        let i = proj.select_cols(&(0..k).collect::<Vec<_>>());
        let cover = self.m.cover_matrix(&self.res.cover);
        let p_raw = Matrix::zeros(pr, self.m.ngens(), k).hstack(&cover);
        let p = p_raw.mul(q.lift());
        Ses::new_unchecked(ModMap::new_unchecked(&self.n, &x, i), ModMap::new_unchecked(&x, &self.m, p))
    }

    /// The class of an extension of M by N (same generating systems as the presentation).
    pub fn classify(&self, s: &Ses<T>) -> Result<ExtClass<T>> {
        if s.m.torsion() != self.m.torsion() || s.m.free_rank() != self.m.free_rank() || s.n.torsion() != self.n.torsion() || s.n.free_rank() != self.n.free_rank() {
            return Err(Error::Invalid("sequence ends do not match the presentation".into()));
        }
        let pr = self.prime();
        let r = self.m.ring().rank();
        let x = &s.x;
        let b0 = self.res.betti[0];
        let d1 = &self.res.diffs[0];
        let rel_m = self.m.relations();
        let rel_x = x.relations();
        let bx: Vec<Matrix<T>> = (0..r).map(|i| x.basis_action(i)).collect();
        let mut alpha_cols = Vec::with_capacity(b0 * r);
        for kk in 0..b0 {
            let g = self.res.cover.col(kk);
            let xk = solve_mod(&s.p.mat, &rel_m, &g)
                .ok_or_else(|| Error::LiftFailure("cover generator does not lift along p".into()))?;
            for b in &bx {
                alpha_cols.push(x.reduce(&b.mul_vec(&xk)));
            }
        }
        let alpha = Matrix::from_cols(pr, x.ngens(), &alpha_cols);
        let mut cyc = Vec::new();
        for j in 0..d1.cols {
            let v = x.reduce(&alpha.mul_vec(&rmat_col(d1, j)));
            let cj = solve_mod(&s.i.mat, &rel_x, &v)
                .ok_or_else(|| Error::LiftFailure("relation image is not in im(i)".into()))?;
            cyc.extend(self.n.reduce(&cj));
        }
        self.class_of_cocycle(&cyc)
    }

    /// r·c computed by pulling the extension back along r·id_M.
    pub fn scalar_via_pullback(&self, r: &[T], c: &ExtClass<T>) -> Result<ExtClass<T>> {
        let s = self.middle(c);
        let g = ModMap::new_unchecked(&self.m, &self.m, self.m.elem_action(r));
        self.classify(&pullback_seq(&s, &g).0)
    }

    /// r·c computed by pushing the extension out along r·id_N.
    pub fn scalar_via_pushout(&self, r: &[T], c: &ExtClass<T>) -> Result<ExtClass<T>> {
        let s = self.middle(c);
        let f = ModMap::new_unchecked(&self.n, &self.n, self.n.elem_action(r));
        self.classify(&pushout_seq(&s, &f).0)
    }

    /// c1 + c2 via the diagram: direct sum, pushout along the sum map, pullback along the diagonal.
    pub fn baer_sum_via_diagram(&self, c1: &ExtClass<T>, c2: &ExtClass<T>) -> Result<ExtClass<T>> {
        let ring = self.m.ring();
        let s = ses_direct_sum(&self.middle(c1), &self.middle(c2));
        let (_, _, proj_n) = CoeffModule::direct_sum_with_maps(ring, &[self.n.clone(), self.n.clone()]);
        let (_, inj_m, _) = CoeffModule::direct_sum_with_maps(ring, &[self.m.clone(), self.m.clone()]);
        let sum = ModMap::new_unchecked(&s.n, &self.n, proj_n[0].add(&proj_n[1]));
        let diag = ModMap::new_unchecked(&self.m, &s.m, inj_m[0].add(&inj_m[1]));
        let po = pushout_seq(&s, &sum).0;
        self.classify(&pullback_seq(&po, &diag).0)
    }
}

/// σ with p∘σ = id for p: X → M, if one exists.
pub fn right_inverse<T: Coeff>(p: &ModMap<T>) -> Result<Option<ModMap<T>>> {
    let (x, m) = (&p.src, &p.dst);
    let h = hom(m, x)?;
    let maps = h.basis_maps();
    let nm = m.ngens();
    let pr = m.prime();
    if nm == 0 {
        return Ok(Some(ModMap::zero(m, x)));
    }
    let vecs: Vec<Vec<T>> = maps
        .iter()
        .map(|f| {
            let c = p.mat.mul(&f.mat);
            (0..nm).flat_map(|j| c.col(j)).collect()
        })
        .collect();
    let a = Matrix::from_cols(pr, nm * nm, &vecs);
    let rel = m.relations();
    let rel = Matrix::block_diag(pr, &vec![&rel; nm]);
    let id = m.full();
    let target: Vec<T> = (0..nm).flat_map(|j| id.col(j)).collect();
    Ok(solve_mod(&a, &rel, &target).map(|y| {
        let mut mat = Matrix::zeros(pr, x.ngens(), nm);
        for (f, c) in maps.iter().zip(&y) {
            if !c.is_zero() {
                mat = mat.add(&f.mat.scale(c));
            }
        }
        ModMap::new_unchecked(m, x, mat)
    }))
}

/// 0 → N1 ⊕ N2 → X1 ⊕ X2 → M1 ⊕ M2 → 0.
pub fn ses_direct_sum<T: Coeff>(a: &Ses<T>, b: &Ses<T>) -> Ses<T> {
    let ring = a.n.ring();
    let (nn, _, pn) = CoeffModule::direct_sum_with_maps(ring, &[a.n.clone(), b.n.clone()]);
    let (xx, ix, px) = CoeffModule::direct_sum_with_maps(ring, &[a.x.clone(), b.x.clone()]);
    let (mm, im, _) = CoeffModule::direct_sum_with_maps(ring, &[a.m.clone(), b.m.clone()]);
    let i = ix[0].mul(&a.i.mat).mul(&pn[0]).add(&ix[1].mul(&b.i.mat).mul(&pn[1]));
    let p = im[0].mul(&a.p.mat).mul(&px[0]).add(&im[1].mul(&b.p.mat).mul(&px[1]));
    Ses::new_unchecked(ModMap::new_unchecked(&nn, &xx, i), ModMap::new_unchecked(&xx, &mm, p))
}

/// Pushout along f: N → N'; also returns the comparison map X → X'.
pub fn pushout_seq<T: Coeff>(s: &Ses<T>, f: &ModMap<T>) -> (Ses<T>, ModMap<T>) {
    let ring = s.n.ring();
    let pr = s.n.prime();
    let n2 = f.dst.clone();
    let raw = RawSum::new(ring, &[n2.clone(), s.x.clone()]);
    let rels = f.mat.vstack(&s.i.mat.neg());
    let q = raw.quotient(&rels);
    let proj = q.coords_matrix(&Matrix::identity(pr, raw.dim())).expect("quotient of the whole sum");
    let x2 = q.module.clone();
    let k = n2.ngens();
    let i = proj.select_cols(&(0..k).collect::<Vec<_>>());
    let w = proj.select_cols(&(k..raw.dim()).collect::<Vec<_>>());
    let p = raw.project(1, q.lift());
    let p = s.p.mat.mul(&p);
    let seq = Ses::new_unchecked(ModMap::new_unchecked(&n2, &x2, i), ModMap::new_unchecked(&x2, &s.m, p));
    (seq, ModMap::new_unchecked(&s.x, &x2, w))
}

/// Pullback along g: M' → M; also returns the comparison map X' → X.
pub fn pullback_seq<T: Coeff>(s: &Ses<T>, g: &ModMap<T>) -> (Ses<T>, ModMap<T>) {
    let ring = s.n.ring();
    let m2 = g.src.clone();
    let raw = RawSum::new(ring, &[s.x.clone(), m2.clone()]);
    let a = s.p.mat.hstack(&g.mat.neg());
    let lat = crate::dcoeff::preimage(&a, &s.m.relations()).hstack(&raw.relations());
    let lat = if lat.cols() == 0 { lat } else { crate::dcoeff::span_basis(&lat) };
    let sub = raw.submodule(&lat);
    let x2 = sub.module.clone();
    let i = sub
        .coords_matrix(&raw.embed(0, &s.i.mat))
        .expect("image of N lies in the pullback");
    let p = raw.project(1, sub.lift());
    let w = raw.project(0, sub.lift());
    let seq = Ses::new_unchecked(ModMap::new_unchecked(&s.n, &x2, i), ModMap::new_unchecked(&x2, &m2, p));
    (seq, ModMap::new_unchecked(&x2, &s.x, w))
}

/// Matrix of Ext¹(A, f): Ext¹(A, N) → Ext¹(A, N') for f: N → N'.
pub fn ext_map_covariant<T: Coeff>(src: &ExtPresentation<T>, dst: &ExtPresentation<T>, f: &ModMap<T>) -> Result<Matrix<T>> {
    let b1 = src.res.betti[1];
    let fb = Matrix::block_diag(f.mat.prime(), &vec![&f.mat; b1]);
    let cols: Vec<Vec<T>> = src
        .generators()
        .iter()
        .map(|g| {
            let c = fb.mul_vec(&src.lift(g));
            dst.class_of_cocycle(&c).map(|x| x.coords)
        })
        .collect::<Result<_>>()?;
    Ok(Matrix::from_cols(f.mat.prime(), dst.module.ngens(), &cols))
}

/// Matrix of Ext¹(g, N): Ext¹(A, N) → Ext¹(A', N) for g: A' → A, via a lift of g to
/// the minimal resolutions.
pub fn ext_map_contravariant<T: Coeff>(src: &ExtPresentation<T>, dst: &ExtPresentation<T>, g: &ModMap<T>) -> Result<Matrix<T>> {
    let a = &src.m;
    let pr = a.prime();
    let ring = a.ring();
    let r = ring.rank();
    let pi = a.cover_matrix(&src.res.cover);
    let rel_a = a.relations();
    let f0 = CoeffModule::free(ring, src.res.betti[0]);
    let bf: Vec<Matrix<T>> = (0..r).map(|i| f0.basis_action(i)).collect();
    // α0: F0' → F0 on D-coordinates
    let mut a0 = Vec::new();
    for k in 0..dst.res.betti[0] {
        let img = a.reduce(&g.mat.mul_vec(&dst.res.cover.col(k)));
        let y = solve_mod(&pi, &rel_a, &img).ok_or_else(|| Error::LiftFailure("cover does not lift".into()))?;
        for b in &bf {
            a0.push(b.mul_vec(&y));
        }
    }
    let a0 = Matrix::from_cols(pr, f0.ngens(), &a0);
    let d1 = src.res.diffs[0].expand(ring);
    let d1p = &dst.res.diffs[0];
    let mut out = Vec::new();
    for c in src.generators() {
        let cm = src.cocycle_matrix(&src.lift(&c));
        let mut cyc = Vec::new();
        for j in 0..d1p.cols {
            let v = a0.mul_vec(&rmat_col(d1p, j));
            let z = solve(&d1, &v).ok_or_else(|| Error::LiftFailure("chain lift failed".into()))?;
            cyc.extend(src.n.reduce(&cm.mul_vec(&z)));
        }
        out.push(dst.class_of_cocycle(&cyc)?.coords);
    }
    Ok(Matrix::from_cols(pr, dst.module.ngens(), &out))
}

/// Matrix of Hom(A, f): Hom(A, N) → Hom(A, N'), h ↦ f∘h.
pub fn hom_post<T: Coeff>(src: &HomModule<T>, dst: &HomModule<T>, f: &ModMap<T>) -> Matrix<T> {
    let cols: Vec<Vec<T>> = src.basis_maps().iter().map(|h| dst.from_map(&f.compose(h))).collect();
    Matrix::from_cols(f.mat.prime(), dst.module.ngens(), &cols)
}

/// Matrix of Hom(g, A): Hom(M, A) → Hom(M', A), h ↦ h∘g.
pub fn hom_pre<T: Coeff>(src: &HomModule<T>, dst: &HomModule<T>, g: &ModMap<T>) -> Matrix<T> {
    let cols: Vec<Vec<T>> = src.basis_maps().iter().map(|h| dst.from_map(&h.compose(g))).collect();
    Matrix::from_cols(g.mat.prime(), dst.module.ngens(), &cols)
}

/// Checks im = ker along 0 → Hom(A,N) → Hom(A,X) → Hom(A,M) → Ext¹(A,N) → Ext¹(A,X) → Ext¹(A,M).
/// Returns the names of the nodes where exactness fails.
pub fn long_exact_defects<T: Coeff>(s: &Ses<T>, a: &Arc<CoeffModule<T>>) -> Result<Vec<String>> {
    let (han, hax, ham) = (hom(a, &s.n)?, hom(a, &s.x)?, hom(a, &s.m)?);
    let (ean, eax, eam) = (ext1(a, &s.n)?, ext1(a, &s.x)?, ext1(a, &s.m)?);
    let m1 = hom_post(&han, &hax, &s.i);
    let m2 = hom_post(&hax, &ham, &s.p);
    let cols: Vec<Vec<T>> = ham
        .basis_maps()
        .iter()
        .map(|g| ean.classify(&pullback_seq(s, g).0).map(|c| c.coords))
        .collect::<Result<_>>()?;
    let m3 = Matrix::from_cols(a.prime(), ean.module.ngens(), &cols);
    let m4 = ext_map_covariant(&ean, &eax, &s.i)?;
    let m5 = ext_map_covariant(&eax, &eam, &s.p)?;
    let mods = [&han.module, &hax.module, &ham.module, &ean.module, &eax.module, &eam.module];
    let maps: Vec<ModMap<T>> = [m1, m2, m3, m4, m5]
        .into_iter()
        .enumerate()
        .map(|(k, m)| ModMap::new_unchecked(mods[k], mods[k + 1], m))
        .collect();
    let names = ["Hom(A,N)", "Hom(A,X)", "Hom(A,M)", "Ext(A,N)", "Ext(A,X)"];
    let mut bad = Vec::new();
    if !maps[0].is_injective() {
        bad.push(names[0].to_string());
    }
    for k in 0..4 {
        let (im, ker) = (maps[k].image(), maps[k + 1].kernel());
        if !(span_contains(&im, &ker) && span_contains(&ker, &im)) {
            bad.push(names[k + 1].to_string());
        }
    }
    Ok(bad)
}
