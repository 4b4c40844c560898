//! Explicit generators: the permutations σ_s, the matrices A_s and B_s, the
//! nontoral groups Γ̄_r, the toral generators g_i and the normalizing
//! elements x_ij, y_ij.
//!
//! For `n = p^r·k` every generator of Γ̄_r is `Δ(A_s)_k` or `Δ(B_s)_k`, and a
//! toral generator `g` of PGL_k embeds as `g ⊗ I_{p^r}`.

use crate::error::{Error, Result};
use crate::gfq::{Fe, FieldSpec};
use crate::projmat::{Mat, ProjMat};

fn check_index(p: u32, r: u32, s: u32) -> Result<()> {
    if s >= r {
        return Err(Error::IndexOutOfRange(format!("s = {s} with r = {r}")));
    }
    if !crate::gfq::is_prime(p as u64) {
        return Err(Error::NonPrimeCharacteristic(p as u64));
    }
    Ok(())
}

/// σ_s on `{1..p^r}`, returned as the list `[σ_s(1), .., σ_s(p^r)]`.
pub fn sigma_perm(p: u32, r: u32, s: u32) -> Result<Vec<usize>> {
    check_index(p, r, s)?;
    let (p, ps) = (p as usize, (p as usize).pow(s));
    let size = p.pow(r);
    Ok((1..=size)
        .map(|i| {
            let m = i % (ps * p);
            if (1..=(p - 1) * ps).contains(&m) {
                i + ps
            } else {
                i - (p - 1) * ps
            }
        })
        .collect())
}

fn check_root(p: u32, beta: Fe, f: &FieldSpec) -> Result<()> {
    if beta == Fe::ONE || f.pow(beta, p as u64) != Fe::ONE {
        return Err(Error::BadRoot);
    }
    Ok(())
}

/// `(A_s)_{ii} = β^⌊(i−1)/p^s⌋`.
pub fn a_matrix(p: u32, r: u32, s: u32, beta: Fe, f: &FieldSpec) -> Result<Mat> {
    check_index(p, r, s)?;
    check_root(p, beta, f)?;
    let ps = (p as u64).pow(s);
    let size = (p as u64).pow(r);
    let d: Vec<Fe> = (1..=size).map(|i| f.pow(beta, ((i - 1) / ps) % p as u64)).collect();
    Ok(Mat::diag(&d))
}

/// `(B_s)_{ij} = 1` iff `σ_s(i) = j`.
pub fn b_matrix(p: u32, r: u32, s: u32) -> Result<Mat> {
    let sigma = sigma_perm(p, r, s)?;
    Ok(Mat::permutation(&sigma.iter().map(|&j| j - 1).collect::<Vec<_>>()))
}

/// Generators of Γ̄_r inside PGL_{p^r·k}, with their matrix lifts.
#[derive(Debug, Clone)]
pub struct GammaGens {
    pub p: u32,
    pub r: u32,
    pub k: usize,
    pub beta: Fe,
    pub field: FieldSpec,
    pub a_lifts: Vec<Mat>,
    pub b_lifts: Vec<Mat>,
    pub a_list: Vec<ProjMat>,
    pub b_list: Vec<ProjMat>,
}

impl GammaGens {
    pub fn n(&self) -> usize {
        (self.p as usize).pow(self.r) * self.k
    }

    /// `Ā_0, B̄_0, Ā_1, B̄_1, ..`.
    pub fn interleaved(&self) -> Vec<ProjMat> {
        self.a_list
            .iter()
            .zip(&self.b_list)
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    }

    /// Ā_0..Ā_{r−1}: the toral subgroup D_r.
    pub fn d_group(&self) -> &[ProjMat] {
        &self.a_list
    }

    /// B̄_0..B̄_{r−1}.
    pub fn b_group(&self) -> &[ProjMat] {
        &self.b_list
    }
}

/// Γ̄_r in PGL_{p^r·k}(F) using `β = root_of_unity(F, p)`.
pub fn gamma_generators(p: u32, r: u32, k: usize, f: &FieldSpec) -> Result<GammaGens> {
    let beta = f.root_of_unity(p)?;
    gamma_generators_with_root(p, r, k, beta, f)
}

pub fn gamma_generators_with_root(p: u32, r: u32, k: usize, beta: Fe, f: &FieldSpec) -> Result<GammaGens> {
    check_root(p, beta, f)?;
    let mut a_lifts = Vec::new();
    let mut b_lifts = Vec::new();
    for s in 0..r {
        a_lifts.push(a_matrix(p, r, s, beta, f)?.block_diag(k));
        b_lifts.push(b_matrix(p, r, s)?.block_diag(k));
    }
    let a_list = a_lifts.iter().map(|m| ProjMat::new(m.clone(), f)).collect::<Result<_>>()?;
    let b_list = b_lifts.iter().map(|m| ProjMat::new(m.clone(), f)).collect::<Result<_>>()?;
    Ok(GammaGens { p, r, k, beta, field: f.clone(), a_lifts, b_lifts, a_list, b_list })
}

/// `X Y X⁻¹ Y⁻¹`.
pub fn commutator(x: &Mat, y: &Mat, f: &FieldSpec) -> Result<Mat> {
    Ok(x.mul(y, f).mul(&x.inv(f)?, f).mul(&y.inv(f)?, f))
}

/// Exact matrix relations of the lifts: lifts from different indices
/// commute, and `[B_t, A_t] = β·I`.
pub fn check_relations(g: &GammaGens) -> bool {
    let f = &g.field;
    let n = g.n();
    let id = Mat::identity(n);
    let beta_i = id.scale(g.beta, f);
    let r = g.r as usize;
    let comm = |x: &Mat, y: &Mat| commutator(x, y, f).ok();
    for t in 0..r {
        for s in 0..r {
            if comm(&g.a_lifts[t], &g.a_lifts[s]).as_ref() != Some(&id)
                || comm(&g.b_lifts[t], &g.b_lifts[s]).as_ref() != Some(&id)
            {
                return false;
            }
            let want = if s == t { &beta_i } else { &id };
            if comm(&g.b_lifts[t], &g.a_lifts[s]).as_ref() != Some(want) {
                return false;
            }
        }
    }
    true
}

/// `g_i`: the k×k diagonal matrix with `root` in slot i (1-based), ones elsewhere.
pub fn toral_slot_matrix(k: usize, i: usize, root: Fe) -> Mat {
    let mut d = vec![Fe::ONE; k];
    d[i - 1] = root;
    Mat::diag(&d)
}

/// `g_1..g_d` in PGL_{n_slots}.
pub fn toral_generators(p: u32, d: usize, n_slots: usize, beta: Fe, f: &FieldSpec) -> Result<Vec<ProjMat>> {
    check_root(p, beta, f)?;
    if d + 1 > n_slots {
        return Err(Error::RankDeficient);
    }
    (1..=d).map(|i| ProjMat::new(toral_slot_matrix(n_slots, i, beta), f)).collect()
}

/// The normalizing elements `x_ij`, `y_ij` (1 ≤ i ≤ m, 1 ≤ j ≤ r) of
/// `Γ̄_r × J` in PGL_{p^r(m+1)}, where `J = ⟨g_i ⊗ I_{p^r}⟩`.
#[derive(Debug, Clone)]
pub struct XyGens {
    pub p: u32,
    pub r: u32,
    pub m: usize,
    /// `x[i-1][j-1]`.
    pub x: Vec<Vec<ProjMat>>,
    pub y: Vec<Vec<ProjMat>>,
    /// `g_i ⊗ I_{p^r}` for i = 1..m.
    pub toral: Vec<ProjMat>,
    pub gamma: GammaGens,
}

impl XyGens {
    /// `x_11, y_11, x_12, y_12, ..` in row-major (i, j) order.
    pub fn flatten(&self) -> Vec<ProjMat> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in 0..self.r as usize {
                out.push(self.x[i][j].clone());
                out.push(self.y[i][j].clone());
            }
        }
        out
    }
}

/// Builds `x_ij` and `y_ij` as block-diagonal matrices that differ from the
/// identity only in the i-th block of size p^r.
///
/// * p = 2: the block of `x_ij` is `B_{j−1} A_{j−1}⁻¹` and that of `y_ij` is
///   `−A_{j−1}`. Conjugation multiplies `Ā_{j−1}` and `B̄_{j−1}` by
///   `g_i ⊗ I` (x) and only `B̄_{j−1}` (y).
/// * p odd: the blocks are `B_{j−1}` and `A_{j−1}`. Conjugation sends
///   `Ā_{j−1} ↦ Ā_{j−1}(g_i ⊗ I)` (x) and `B̄_{j−1} ↦ B̄_{j−1}(g_i⁻¹ ⊗ I)` (y).
pub fn xy_generators(p: u32, r: u32, m: usize, f: &FieldSpec) -> Result<XyGens> {
    if m == 0 || r == 0 {
        return Err(Error::IndexOutOfRange("m and r must be positive".into()));
    }
    let k = m + 1;
    let gamma = gamma_generators(p, r, k, f)?;
    let beta = gamma.beta;
    let size = (p as usize).pow(r);
    let id_block = Mat::identity(size);
    let mut x = vec![Vec::new(); m];
    let mut y = vec![Vec::new(); m];
    for i in 1..=m {
        for j in 1..=r {
            let a = a_matrix(p, r, j - 1, beta, f)?;
            let b = b_matrix(p, r, j - 1)?;
            let (xb, yb) = if p == 2 {
                (b.mul(&a.inv(f)?, f), a.scale(f.neg(Fe::ONE), f))
            } else {
                (b, a)
            };
            let place = |blk: &Mat| {
                let blocks: Vec<Mat> =
                    (1..=k).map(|t| if t == i { blk.clone() } else { id_block.clone() }).collect();
                ProjMat::new(Mat::block_diag_of(&blocks), f)
            };
            x[i - 1].push(place(&xb)?);
            y[i - 1].push(place(&yb)?);
        }
    }
    let toral = (1..=m)
        .map(|i| ProjMat::new(Mat::kron(&toral_slot_matrix(k, i, beta), &id_block, f), f))
        .collect::<Result<_>>()?;
    Ok(XyGens { p, r, m, x, y, toral, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projmat::closure;

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_perm(2, 1, 0).unwrap(), vec![2, 1]);
        assert_eq!(sigma_perm(2, 2, 1).unwrap(), vec![3, 4, 1, 2]);
        assert_eq!(sigma_perm(3, 1, 0).unwrap(), vec![2, 3, 1]);
        assert!(matches!(sigma_perm(2, 1, 1), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn a_and_b_examples() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let m1 = f5.from_int(-1);
        assert_eq!(a_matrix(2, 1, 0, m1, &f5).unwrap(), Mat::diag(&[Fe::ONE, m1]));
        assert_eq!(b_matrix(2, 1, 0).unwrap(), Mat::permutation(&[1, 0]));
        assert_eq!(a_matrix(2, 2, 1, m1, &f5).unwrap(), Mat::diag(&[Fe::ONE, Fe::ONE, m1, m1]));
        let f7 = FieldSpec::new(7, 1).unwrap();
        let b = f7.root_of_unity(3).unwrap();
        assert_eq!(a_matrix(3, 1, 0, b, &f7).unwrap(), Mat::diag(&[Fe::ONE, b, f7.mul(b, b)]));
        assert_eq!(a_matrix(3, 1, 0, Fe::ONE, &f7), Err(Error::BadRoot));
    }

    #[test]
    fn gamma_groups_have_expected_order() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let g = gamma_generators(2, 1, 1, &f5).unwrap();
        assert_eq!(closure(&g.interleaved(), 2, &f5, 100).unwrap().len(), 4);
        let g2 = gamma_generators(2, 1, 2, &f5).unwrap();
        assert_eq!(g2.a_lifts[0], g.a_lifts[0].block_diag(2));
        let f7 = FieldSpec::new(7, 1).unwrap();
        let g3 = gamma_generators(3, 1, 1, &f7).unwrap();
        assert_eq!(closure(&g3.interleaved(), 3, &f7, 100).unwrap().len(), 9);
    }

    #[test]
    fn relations_hold_and_detect_mutation() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        assert!(check_relations(&gamma_generators(2, 1, 1, &f5).unwrap()));
        let f7 = FieldSpec::new(7, 1).unwrap();
        assert!(check_relations(&gamma_generators(3, 2, 1, &f7).unwrap()));
        let f7g = gamma_generators(3, 1, 1, &f7).unwrap();
        let mut h = f7g.clone();
        let a = &mut h.a_lifts[0];
        let (x, y) = (a.get(0, 0), a.get(1, 1));
        a.set(0, 0, y);
        a.set(1, 1, x);
        assert!(!check_relations(&h));
    }

    #[test]
    fn toral_generators_examples() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let m1 = f5.from_int(-1);
        let g = toral_generators(2, 1, 2, m1, &f5).unwrap();
        assert_eq!(g[0], ProjMat::new(Mat::diag(&[m1, Fe::ONE]), &f5).unwrap());
        let f7 = FieldSpec::new(7, 1).unwrap();
        let b = f7.root_of_unity(3).unwrap();
        let g = toral_generators(3, 2, 3, b, &f7).unwrap();
        assert_eq!(g[1], ProjMat::new(Mat::diag(&[Fe::ONE, b, Fe::ONE]), &f7).unwrap());
        assert_eq!(closure(&g, 3, &f7, 100).unwrap().len(), 9);
    }
}
