//! Dense matrices over GF(q), projective classes and the ambient group data.

use crate::error::{Error, Result};
use crate::gfq::{Fe, FieldSpec};
use serde::{Deserialize, Serialize};

/// Square matrix, row-major. Arithmetic takes the field explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat {
    n: usize,
    entries: Vec<Fe>,
}

impl Mat {
    pub fn zero(n: usize) -> Mat {
        Mat { n, entries: vec![Fe::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = Fe::ONE;
        }
        m
    }

    pub fn from_entries(n: usize, entries: Vec<Fe>) -> Result<Mat> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        Ok(Mat { n, entries })
    }

    pub fn diag(d: &[Fe]) -> Mat {
        let mut m = Mat::zero(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.entries[i * d.len() + i] = x;
        }
        m
    }

    /// Permutation matrix with `(M)_{i, perm[i]} = 1` (0-based).
    pub fn permutation(perm: &[usize]) -> Mat {
        let n = perm.len();
        let mut m = Mat::zero(n);
        for (i, &j) in perm.iter().enumerate() {
            m.entries[i * n + j] = Fe::ONE;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Fe] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.entries[i * self.n + j] = v;
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.n)
    }

    /// The scalar `c` if the matrix equals `c·I`.
    pub fn as_scalar(&self) -> Option<Fe> {
        let c = self.get(0, 0);
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { c } else { Fe::ZERO };
                if self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn mul(&self, b: &Mat, f: &FieldSpec) -> Mat {
        let mut out = Mat::zero(self.n);
        self.mul_into(b, f, &mut out);
        out
    }

    /// `out = self · b` without allocating.
    pub fn mul_into(&self, b: &Mat, f: &FieldSpec, out: &mut Mat) {
        let n = self.n;
        debug_assert_eq!(n, b.n);
        out.n = n;
        out.entries.clear();
        out.entries.resize(n * n, Fe::ZERO);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let bkj = b.entries[k * n + j];
                    if !bkj.is_zero() {
                        let idx = i * n + j;
                        out.entries[idx] = f.add(out.entries[idx], f.mul(a, bkj));
                    }
                }
            }
        }
    }

    pub fn scale(&self, c: Fe, f: &FieldSpec) -> Mat {
        Mat { n: self.n, entries: self.entries.iter().map(|&x| f.mul(c, x)).collect() }
    }

    pub fn add(&self, b: &Mat, f: &FieldSpec) -> Mat {
        Mat {
            n: self.n,
            entries: self.entries.iter().zip(&b.entries).map(|(&x, &y)| f.add(x, y)).collect(),
        }
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut m = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[j * n + i] = self.entries[i * n + j];
            }
        }
        m
    }

    pub fn map(&self, g: impl Fn(Fe) -> Fe) -> Mat {
        Mat { n: self.n, entries: self.entries.iter().map(|&x| g(x)).collect() }
    }

    /// Gauss–Jordan inverse.
    pub fn inv(&self, f: &FieldSpec) -> Result<Mat> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut b = Mat::identity(n).entries;
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r * n + col].is_zero()).ok_or(Error::SingularMatrix)?;
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                    b.swap(piv * n + j, col * n + j);
                }
            }
            let inv = f.inv(a[col * n + col])?;
            for j in 0..n {
                a[col * n + j] = f.mul(inv, a[col * n + j]);
                b[col * n + j] = f.mul(inv, b[col * n + j]);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[col * n + j]));
                    b[r * n + j] = f.sub(b[r * n + j], f.mul(factor, b[col * n + j]));
                }
            }
        }
        Ok(Mat { n, entries: b })
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, f: &FieldSpec) -> Fe {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = Fe::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Fe::ZERO;
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let pv = a[col * n + col];
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = f.mul(a[r * n + col], inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[col * n + j]));
                }
            }
        }
        det
    }

    pub fn pow(&self, mut k: u64, f: &FieldSpec) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            k >>= 1;
        }
        acc
    }

    /// `Δ(M)_k`: k diagonal copies of M.
    pub fn block_diag(&self, k: usize) -> Mat {
        let s = self.n;
        let n = s * k;
        let mut m = Mat::zero(n);
        for b in 0..k {
            for i in 0..s {
                for j in 0..s {
                    m.entries[(b * s + i) * n + b * s + j] = self.entries[i * s + j];
                }
            }
        }
        m
    }

    /// Block-diagonal matrix from a list of square blocks.
    pub fn block_diag_of(blocks: &[Mat]) -> Mat {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut m = Mat::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m.entries[(off + i) * n + off + j] = b.entries[i * b.n + j];
                }
            }
            off += b.n;
        }
        m
    }

    /// Kronecker product `a ⊗ b`.
    pub fn kron(a: &Mat, b: &Mat, f: &FieldSpec) -> Mat {
        let (na, nb) = (a.n, b.n);
        let n = na * nb;
        let mut m = Mat::zero(n);
        for i in 0..na {
            for j in 0..na {
                let x = a.entries[i * na + j];
                if x.is_zero() {
                    continue;
                }
                for k in 0..nb {
                    for l in 0..nb {
                        m.entries[(i * nb + k) * n + j * nb + l] = f.mul(x, b.entries[k * nb + l]);
                    }
                }
            }
        }
        m
    }
}

/// An element of PGL_n: the representative whose first nonzero entry in
/// row-major order is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjMat {
    mat: Mat,
}

impl ProjMat {
    pub fn new(m: Mat, f: &FieldSpec) -> Result<ProjMat> {
        if m.det(f).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(ProjMat::normalize_unchecked(m, f))
    }

    /// Normalizes without checking invertibility.
    pub fn normalize_unchecked(mut m: Mat, f: &FieldSpec) -> ProjMat {
        normalize_in_place(&mut m, f);
        ProjMat { mat: m }
    }

    pub fn identity(n: usize) -> ProjMat {
        ProjMat { mat: Mat::identity(n) }
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn into_mat(self) -> Mat {
        self.mat
    }

    pub fn n(&self) -> usize {
        self.mat.n
    }

    pub fn mul(&self, b: &ProjMat, f: &FieldSpec) -> ProjMat {
        ProjMat::normalize_unchecked(self.mat.mul(&b.mat, f), f)
    }

    pub fn inv(&self, f: &FieldSpec) -> ProjMat {
        ProjMat::normalize_unchecked(self.mat.inv(f).expect("projective elements are invertible"), f)
    }

    pub fn pow(&self, k: u64, f: &FieldSpec) -> ProjMat {
        ProjMat::normalize_unchecked(self.mat.pow(k, f), f)
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    /// Least k ≤ cap with `self^k = 1`.
    pub fn elem_order(&self, cap: u64, f: &FieldSpec) -> Result<u64> {
        let mut x = self.clone();
        for k in 1..=cap {
            if x.is_identity() {
                return Ok(k);
            }
            x = x.mul(self, f);
        }
        Err(Error::OrderExceedsCap(cap))
    }

    /// `self · other = other · self` projectively.
    pub fn commutes_with(&self, other: &ProjMat, f: &FieldSpec) -> bool {
        self.mul(other, f) == other.mul(self, f)
    }
}

/// Rescales `m` so that its first nonzero entry is 1.
pub fn normalize_in_place(m: &mut Mat, f: &FieldSpec) {
    if let Some(&lead) = m.entries.iter().find(|x| !x.is_zero()) {
        if lead != Fe::ONE {
            let inv = f.inv(lead).expect("lead is nonzero");
            for x in m.entries.iter_mut() {
                *x = f.mul(inv, *x);
            }
        }
    }
}

pub fn proj_eq(a: &ProjMat, b: &ProjMat) -> bool {
    a == b
}

/// Breadth-first closure of projective generators, identity first.
pub fn closure(gens: &[ProjMat], n: usize, f: &FieldSpec, cap: usize) -> Result<Vec<ProjMat>> {
    let mut seen = std::collections::HashSet::new();
    let id = ProjMat::identity(n);
    seen.insert(id.clone());
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let y = out[i].mul(g, f);
            if seen.insert(y.clone()) {
                out.push(y);
                if out.len() > cap {
                    return Err(Error::CapExceeded { order: format!(">{cap}"), cap: cap as u64 });
                }
            }
        }
        i += 1;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Linear,
    Unitary,
}

impl std::fmt::Display for Form {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        w.write_str(match self {
            Form::Linear => "linear",
            Form::Unitary => "unitary",
        })
    }
}

impl std::str::FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Form> {
        match s {
            "linear" => Ok(Form::Linear),
            "unitary" => Ok(Form::Unitary),
            _ => Err(Error::InvalidConfig(format!("form must be linear or unitary, got {s:?}"))),
        }
    }
}

/// PGL_n(q), or PGU_n(q) realized inside PGL_n(q²) with Hermitian form J = I.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub form: Form,
    pub n: usize,
    /// GF(q).
    pub field: FieldSpec,
    /// Field holding matrix entries: GF(q) or GF(q²).
    pub mfield: FieldSpec,
    /// Hermitian form (unitary only).
    pub j: Option<Mat>,
}

impl GroupSpec {
    pub fn new(form: Form, n: usize, q: u64) -> Result<GroupSpec> {
        if n == 0 {
            return Err(Error::InvalidConfig("n must be positive".into()));
        }
        let field = FieldSpec::of_order(q)?;
        Ok(match form {
            Form::Linear => GroupSpec { form, n, mfield: field.clone(), field, j: None },
            Form::Unitary => {
                let mfield = field.quadratic_extension()?;
                GroupSpec { form, n, field, mfield, j: Some(Mat::identity(n)) }
            }
        })
    }

    pub fn linear(n: usize, q: u64) -> Result<GroupSpec> {
        GroupSpec::new(Form::Linear, n, q)
    }

    pub fn unitary(n: usize, q: u64) -> Result<GroupSpec> {
        GroupSpec::new(Form::Unitary, n, q)
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    /// `x ↦ x^q` on the matrix field.
    pub fn bar(&self, x: Fe) -> Fe {
        match self.form {
            Form::Linear => x,
            Form::Unitary => self.mfield.frobenius(x, self.field.degree()),
        }
    }

    pub fn bar_mat(&self, g: &Mat) -> Mat {
        g.map(|x| self.bar(x))
    }

    /// `ḡ^T J g = J`.
    pub fn unitary_check(&self, g: &Mat) -> bool {
        let f = &self.mfield;
        let j = self.j.clone().unwrap_or_else(|| Mat::identity(self.n));
        self.bar_mat(g).transpose().mul(&j, f).mul(g, f) == j
    }

    /// Whether the projective class of `g` lies in the finite group.
    pub fn contains(&self, g: &Mat) -> bool {
        let f = &self.mfield;
        if g.det(f).is_zero() {
            return false;
        }
        match self.form {
            Form::Linear => true,
            Form::Unitary => {
                let j = self.j.clone().unwrap_or_else(|| Mat::identity(self.n));
                let h = self.bar_mat(g).transpose().mul(&j, f).mul(g, f);
                // h = λJ with λ in GF(q); rescaling g by a norm preimage gives GU.
                let inv_j = j.inv(f).expect("form is invertible");
                inv_j.mul(&h, f).as_scalar().is_some()
            }
        }
    }

    /// The Steinberg map: entrywise `x ↦ x^q`, composed with inverse
    /// transpose relative to J in the unitary case.
    pub fn steinberg(&self, g: &Mat) -> Mat {
        let f = &self.mfield;
        match self.form {
            Form::Linear => g.map(|x| f.frobenius(x, self.field.degree())),
            Form::Unitary => {
                let j = self.j.clone().unwrap_or_else(|| Mat::identity(self.n));
                let jinv = j.inv(f).expect("form is invertible");
                let t = self.bar_mat(g).transpose().inv(f).expect("invertible");
                jinv.mul(&t, f).mul(&j, f)
            }
        }
    }

    pub fn is_steinberg_fixed(&self, g: &ProjMat) -> bool {
        let f = &self.mfield;
        ProjMat::normalize_unchecked(self.steinberg(g.mat()), f) == *g
    }

    /// Order of the finite group.
    pub fn order(&self) -> num_bigint::BigUint {
        match self.form {
            Form::Linear => crate::order::pgl_order(self.n as u32, self.q()),
            Form::Unitary => crate::order::pgu_order(self.n as u32, self.q()),
        }
    }

    /// Order of the scalar subgroup identified away: q−1 or q+1.
    pub fn center_order(&self) -> u64 {
        match self.form {
            Form::Linear => self.q() - 1,
            Form::Unitary => self.q() + 1,
        }
    }
}
