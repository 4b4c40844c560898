//! Component-group engine.
//!
//! For a nontoral class `Γ̄_r × Λ`, the centralizer component group is
//! `F_p^{2r} ⊕ V` where V is the translation stabilizer of Λ. The normalizer
//! acts on it through Sp_{2r}(p), the linear symmetries of Λ restricted to V,
//! and shears `(x, b) ↦ (x ± φ(b), b)`. Finite classes splitting from one
//! algebraic class are the orbits of the Steinberg-twisted action on these
//! points.
//!
//! Coordinates on `F_p^{2r}` are `(a_0, …, a_{r−1}, b_0, …, b_{r−1})` with
//! alternating form `B(x, y) = Σ x_{a_i} y_{b_i} − x_{b_i} y_{a_i}`.

use crate::error::{Error, Result};
use crate::fp::{self, Matrix, Vector};
use serde::Serialize;
use std::collections::HashSet;

/// Largest point set handled by exhaustive orbit computation.
pub const POINT_CAP: u64 = 1_000_000;

pub fn symplectic_form(x: &[u32], y: &[u32], p: u32) -> u32 {
    let r = x.len() / 2;
    let mut s = 0u64;
    for i in 0..r {
        s += x[i] as u64 * y[r + i] as u64;
        s += (p - y[i] % p) as u64 * x[r + i] as u64 % p as u64;
    }
    (s % p as u64) as u32
}

/// Transvection `x ↦ x + B(x, u)·u` as a matrix.
fn transvection(u: &[u32], p: u32) -> Matrix {
    let dim = u.len();
    let mut m = fp::identity(dim);
    for j in 0..dim {
        let mut e = vec![0; dim];
        e[j] = 1;
        let c = symplectic_form(&e, u, p);
        for i in 0..dim {
            m[i][j] = (m[i][j] + c * u[i]) % p;
        }
    }
    m
}

/// Transvections along basis vectors and sums of pairs of basis vectors.
pub fn sp_generators(r: usize, p: u32) -> Vec<Matrix> {
    let dim = 2 * r;
    let mut gens = Vec::new();
    for i in 0..dim {
        let mut u = vec![0; dim];
        u[i] = 1;
        gens.push(transvection(&u, p));
    }
    for i in 0..dim {
        for j in i + 1..dim {
            let mut u = vec![0; dim];
            u[i] = 1;
            u[j] = 1;
            gens.push(transvection(&u, p));
        }
    }
    gens
}

pub fn is_symplectic(m: &Matrix, p: u32) -> bool {
    let dim = m.len();
    let cols: Vec<Vector> = (0..dim).map(|j| m.iter().map(|row| row[j]).collect()).collect();
    (0..dim).all(|i| {
        (0..dim).all(|j| {
            let mut ei = vec![0; dim];
            let mut ej = vec![0; dim];
            ei[i] = 1;
            ej[j] = 1;
            symplectic_form(&cols[i], &cols[j], p) == symplectic_form(&ei, &ej, p)
        })
    })
}

/// A quadratic form on F_2^{2r} polarizing to the standard alternating form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadForm {
    pub r: usize,
    pub plus: bool,
}

impl QuadForm {
    pub fn new(r: usize, plus: bool) -> QuadForm {
        QuadForm { r, plus }
    }

    /// `Σ x_{a_i} x_{b_i}`, with `x_a² + x_b²` added on the last pair for type −.
    pub fn eval(&self, x: &[u32]) -> u32 {
        let r = self.r;
        let mut s = 0;
        for i in 0..r {
            s ^= x[i] & x[r + i] & 1;
        }
        if !self.plus {
            s ^= (x[r - 1] ^ x[2 * r - 1]) & 1;
        }
        s
    }

    pub fn polar(&self, x: &[u32], y: &[u32]) -> u32 {
        let mut s = vec![0; x.len()];
        for i in 0..x.len() {
            s[i] = (x[i] + y[i]) % 2;
        }
        self.eval(&s) ^ self.eval(x) ^ self.eval(y)
    }

    /// Number of singular vectors, zero included: `2^{2r−1} ± 2^{r−1}`.
    pub fn singular_count(&self) -> usize {
        (0..1usize << (2 * self.r)).filter(|&i| self.eval(&fp::vec_from_index(i, 2 * self.r, 2)) == 0).count()
    }

    /// Witt type read off from the singular count.
    pub fn is_hyperbolic(&self) -> bool {
        self.singular_count() > 1 << (2 * self.r - 1)
    }

    pub fn preserved_by(&self, m: &Matrix) -> bool {
        let dim = 2 * self.r;
        (0..1usize << dim).all(|i| {
            let x = fp::vec_from_index(i, dim, 2);
            self.eval(&fp::mat_vec(m, &x, 2)) == self.eval(&x)
        })
    }

    /// The vector c with `Q(s^{-1}x) = Q(x) + B(c, x)` for symplectic s.
    pub fn cocycle(&self, s: &Matrix) -> Vector {
        let dim = 2 * self.r;
        let inv = fp::inverse(s, 2).expect("symplectic matrices are invertible");
        let f = |t: usize| {
            let mut e = vec![0; dim];
            e[t] = 1;
            self.eval(&fp::mat_vec(&inv, &e, 2)) ^ self.eval(&e)
        };
        let mut c = vec![0; dim];
        for i in 0..self.r {
            c[i] = f(self.r + i);
            c[self.r + i] = f(i);
        }
        c
    }
}

// F_2 matrices of size ≤ 8 packed row-wise into a u64.

fn pack(m: &Matrix) -> u64 {
    let mut out = 0u64;
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x & 1 == 1 {
                out |= 1 << (8 * i + j);
            }
        }
    }
    out
}

fn unpack(b: u64, dim: usize) -> Matrix {
    (0..dim).map(|i| (0..dim).map(|j| ((b >> (8 * i + j)) & 1) as u32).collect()).collect()
}

fn mul2(a: u64, b: u64, dim: usize) -> u64 {
    let mut out = 0u64;
    for i in 0..dim {
        let row = (a >> (8 * i)) & 0xff;
        let mut acc = 0u64;
        for j in 0..dim {
            if (row >> j) & 1 == 1 {
                acc ^= (b >> (8 * j)) & 0xff;
            }
        }
        out |= acc << (8 * i);
    }
    out
}

fn apply2(a: u64, x: u32, dim: usize) -> u32 {
    let mut y = 0u32;
    for i in 0..dim {
        let row = ((a >> (8 * i)) & 0xff) as u32;
        y |= ((row & x).count_ones() & 1) << i;
    }
    y
}

fn closure2(gens: &[u64], dim: usize, cap: usize) -> Option<Vec<u64>> {
    let id = pack(&fp::identity(dim));
    let mut seen: HashSet<u64> = HashSet::new();
    seen.insert(id);
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        for &g in gens {
            let y = mul2(x, g, dim);
            if seen.insert(y) {
                out.push(y);
                if out.len() > cap {
                    return None;
                }
            }
        }
        i += 1;
    }
    Some(out)
}

/// Elements of Sp_{2r}(2) as packed matrices, by closure.
fn sp2_elements(r: usize) -> Vec<u64> {
    let gens: Vec<u64> = sp_generators(r, 2).iter().map(pack).collect();
    closure2(&gens, 2 * r, usize::MAX).expect("uncapped")
}

/// Order of the closure of symplectic generators; packed arithmetic for p = 2.
pub fn sp_closure_order(r: usize, p: u32, cap: usize) -> Option<usize> {
    if p == 2 && r <= 4 {
        let gens: Vec<u64> = sp_generators(r, 2).iter().map(pack).collect();
        closure2(&gens, 2 * r, cap).map(|v| v.len())
    } else {
        fp::matrix_closure(&sp_generators(r, p), p, cap).map(|v| v.len())
    }
}

fn preserves2(q: &QuadForm, m: u64) -> bool {
    // Q∘m − Q is additive for symplectic m, so basis vectors suffice.
    let dim = 2 * q.r;
    (0..dim).all(|t| {
        let y = apply2(m, 1 << t, dim);
        let yv = fp::vec_from_index(y as usize, dim, 2);
        let mut e = vec![0; dim];
        e[t] = 1;
        q.eval(&yv) == q.eval(&e)
    })
}

/// The stabilizer of a quadratic form in Sp_{2r}(2).
#[derive(Debug, Clone)]
pub struct OrthogonalGroup {
    pub form: QuadForm,
    pub generators: Vec<Matrix>,
    pub order: usize,
}

/// Filters the Sp_{2r}(2) closure by form preservation and extracts a
/// generating set whose closure is the whole filtered set.
pub fn so_generators(r: usize, plus: bool) -> Result<OrthogonalGroup> {
    if r == 0 || r > 3 {
        return Err(Error::CapacityExceeded(format!("orthogonal groups limited to 1 ≤ r ≤ 3, got {r}")));
    }
    let q = QuadForm::new(r, plus);
    let dim = 2 * r;
    let stab: Vec<u64> = sp2_elements(r).into_iter().filter(|&m| preserves2(&q, m)).collect();
    let mut gens: Vec<u64> = Vec::new();
    let mut sub: HashSet<u64> = [pack(&fp::identity(dim))].into_iter().collect();
    for &m in &stab {
        if sub.len() == stab.len() {
            break;
        }
        if !sub.contains(&m) {
            gens.push(m);
            sub = closure2(&gens, dim, usize::MAX).expect("uncapped").into_iter().collect();
        }
    }
    Ok(OrthogonalGroup { form: q, generators: gens.iter().map(|&g| unpack(g, dim)).collect(), order: stab.len() })
}

/// Order of the subgroup of Sp_{2r}(2) preserving the form, by filtering the
/// full closure.
pub fn so_order_by_filter(r: usize, plus: bool) -> usize {
    let q = QuadForm::new(r, plus);
    sp2_elements(r).into_iter().filter(|&m| preserves2(&q, m)).count()
}

/// Order of the closure of the given F_2 matrices.
pub fn closure_order_f2(gens: &[Matrix], dim: usize) -> usize {
    let packed: Vec<u64> = gens.iter().map(pack).collect();
    closure2(&packed, dim, usize::MAX).expect("uncapped").len()
}

/// Orbits of the orthogonal group on F_2^{2r}, each sorted, ordered by
/// least member.
pub fn quadratic_form_orbits(r: usize, plus: bool) -> Result<Vec<Vec<usize>>> {
    let so = so_generators(r, plus)?;
    let dim = 2 * r;
    let perms: Vec<Vec<u32>> = so
        .generators
        .iter()
        .map(|g| {
            let packed = pack(g);
            (0..1u32 << dim).map(|x| apply2(packed, x, dim)).collect()
        })
        .collect();
    Ok(orbits(1 << dim, &perms))
}

/// Orbits of the group generated by the permutations, each sorted, ordered
/// by least point.
pub fn orbits(n: usize, perms: &[Vec<u32>]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[start] = id;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for g in perms {
                let y = g[x] as usize;
                if label[y] == usize::MAX {
                    label[y] = id;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// Points of `F_p^{2r} ⊕ F_p^{r_1}` with generating permutations of the
/// (possibly twisted) action of N/C°.
#[derive(Debug, Clone)]
pub struct ActionSpace {
    pub p: u32,
    pub r: usize,
    pub r1: usize,
    /// Permutations of point indices.
    pub generators: Vec<Vec<u32>>,
    /// Whether symplectic generators carry the Steinberg correction.
    pub twisted: Option<QuadForm>,
}

impl ActionSpace {
    pub fn new(p: u32, r: usize, r1: usize) -> Result<ActionSpace> {
        let points = (p as u64).checked_pow((2 * r + r1) as u32).unwrap_or(u64::MAX);
        if points > POINT_CAP {
            return Err(Error::CapacityExceeded(format!("{points} component-group points exceed {POINT_CAP}")));
        }
        Ok(ActionSpace { p, r, r1, generators: Vec::new(), twisted: None })
    }

    pub fn dim(&self) -> usize {
        2 * self.r + self.r1
    }

    pub fn num_points(&self) -> usize {
        (self.p as usize).pow(self.dim() as u32)
    }

    pub fn point(&self, idx: usize) -> Vector {
        fp::vec_from_index(idx, self.dim(), self.p)
    }

    pub fn index(&self, v: &[u32]) -> usize {
        fp::vec_index(v, self.p)
    }

    /// Adds the permutation `x ↦ Mx + c` of the full coordinate space.
    pub fn add_affine(&mut self, m: &Matrix, c: &[u32]) {
        let p = self.p;
        let perm = (0..self.num_points())
            .map(|i| self.index(&fp::vec_add(&fp::mat_vec(m, &self.point(i), p), c, p)) as u32)
            .collect();
        self.generators.push(perm);
    }

    fn embed(&self, block: &Matrix, offset: usize) -> Matrix {
        let mut m = fp::identity(self.dim());
        for (i, row) in block.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[offset + i][offset + j] = x;
            }
        }
        m
    }

    /// Symplectic generators on the first summand. With a form Q0 each
    /// generator s acts as `a ↦ s·a + c_s`, which is the action of Sp on the
    /// quadratic forms `Q0 + B(a, ·)`.
    pub fn add_symplectic(&mut self, twist: Option<QuadForm>) {
        self.twisted = twist;
        let zero = vec![0; self.dim()];
        for s in sp_generators(self.r, self.p) {
            let m = self.embed(&s, 0);
            let mut c = zero.clone();
            if let Some(q) = twist {
                c[..2 * self.r].copy_from_slice(&q.cocycle(&s));
            }
            self.add_affine(&m, &c);
        }
    }

    /// Linear maps on the second summand.
    pub fn add_translation_linear(&mut self, mats: &[Matrix]) {
        let zero = vec![0; self.dim()];
        for l in mats {
            let m = self.embed(l, 2 * self.r);
            self.add_affine(&m, &zero);
        }
    }

    pub fn add_shears(&mut self) {
        let shears = fusion_shears(self.p, self.r, self.r1);
        self.generators.extend(shears);
    }
}

/// Shears `(x, b) ↦ (x + s·b_j·e_{a_0}, b)`, one per coordinate j of the
/// second summand, with `s = 1` for p = 2 and `s = −1` for odd p.
pub fn fusion_shears(p: u32, r: usize, r1: usize) -> Vec<Vec<u32>> {
    let dim = 2 * r + r1;
    let size = (p as usize).pow(dim as u32);
    let sign = if p == 2 { 1 } else { p - 1 };
    (0..r1)
        .map(|j| {
            (0..size)
                .map(|i| {
                    let mut v = fp::vec_from_index(i, dim, p);
                    v[0] = (v[0] + sign * v[2 * r + j]) % p;
                    fp::vec_index(&v, p) as u32
                })
                .collect()
        })
        .collect()
}

/// One finite class: least point of the orbit and its size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistedClass {
    pub representative: Vector,
    pub size: usize,
}

/// Orbits of the generated action, ordered by least point index.
pub fn f_twisted_classes(space: &ActionSpace) -> Vec<TwistedClass> {
    orbits(space.num_points(), &space.generators)
        .into_iter()
        .map(|o| TwistedClass { representative: space.point(o[0]), size: o.len() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sp_generators_are_symplectic() {
        for (r, p) in [(1, 2), (2, 2), (1, 3), (2, 3), (1, 5)] {
            assert!(sp_generators(r, p).iter().all(|g| is_symplectic(g, p)));
        }
    }

    #[test]
    fn sp_closure_orders() {
        assert_eq!(sp_closure_order(1, 2, 100), Some(6));
        assert_eq!(sp_closure_order(2, 2, 1000), Some(720));
        assert_eq!(sp_closure_order(1, 3, 100), Some(24));
        assert_eq!(sp_closure_order(1, 5, 1000), Some(120));
    }

    #[test]
    fn small_orthogonal_groups() {
        assert_eq!(so_generators(1, true).unwrap().order, 2);
        assert_eq!(so_generators(1, false).unwrap().order, 6);
        assert_eq!(so_generators(2, true).unwrap().order, 72);
        assert_eq!(so_generators(2, false).unwrap().order, 120);
        assert!(so_generators(4, true).is_err());
    }

    #[test]
    fn witt_types() {
        for r in 1..=3 {
            assert!(QuadForm::new(r, true).is_hyperbolic());
            assert!(!QuadForm::new(r, false).is_hyperbolic());
        }
        let q = QuadForm::new(2, false);
        let x = [1, 0, 1, 0];
        let y = [0, 1, 1, 1];
        assert_eq!(q.polar(&x, &y), symplectic_form(&x, &y, 2));
    }

    #[test]
    fn orbit_sizes() {
        let sizes = |r, plus| {
            let mut s: Vec<usize> = quadratic_form_orbits(r, plus).unwrap().iter().map(|o| o.len()).collect();
            s.sort_unstable();
            s
        };
        assert_eq!(sizes(1, true), vec![1, 1, 2]);
        assert_eq!(sizes(1, false), vec![1, 3]);
        assert_eq!(sizes(2, true), vec![1, 6, 9]);
    }

    #[test]
    fn untwisted_class_counts() {
        let mut s = ActionSpace::new(2, 1, 0).unwrap();
        s.add_symplectic(None);
        let c = f_twisted_classes(&s);
        assert_eq!(c.iter().map(|x| x.size).collect::<Vec<_>>(), vec![1, 3]);
        let mut s = ActionSpace::new(2, 1, 1).unwrap();
        s.add_symplectic(None);
        s.add_shears();
        assert_eq!(f_twisted_classes(&s).len(), 3);
    }

    #[test]
    fn twisted_class_counts() {
        let mut s = ActionSpace::new(2, 1, 0).unwrap();
        s.add_symplectic(Some(QuadForm::new(1, true)));
        let c = f_twisted_classes(&s);
        assert_eq!(c.iter().map(|x| x.size).collect::<Vec<_>>(), vec![3, 1]);
        let mut s = ActionSpace::new(2, 1, 1).unwrap();
        s.add_symplectic(Some(QuadForm::new(1, true)));
        s.add_shears();
        let c = f_twisted_classes(&s);
        assert_eq!(c.iter().map(|x| x.size).collect::<Vec<_>>(), vec![3, 1, 4]);
    }

    #[test]
    fn shear_signs() {
        let s = fusion_shears(2, 1, 1);
        let idx = |v: &[u32], p| fp::vec_index(v, p) as u32;
        assert_eq!(s[0][idx(&[0, 0, 1], 2) as usize], idx(&[1, 0, 1], 2));
        let s = fusion_shears(3, 1, 1);
        assert_eq!(s[0][idx(&[0, 0, 1], 3) as usize], idx(&[2, 0, 1], 3));
    }
}
