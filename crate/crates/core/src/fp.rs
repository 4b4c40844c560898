//! Small dense linear algebra over a prime field F_p.
//!
//! Vectors are `Vec<u32>` with entries in `0..p`; matrices are row-major
//! `Vec<Vec<u32>>`. These are used for weight vectors, symplectic and
//! orthogonal groups over F_p, and automorphisms of elementary abelian groups.

pub type Vector = Vec<u32>;
pub type Matrix = Vec<Vec<u32>>;

pub fn identity(d: usize) -> Matrix {
    (0..d)
        .map(|i| (0..d).map(|j| u32::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix, p: u32) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = 0u64;
                    for t in 0..k {
                        s += a[i][t] as u64 * b[t][j] as u64;
                    }
                    (s % p as u64) as u32
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[u32], p: u32) -> Vector {
    a.iter()
        .map(|row| {
            let s: u64 = row.iter().zip(v).map(|(&x, &y)| x as u64 * y as u64).sum();
            (s % p as u64) as u32
        })
        .collect()
}

pub fn vec_add(a: &[u32], b: &[u32], p: u32) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| (x + y) % p).collect()
}

pub fn vec_sub(a: &[u32], b: &[u32], p: u32) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| (x + p - y) % p).collect()
}

pub fn vec_scale(a: &[u32], c: u32, p: u32) -> Vector {
    a.iter().map(|&x| ((x as u64 * c as u64) % p as u64) as u32).collect()
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn rref(rows: &[Vector], p: u32) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(row, piv);
        let inv = inv_mod(m[row][col], p);
        m[row] = vec_scale(&m[row], inv, p);
        for i in 0..m.len() {
            if i != row && m[i][col] != 0 {
                let f = m[i][col];
                let scaled = vec_scale(&m[row], f, p);
                m[i] = vec_sub(&m[i], &scaled, p);
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    (m, pivots)
}

pub fn rank(rows: &[Vector], p: u32) -> usize {
    rref(rows, p).0.len()
}

/// Inverse of a square matrix, if invertible.
pub fn inverse(a: &Matrix, p: u32) -> Option<Matrix> {
    let d = a.len();
    let aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..d).map(|j| u32::from(i == j)));
            r
        })
        .collect();
    let (m, pivots) = rref(&aug, p);
    if pivots.len() < d || pivots[d - 1] != d - 1 {
        return None;
    }
    Some(m.into_iter().map(|r| r[d..].to_vec()).collect())
}

pub fn transpose(a: &Matrix) -> Matrix {
    let n = a.len();
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

/// Basis of the null space `{x : a·x = 0}`.
pub fn null_space(a: &Matrix, ncols: usize, p: u32) -> Vec<Vector> {
    let (m, pivots) = if a.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        rref(a, p)
    };
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u32; ncols];
            x[f] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                x[pc] = (p - row[f] % p) % p;
            }
            x
        })
        .collect()
}

/// Index of a vector in the base-p enumeration of F_p^d (first coordinate least significant).
pub fn vec_index(v: &[u32], p: u32) -> usize {
    v.iter().rev().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

pub fn vec_from_index(mut idx: usize, d: usize, p: u32) -> Vector {
    let mut v = Vec::with_capacity(d);
    for _ in 0..d {
        v.push((idx % p as usize) as u32);
        idx /= p as usize;
    }
    v
}

/// Generators of GL_d(p): a primitive-root scaling, one transvection and
/// the permutation matrices of a transposition and a d-cycle.
pub fn gl_generators(d: usize, p: u32) -> Vec<Matrix> {
    if d == 0 {
        return Vec::new();
    }
    let mut gens = Vec::new();
    let g = primitive_root(p);
    if g != 1 {
        let mut m = identity(d);
        m[0][0] = g;
        gens.push(m);
    }
    if d >= 2 {
        let mut t = identity(d);
        t[0][1] = 1;
        gens.push(t);
        let mut sw = identity(d);
        sw.swap(0, 1);
        gens.push(sw);
        if d >= 3 {
            let cyc: Matrix = (0..d)
                .map(|i| (0..d).map(|j| u32::from(j == (i + 1) % d)).collect())
                .collect();
            gens.push(cyc);
        }
    }
    gens
}

pub fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let n = p - 1;
    let rs = crate::gfq::prime_divisors(n as u64);
    (1..p)
        .find(|&g| {
            rs.iter().all(|&r| {
                let mut acc = 1u64;
                for _ in 0..(n as u64 / r) {
                    acc = acc * g as u64 % p as u64;
                }
                acc != 1
            })
        })
        .unwrap()
}

/// Closure of a set of invertible matrices under multiplication.
pub fn matrix_closure(gens: &[Matrix], p: u32, cap: usize) -> Option<Vec<Matrix>> {
    use std::collections::HashSet;
    let d = gens.first().map_or(0, |g| g.len());
    let id = identity(d);
    let mut seen: HashSet<Matrix> = HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        let x = out[i].clone();
        for g in gens {
            let y = mat_mul(&x, g, p);
            if seen.insert(y.clone()) {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let a = vec![vec![1, 2], vec![3, 4]];
        let inv = inverse(&a, 5).unwrap();
        assert_eq!(mat_mul(&a, &inv, 5), identity(2));
        assert!(inverse(&vec![vec![1, 2], vec![2, 4]], 5).is_none());
    }

    #[test]
    fn null_space_dimension() {
        let a = vec![vec![1, 1, 0]];
        let ns = null_space(&a, 3, 2);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!(mat_vec(&a, &v, 2), vec![0]);
        }
    }

    #[test]
    fn gl_generators_generate() {
        assert_eq!(matrix_closure(&gl_generators(2, 2), 2, 100).unwrap().len(), 6);
        assert_eq!(matrix_closure(&gl_generators(2, 3), 3, 100).unwrap().len(), 48);
        assert_eq!(matrix_closure(&gl_generators(3, 2), 2, 1000).unwrap().len(), 168);
    }

    #[test]
    fn index_roundtrip() {
        for i in 0..27 {
            assert_eq!(vec_index(&vec_from_index(i, 3, 3), 3), i);
        }
    }
}
