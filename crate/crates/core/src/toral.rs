//! Toral elementary abelian p-subgroups of PGL_n as weight multisets.
//!
//! A rank-d toral subgroup is diagonalizable; writing its generators as
//! `diag(β^{w_i})` assigns each of the n slots a weight `w_i ∈ F_p^d`.
//! Conjugacy classes of subgroups correspond to weight multisets modulo
//! GL_d(p), translations and slot permutations. Equivalently, to the
//! subspace `U = ⟨1, coordinate rows⟩ ⊂ F_p^n` modulo coordinate
//! permutations, or to its orthogonal complement `R = U^⊥`.
//!
//! Canonical keys are computed on whichever of U and R has smaller
//! dimension, by a frame search: choose an ordered basis among the columns,
//! rewrite all columns in that basis, and keep the least sorted result.
//! Frames are pruned by colour refinement on the columns.

use crate::error::{Error, Result};
use crate::fp::{self, Matrix, Vector};
use crate::gfq::Fe;
use crate::par::Exec;
use crate::projmat::{Form, GroupSpec, Mat, ProjMat};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

/// Largest slot count handled by the canonicalizer.
pub const MAX_SLOTS: usize = 16;
/// Cap on frames examined per canonicalization.
pub const FRAME_CAP: usize = 4_000_000;
const POLISH_BUDGET: usize = 20_000;

/// n weight vectors in F_p^d.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightMultiset {
    pub p: u32,
    pub d: usize,
    pub n: usize,
    pub weights: Vec<Vector>,
}

impl WeightMultiset {
    /// Validates that `{w_i − w_1}` spans F_p^d.
    pub fn new(p: u32, d: usize, weights: Vec<Vector>) -> Result<WeightMultiset> {
        if weights.is_empty() || weights.iter().any(|w| w.len() != d || w.iter().any(|&x| x >= p)) {
            return Err(Error::RankDeficient);
        }
        let w = WeightMultiset { p, d, n: weights.len(), weights };
        if w.affine_rank() != d {
            return Err(Error::RankDeficient);
        }
        Ok(w)
    }

    /// All n slots carry weight zero: the trivial subgroup.
    pub fn trivial(p: u32, n: usize) -> WeightMultiset {
        WeightMultiset { p, d: 0, n, weights: vec![Vec::new(); n] }
    }

    /// One-dimensional weights given as scalars.
    pub fn from_scalars(p: u32, ws: &[u32]) -> Result<WeightMultiset> {
        WeightMultiset::new(p, 1, ws.iter().map(|&x| vec![x % p]).collect())
    }

    fn affine_rank(&self) -> usize {
        let w0 = &self.weights[0];
        let diffs: Vec<Vector> = self.weights[1..].iter().map(|w| fp::vec_sub(w, w0, self.p)).collect();
        if diffs.is_empty() || self.d == 0 {
            return 0;
        }
        fp::rank(&diffs, self.p)
    }

    /// Distinct weights with multiplicities, in lexicographic order.
    pub fn support(&self) -> Vec<(Vector, usize)> {
        let mut m: BTreeMap<Vector, usize> = BTreeMap::new();
        for w in &self.weights {
            *m.entry(w.clone()).or_insert(0) += 1;
        }
        m.into_iter().collect()
    }

    fn sorted(mut self) -> WeightMultiset {
        self.weights.sort();
        self
    }

    /// Image under `x ↦ Lx + t`.
    pub fn apply(&self, l: &Matrix, t: &[u32]) -> WeightMultiset {
        let weights = self
            .weights
            .iter()
            .map(|w| fp::vec_add(&fp::mat_vec(l, w, self.p), t, self.p))
            .collect();
        WeightMultiset { p: self.p, d: self.d, n: self.n, weights }.sorted()
    }

    /// The subspace `U ⊂ F_p^n` spanned by the all-ones row and the coordinate rows.
    fn u_rows(&self) -> Vec<Vector> {
        let mut rows = vec![vec![1u32; self.n]];
        for j in 0..self.d {
            rows.push(self.weights.iter().map(|w| w[j]).collect());
        }
        rows
    }

    /// Fibre sizes of the element with exponent vector `c ∈ F_p^d`: how many
    /// slots take each eigenvalue exponent `⟨c, w_i⟩`.
    pub fn fibre_sizes(&self, c: &[u32]) -> Vec<usize> {
        let mut counts = vec![0usize; self.p as usize];
        for w in &self.weights {
            let v: u64 = w.iter().zip(c).map(|(&a, &b)| a as u64 * b as u64).sum();
            counts[(v % self.p as u64) as usize] += 1;
        }
        counts
    }
}

/// Direct product `A × B`: slot (b, a) carries weight `(w_a, w_b)`, matching
/// the layout `Δ(x)_{n_B}` for A and `y ⊗ I_{n_A}` for B.
pub fn product(a: &WeightMultiset, b: &WeightMultiset) -> WeightMultiset {
    let mut weights = Vec::with_capacity(a.n * b.n);
    for wb in &b.weights {
        for wa in &a.weights {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            weights.push(w);
        }
    }
    WeightMultiset { p: a.p, d: a.d + b.d, n: a.n * b.n, weights }
}

/// The weights of D_r inside PGL_{p^r}: every vector of F_p^r once.
pub fn d_group(p: u32, r: usize) -> WeightMultiset {
    let size = (p as usize).pow(r as u32);
    let weights = (0..size).map(|i| fp::vec_from_index(i, r, p)).collect();
    WeightMultiset { p, d: r, n: size, weights }
}

// ---------------------------------------------------------------------------
// Frame canonicalization of column multisets in F_p^k modulo GL_k(p).

struct Columns {
    p: u32,
    k: usize,
    /// Distinct columns (decoded) and multiplicities.
    vecs: Vec<Vector>,
    mult: Vec<usize>,
    codes: Vec<u32>,
    index: HashMap<u32, usize>,
}

fn encode(v: &[u32], p: u32) -> u32 {
    fp::vec_index(v, p) as u32
}

/// `a + l·b` on base-p codes of vectors in F_p^k.
fn add_scaled(a: u32, b: u32, l: u32, p: u32, k: usize) -> u32 {
    if p == 2 {
        return if l & 1 == 1 { a ^ b } else { a };
    }
    let (mut a, mut b) = (a, b);
    let mut out = 0u32;
    let mut place = 1u32;
    for _ in 0..k {
        let digit = (a % p + l * (b % p)) % p;
        out += digit * place;
        place *= p;
        a /= p;
        b /= p;
    }
    out
}

impl Columns {
    fn new(cols: &[Vector], p: u32, k: usize) -> Columns {
        let mut m: BTreeMap<u32, (Vector, usize)> = BTreeMap::new();
        for c in cols {
            m.entry(encode(c, p)).or_insert_with(|| (c.clone(), 0)).1 += 1;
        }
        let mut out = Columns { p, k, vecs: Vec::new(), mult: Vec::new(), codes: Vec::new(), index: HashMap::new() };
        for (code, (v, c)) in m {
            out.index.insert(code, out.vecs.len());
            out.vecs.push(v);
            out.mult.push(c);
            out.codes.push(code);
        }
        out
    }

    fn span_codes(&self, gens: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut acc: Vec<u32> = vec![0];
        for &g in gens {
            let mut next = Vec::with_capacity(acc.len() * p as usize);
            for &a in &acc {
                for l in 0..p {
                    next.push(add_scaled(a, g, l, p, self.k));
                }
            }
            acc = next;
        }
        acc
    }

    /// Colour refinement: multiplicity, scalar multiples present, and the
    /// colours of columns on each plane through the column.
    fn colours(&self) -> Vec<u32> {
        let m = self.vecs.len();
        let zero = |i: usize| self.vecs[i].iter().all(|&x| x == 0);
        let mut lookup = vec![u32::MAX; (self.p as usize).pow(self.k as u32)];
        for (i, &c) in self.codes.iter().enumerate() {
            lookup[c as usize] = i as u32;
        }
        let members = |codes: Vec<u32>| -> Vec<usize> {
            let mut v: Vec<usize> =
                codes.into_iter().filter_map(|c| Some(lookup[c as usize]).filter(|&x| x != u32::MAX)).map(|x| x as usize).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut multiples: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut planes: Vec<Vec<Vec<usize>>> = vec![Vec::new(); m];
        for i in 0..m {
            if zero(i) {
                continue;
            }
            let line = members(self.span_codes(&[self.codes[i]]));
            multiples[i] = line.iter().copied().filter(|&j| j != i && !zero(j)).collect();
            let mut seen: HashSet<Vec<usize>> = HashSet::new();
            for j in 0..m {
                if zero(j) || line.binary_search(&j).is_ok() {
                    continue;
                }
                let plane: Vec<usize> = members(self.span_codes(&[self.codes[i], self.codes[j]]))
                    .into_iter()
                    .filter(|t| line.binary_search(t).is_err())
                    .collect();
                if seen.insert(plane.clone()) {
                    planes[i].push(plane);
                }
            }
        }
        let mut colour: Vec<u32> = {
            let sig: Vec<(usize, bool)> = (0..m).map(|i| (self.mult[i], zero(i))).collect();
            rank_signatures(&sig)
        };
        let mut classes = count_distinct(&colour);
        loop {
            let sig: Vec<(u32, Vec<u32>, Vec<Vec<u32>>)> = (0..m)
                .map(|i| {
                    let mut mc: Vec<u32> = multiples[i].iter().map(|&j| colour[j]).collect();
                    mc.sort_unstable();
                    let mut pc: Vec<Vec<u32>> = planes[i]
                        .iter()
                        .map(|pl| {
                            let mut c: Vec<u32> = pl.iter().map(|&j| colour[j]).collect();
                            c.sort_unstable();
                            c
                        })
                        .collect();
                    pc.sort();
                    (colour[i], mc, pc)
                })
                .collect();
            let next = rank_signatures(&sig);
            let c = count_distinct(&next);
            colour = next;
            if c == classes {
                return colour;
            }
            classes = c;
        }
    }

    /// Least encoding over colour-optimal frames, and the frames achieving it.
    fn canonical(&self, keep_frames: bool, cap: usize) -> Result<(Vec<u32>, Vec<Vec<usize>>)> {
        let k = self.k;
        if k == 0 {
            return Ok((vec![0; self.mult.iter().sum()], vec![Vec::new()]));
        }
        let colour = self.colours();
        let mut search = FrameSearch {
            cols: self,
            colour: &colour,
            best: vec![u32::MAX; k],
            frames: Vec::new(),
            cap,
            in_span: vec![false; (self.p as usize).pow(k as u32)],
            span: vec![0],
        };
        search.in_span[0] = true;
        search.dfs(&mut Vec::new())?;
        let p = self.p;
        let mut best_key: Option<Vec<u32>> = None;
        let mut best_frames: Vec<Vec<usize>> = Vec::new();
        let total: usize = self.mult.iter().sum();
        let mut key: Vec<u32> = Vec::with_capacity(total);
        for frame in search.frames {
            let inv = small_inverse(&frame.iter().map(|&j| &self.vecs[j]).collect::<Vec<_>>(), p);
            key.clear();
            for (v, &c) in self.vecs.iter().zip(&self.mult) {
                let mut code = 0u32;
                for row in (0..k).rev() {
                    let s: u32 = (0..k).map(|t| inv[row][t] * v[t]).sum();
                    code = code * p + s % p;
                }
                key.extend(std::iter::repeat(code).take(c));
            }
            key.sort_unstable();
            let key = key.clone();
            match best_key.as_ref().map(|b| key.cmp(b)) {
                None | Some(std::cmp::Ordering::Less) => {
                    best_key = Some(key);
                    best_frames.clear();
                    if keep_frames {
                        best_frames.push(frame);
                    }
                }
                Some(std::cmp::Ordering::Equal) if keep_frames => best_frames.push(frame),
                _ => {}
            }
        }
        Ok((best_key.expect("columns span"), best_frames))
    }
}

const MAXK: usize = 16;

/// Inverse of the matrix whose columns are `cols` (k ≤ 16, entries < p < 2^10).
fn small_inverse(cols: &[&Vector], p: u32) -> [[u32; MAXK]; MAXK] {
    let k = cols.len();
    let mut a = [[0u32; 2 * MAXK]; MAXK];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..k {
            a[i][j] = c[i];
        }
    }
    for i in 0..k {
        a[i][k + i] = 1;
    }
    for col in 0..k {
        let piv = (col..k).find(|&i| a[i][col] != 0).expect("frames are bases");
        a.swap(col, piv);
        let inv = fp::inv_mod(a[col][col], p);
        for x in a[col][..2 * k].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..k {
            let f = a[i][col];
            if i != col && f != 0 {
                for t in 0..2 * k {
                    a[i][t] = (a[i][t] + (p - f) * a[col][t]) % p;
                }
            }
        }
    }
    let mut out = [[0u32; MAXK]; MAXK];
    for i in 0..k {
        out[i][..k].copy_from_slice(&a[i][k..2 * k]);
    }
    out
}

fn rank_signatures<T: Ord + Clone>(sig: &[T]) -> Vec<u32> {
    let mut distinct: Vec<T> = sig.to_vec();
    distinct.sort();
    distinct.dedup();
    sig.iter().map(|s| distinct.binary_search(s).unwrap() as u32).collect()
}

fn count_distinct(c: &[u32]) -> usize {
    c.iter().collect::<HashSet<_>>().len()
}

struct FrameSearch<'a> {
    cols: &'a Columns,
    colour: &'a [u32],
    best: Vec<u32>,
    frames: Vec<Vec<usize>>,
    cap: usize,
    in_span: Vec<bool>,
    span: Vec<u32>,
}

impl FrameSearch<'_> {
    fn dfs(&mut self, prefix: &mut Vec<usize>) -> Result<()> {
        let depth = prefix.len();
        if depth == self.cols.k {
            self.frames.push(prefix.clone());
            if self.frames.len() > self.cap {
                return Err(Error::CapacityExceeded(format!("more than {} frames", self.cap)));
            }
            return Ok(());
        }
        let cands: Vec<usize> =
            (0..self.cols.vecs.len()).filter(|&j| !self.in_span[self.cols.codes[j] as usize]).collect();
        let Some(cmin) = cands.iter().map(|&j| self.colour[j]).min() else {
            return Ok(());
        };
        match cmin.cmp(&self.best[depth]) {
            std::cmp::Ordering::Greater => return Ok(()),
            std::cmp::Ordering::Less => {
                self.best[depth] = cmin;
                for b in self.best[depth + 1..].iter_mut() {
                    *b = u32::MAX;
                }
                self.frames.clear();
            }
            std::cmp::Ordering::Equal => {}
        }
        for j in cands {
            if self.colour[j] != cmin || self.best[depth] != cmin {
                continue;
            }
            let before = self.span.len();
            self.extend_span(j);
            prefix.push(j);
            self.dfs(prefix)?;
            prefix.pop();
            for c in self.span.drain(before..) {
                self.in_span[c as usize] = false;
            }
        }
        Ok(())
    }

    fn extend_span(&mut self, j: usize) {
        let p = self.cols.p;
        let k = self.cols.k;
        let v = self.cols.codes[j];
        let old = self.span.len();
        for i in 0..old {
            let a = self.span[i];
            for l in 1..p {
                let c = add_scaled(a, v, l, p, k);
                if !self.in_span[c as usize] {
                    self.in_span[c as usize] = true;
                    self.span.push(c);
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Class keys.

/// A complete invariant of a toral class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey {
    pub p: u32,
    pub n: usize,
    pub d: usize,
    dual: bool,
    codes: Vec<u32>,
}

fn use_dual(n: usize, d: usize) -> bool {
    n - d - 1 < d + 1
}

fn check_envelope(w: &WeightMultiset) -> Result<()> {
    if w.n > MAX_SLOTS {
        return Err(Error::CapacityExceeded(format!("{} slots exceed the limit {MAX_SLOTS}", w.n)));
    }
    let k = (w.d + 1).min(w.n - w.d - 1) as u32;
    if (w.p as u64).saturating_pow(k) > 1 << 24 {
        return Err(Error::CapacityExceeded(format!("column space F_{}^{k} too large", w.p)));
    }
    Ok(())
}

/// Columns of U (`(1, w_i)`) or of a basis of `R = U^⊥`.
fn key_columns(w: &WeightMultiset) -> (bool, usize, Vec<Vector>) {
    let p = w.p;
    if use_dual(w.n, w.d) {
        let rows = w.u_rows();
        let r = fp::null_space(&rows, w.n, p);
        let c = r.len();
        let cols = (0..w.n).map(|i| r.iter().map(|row| row[i]).collect()).collect();
        (true, c, cols)
    } else {
        let cols = w
            .weights
            .iter()
            .map(|x| {
                let mut v = vec![1u32];
                v.extend_from_slice(x);
                v
            })
            .collect();
        (false, w.d + 1, cols)
    }
}

pub fn class_key(w: &WeightMultiset) -> Result<ClassKey> {
    check_envelope(w)?;
    let (dual, k, cols) = key_columns(w);
    let (codes, _) = Columns::new(&cols, w.p, k).canonical(false, FRAME_CAP)?;
    Ok(ClassKey { p: w.p, n: w.n, d: w.d, dual, codes })
}

fn weights_from_u(u_rows: &[Vector], p: u32, n: usize) -> WeightMultiset {
    let (rref, pivots) = fp::rref(u_rows, p);
    debug_assert_eq!(pivots.first(), Some(&0));
    let coord: Vec<&Vector> = rref.iter().skip(1).collect();
    let d = coord.len();
    let weights = (0..n).map(|i| coord.iter().map(|row| row[i]).collect()).collect();
    WeightMultiset { p, d, n, weights }.sorted()
}

fn representative_of_key(key: &ClassKey) -> WeightMultiset {
    let p = key.p;
    let k = if key.dual { key.n - key.d - 1 } else { key.d + 1 };
    let cols: Vec<Vector> = key.codes.iter().map(|&c| fp::vec_from_index(c as usize, k, p)).collect();
    let rows: Vec<Vector> = (0..k).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let u_rows = if key.dual {
        if k == 0 {
            fp::identity(key.n)
        } else {
            fp::null_space(&rows, key.n, p)
        }
    } else {
        rows
    };
    weights_from_u(&u_rows, p, key.n)
}

fn gl_list(p: u32, d: usize) -> Option<Arc<Vec<Matrix>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<Vec<Matrix>>>>> = OnceLock::new();
    let total = (p as u64).checked_pow((d * d) as u32)?;
    if total > 1 << 16 {
        return None;
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(p, d)) {
        return Some(v.clone());
    }
    let list: Vec<Matrix> = (0..total as usize)
        .map(|code| {
            let flat = fp::vec_from_index(code, d * d, p);
            flat.chunks(d).map(|c| c.to_vec()).collect::<Matrix>()
        })
        .filter(|m| fp::inverse(m, p).is_some())
        .collect();
    let arc = Arc::new(list);
    cache.lock().unwrap().insert((p, d), arc.clone());
    Some(arc)
}

/// Deterministic choice of coordinates for a class representative: the
/// lexicographically least image over GL_d(p) and translations when that
/// group is small, otherwise over translations only.
fn polish(w: WeightMultiset) -> WeightMultiset {
    let p = w.p;
    let support: Vec<Vector> = w.support().into_iter().map(|(v, _)| v).collect();
    let id = fp::identity(w.d);
    let gl = gl_list(p, w.d).filter(|g| g.len() * support.len() <= POLISH_BUDGET);
    let linear: Vec<Matrix> = match &gl {
        Some(g) => g.as_ref().clone(),
        None => vec![id],
    };
    let mut best: Option<WeightMultiset> = None;
    for l in &linear {
        for s in &support {
            let t = fp::vec_scale(&fp::mat_vec(l, s, p), p - 1, p);
            let img = w.apply(l, &t);
            if best.as_ref().is_none_or(|b| img.weights < b.weights) {
                best = Some(img);
            }
        }
    }
    best.expect("nonempty support")
}

/// Canonical representative of the class of `w`.
pub fn canonical_form(w: &WeightMultiset) -> Result<WeightMultiset> {
    if w.affine_rank() != w.d {
        return Err(Error::RankDeficient);
    }
    if w.d == 0 {
        return Ok(WeightMultiset::trivial(w.p, w.n));
    }
    let key = class_key(w)?;
    Ok(polish(representative_of_key(&key)))
}

/// Toral classes of PGL_n for slot counts 1..=n_max, rank ≤ d_max, each
/// level including the trivial class.
pub fn enumerate_levels(n_max: usize, p: u32, d_max: usize, exec: Exec) -> Result<Vec<Vec<WeightMultiset>>> {
    if n_max > MAX_SLOTS {
        return Err(Error::CapacityExceeded(format!("{n_max} slots exceed the limit {MAX_SLOTS}")));
    }
    let mut levels: Vec<Vec<WeightMultiset>> = vec![Vec::new(), vec![WeightMultiset::trivial(p, 1)]];
    for n in 2..=n_max {
        let parents = &levels[n - 1];
        let candidates: Vec<Result<(ClassKey, WeightMultiset)>> = exec.flat_map(parents, |parent| {
            let mut kids = Vec::new();
            for idx in new_point_representatives(parent) {
                let mut ws = parent.weights.clone();
                ws.push(fp::vec_from_index(idx, parent.d, p));
                kids.push(WeightMultiset { p, d: parent.d, n, weights: ws });
            }
            if parent.d < d_max {
                let mut ws: Vec<Vector> = parent
                    .weights
                    .iter()
                    .map(|w| {
                        let mut v = w.clone();
                        v.push(0);
                        v
                    })
                    .collect();
                let mut top = vec![0; parent.d + 1];
                top[parent.d] = 1;
                ws.push(top);
                kids.push(WeightMultiset { p, d: parent.d + 1, n, weights: ws });
            }
            kids.into_iter()
                .map(|kid| {
                    if kid.d == 0 {
                        return Ok((ClassKey { p, n, d: 0, dual: false, codes: Vec::new() }, kid));
                    }
                    class_key(&kid).map(|k| (k, kid))
                })
                .collect()
        });
        let mut seen: HashSet<ClassKey> = HashSet::new();
        let mut keys: Vec<ClassKey> = Vec::new();
        for c in candidates {
            let (key, _) = c?;
            if seen.insert(key.clone()) {
                keys.push(key);
            }
        }
        let mut level: Vec<WeightMultiset> = exec.map(&keys, |key| {
            if key.d == 0 {
                WeightMultiset::trivial(p, n)
            } else {
                polish(representative_of_key(key))
            }
        });
        level.sort_by(|a, b| (a.d, &a.weights).cmp(&(b.d, &b.weights)));
        levels.push(level);
    }
    Ok(levels)
}

/// One point of F_p^d per orbit of a subgroup of the affine symmetries of
/// `w`. A few evenly spaced elements are used; a subgroup only refines the
/// orbit partition, so every child class is still reached.
fn new_point_representatives(w: &WeightMultiset) -> Vec<usize> {
    let p = w.p;
    let size = (p as usize).pow(w.d as u32);
    if size <= 9 || w.d > 4 {
        return (0..size).collect();
    }
    let Ok(group) = affine_symmetries(w) else {
        return (0..size).collect();
    };
    let step = (group.elements.len() / 12).max(1);
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (l, t) in group.elements.iter().skip(1).step_by(step) {
        for idx in 0..size {
            let x = fp::vec_from_index(idx, w.d, p);
            let y = fp::vec_index(&fp::vec_add(&fp::mat_vec(l, &x, p), t, p), p);
            let (a, b) = (find(&mut parent, idx), find(&mut parent, y));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..size).filter(|&i| find(&mut parent, i) == i).collect()
}

/// One canonical representative per toral class of rank 1..=d_max in PGL_n.
pub fn enumerate_toral_classes(n: usize, p: u32, d_max: usize) -> Result<Vec<WeightMultiset>> {
    let levels = enumerate_levels(n, p, d_max.min(n.saturating_sub(1)), Exec::default())?;
    Ok(levels[n].iter().filter(|w| w.d >= 1).cloned().collect())
}

/// `{v : {w_i + v} = {w_i}}`, listed with zero first.
pub fn translation_stabilizer(w: &WeightMultiset) -> Vec<Vector> {
    let p = w.p;
    let mut sorted = w.weights.clone();
    sorted.sort();
    let w0 = &w.weights[0];
    let mut out: Vec<Vector> = w
        .support()
        .into_iter()
        .map(|(s, _)| fp::vec_sub(&s, w0, p))
        .filter(|v| {
            let mut shifted: Vec<Vector> = sorted.iter().map(|x| fp::vec_add(x, v, p)).collect();
            shifted.sort();
            shifted == sorted
        })
        .collect();
    out.sort();
    out
}

/// Writes `w` as `D_{r_1} × H` with H of connected centralizer, and checks
/// the product against `w` by comparing class keys.
pub fn decompose_disconnected(w: &WeightMultiset) -> Result<(usize, WeightMultiset)> {
    let p = w.p;
    let stab = translation_stabilizer(w);
    if stab.len() <= 1 {
        return Err(Error::NotDisconnected);
    }
    let (basis, _) = fp::rref(&stab, p);
    let r1 = basis.len();
    // Complete the stabilizer basis to a basis of F_p^d with unit vectors.
    let mut full = basis.clone();
    for i in 0..w.d {
        let mut e = vec![0; w.d];
        e[i] = 1;
        let mut trial = full.clone();
        trial.push(e.clone());
        if fp::rank(&trial, p) > full.len() {
            full = trial;
        }
    }
    let change = fp::inverse(&fp::transpose(&full), p).expect("basis");
    let new_coords: Vec<Vector> = w.weights.iter().map(|x| fp::mat_vec(&change, x, p)).collect();
    let mut counts: BTreeMap<Vector, usize> = BTreeMap::new();
    for x in &new_coords {
        *counts.entry(x[r1..].to_vec()).or_insert(0) += 1;
    }
    let block = (p as usize).pow(r1 as u32);
    let mut h_weights = Vec::new();
    for (x, c) in counts {
        if c % block != 0 {
            return Err(Error::NotDisconnected);
        }
        h_weights.extend(std::iter::repeat(x).take(c / block));
    }
    let h = if w.d == r1 {
        WeightMultiset::trivial(p, h_weights.len())
    } else {
        WeightMultiset::new(p, w.d - r1, h_weights)?
    };
    let h = canonical_form(&h)?;
    let rebuilt = product(&d_group(p, r1), &h);
    if class_key(&rebuilt)? != class_key(w)? {
        return Err(Error::NotDisconnected);
    }
    Ok((r1, h))
}

/// Affine maps `x ↦ Lx + t` preserving a weight multiset.
#[derive(Debug, Clone)]
pub struct AffineSymmetryGroup {
    pub p: u32,
    pub d: usize,
    pub elements: Vec<(Matrix, Vector)>,
    /// Elements with `L = I`.
    pub translations: Vec<Vector>,
    /// Distinct linear parts.
    pub linear_parts: Vec<Matrix>,
}

impl AffineSymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Order of N/C: the number of distinct linear parts.
    pub fn linear_order(&self) -> usize {
        self.linear_parts.len()
    }
}

/// All affine symmetries, found as the optimal frames of the column
/// canonicalization of `(1, w_i)`.
pub fn affine_symmetries(w: &WeightMultiset) -> Result<AffineSymmetryGroup> {
    affine_symmetries_capped(w, FRAME_CAP)
}

/// As [`affine_symmetries`], failing with CapacityExceeded when more than
/// `cap` candidate frames are examined.
pub fn affine_symmetries_capped(w: &WeightMultiset, cap: usize) -> Result<AffineSymmetryGroup> {
    let p = w.p;
    let d = w.d;
    if d == 0 {
        return Ok(AffineSymmetryGroup {
            p,
            d,
            elements: vec![(Vec::new(), Vec::new())],
            translations: vec![Vec::new()],
            linear_parts: vec![Vec::new()],
        });
    }
    check_envelope(w)?;
    let cols: Vec<Vector> = w
        .weights
        .iter()
        .map(|x| {
            let mut v = vec![1u32];
            v.extend_from_slice(x);
            v
        })
        .collect();
    let columns = Columns::new(&cols, p, d + 1);
    let (_, frames) = columns.canonical(true, cap)?;
    let as_matrix = |frame: &Vec<usize>| -> Matrix {
        (0..=d).map(|row| frame.iter().map(|&j| columns.vecs[j][row]).collect()).collect()
    };
    let f0 = as_matrix(&frames[0]);
    let f0_inv = fp::inverse(&f0, p).expect("frame");
    let mut elements: Vec<(Matrix, Vector)> = frames
        .iter()
        .map(|fr| {
            let a = fp::mat_mul(&as_matrix(fr), &f0_inv, p);
            let t: Vector = (1..=d).map(|i| a[i][0]).collect();
            let l: Matrix = (1..=d).map(|i| a[i][1..].to_vec()).collect();
            (l, t)
        })
        .collect();
    elements.sort();
    let id = fp::identity(d);
    let translations = elements.iter().filter(|(l, _)| *l == id).map(|(_, t)| t.clone()).collect();
    let mut linear_parts: Vec<Matrix> = elements.iter().map(|(l, _)| l.clone()).collect();
    linear_parts.sort();
    linear_parts.dedup();
    Ok(AffineSymmetryGroup { p, d, elements, translations, linear_parts })
}

/// A primitive p-th root of unity usable for diagonal representatives in
/// the given group: in GF(q) for linear groups, of norm one in GF(q²) for
/// unitary groups.
pub fn diagonal_root(p: u32, spec: &GroupSpec) -> Result<Fe> {
    let q = spec.q();
    let ok = match spec.form {
        Form::Linear => (q - 1) % p as u64 == 0,
        Form::Unitary => (q + 1) % p as u64 == 0,
    };
    if !ok {
        return Err(Error::NoSuchRoot { p, q: q as u32 });
    }
    spec.mfield.root_of_unity(p)
}

/// Diagonal generators `diag(β^{w_i[j]})`, one per coordinate j.
pub fn realize_in_group(w: &WeightMultiset, spec: &GroupSpec) -> Result<Vec<ProjMat>> {
    if w.n != spec.n {
        return Err(Error::DimensionMismatch(format!("{} slots in PGL_{}", w.n, spec.n)));
    }
    let beta = diagonal_root(w.p, spec)?;
    let f = &spec.mfield;
    (0..w.d)
        .map(|j| {
            let d: Vec<Fe> = w.weights.iter().map(|x| f.pow(beta, x[j] as u64)).collect();
            ProjMat::new(Mat::diag(&d), f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(p: u32, d: usize, v: &[&[u32]]) -> WeightMultiset {
        WeightMultiset::new(p, d, v.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let a = WeightMultiset::from_scalars(2, &[0, 1]).unwrap();
        assert_eq!(canonical_form(&a).unwrap(), a);
        let b = WeightMultiset::from_scalars(2, &[1, 1, 0]).unwrap();
        assert_eq!(canonical_form(&b).unwrap().weights, vec![vec![0], vec![0], vec![1]]);
        let c = ws(2, 2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        assert_eq!(canonical_form(&c).unwrap(), c);
    }

    #[test]
    fn rank_deficiency_detected() {
        assert_eq!(WeightMultiset::new(2, 2, vec![vec![0, 0], vec![1, 1]]), Err(Error::RankDeficient));
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_toral_classes(2, 2, 1).unwrap().len(), 1);
        assert_eq!(enumerate_toral_classes(3, 2, 1).unwrap().len(), 1);
    }

    #[test]
    fn stabilizers() {
        let a = WeightMultiset::from_scalars(2, &[0, 1]).unwrap();
        assert_eq!(translation_stabilizer(&a).len(), 2);
        let b = WeightMultiset::from_scalars(2, &[0, 0, 1]).unwrap();
        assert_eq!(translation_stabilizer(&b).len(), 1);
        let c = WeightMultiset::from_scalars(3, &[0, 1, 2]).unwrap();
        assert_eq!(translation_stabilizer(&c).len(), 3);
    }

    #[test]
    fn decompositions() {
        let a = WeightMultiset::from_scalars(2, &[0, 1]).unwrap();
        let (r1, h) = decompose_disconnected(&a).unwrap();
        assert_eq!((r1, h.d, h.n), (1, 0, 1));
        let (r1, h) = decompose_disconnected(&d_group(2, 2)).unwrap();
        assert_eq!((r1, h.d), (2, 0));
        let u1 = WeightMultiset::from_scalars(2, &[0, 0, 1]).unwrap();
        let w = product(&d_group(2, 1), &u1);
        let (r1, h) = decompose_disconnected(&w).unwrap();
        assert_eq!(r1, 1);
        assert_eq!(class_key(&h).unwrap(), class_key(&u1).unwrap());
        assert_eq!(decompose_disconnected(&u1), Err(Error::NotDisconnected));
    }

    #[test]
    fn affine_symmetry_orders() {
        let a = WeightMultiset::from_scalars(2, &[0, 1]).unwrap();
        let g = affine_symmetries(&a).unwrap();
        assert_eq!((g.order(), g.translations.len(), g.linear_order()), (2, 2, 1));
        let g = affine_symmetries(&d_group(2, 2)).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.linear_order(), 6);
        let u1 = WeightMultiset::from_scalars(2, &[0, 0, 1]).unwrap();
        let g = affine_symmetries(&product(&d_group(2, 1), &u1)).unwrap();
        assert_eq!((g.order(), g.linear_order()), (4, 2));
    }

    #[test]
    fn realizations() {
        let spec = GroupSpec::linear(2, 5).unwrap();
        let a = WeightMultiset::from_scalars(2, &[0, 1]).unwrap();
        let g = realize_in_group(&a, &spec).unwrap();
        assert_eq!(g[0], ProjMat::new(Mat::diag(&[Fe(1), Fe(4)]), &spec.mfield).unwrap());
        let spec3 = GroupSpec::linear(3, 5).unwrap();
        let b = WeightMultiset::from_scalars(2, &[0, 0, 1]).unwrap();
        let g = realize_in_group(&b, &spec3).unwrap();
        assert_eq!(g[0], ProjMat::new(Mat::diag(&[Fe(1), Fe(1), Fe(4)]), &spec3.mfield).unwrap());
        let c = WeightMultiset::from_scalars(3, &[0, 1, 2]).unwrap();
        assert!(matches!(realize_in_group(&c, &spec3), Err(Error::NoSuchRoot { .. })));
    }
}
